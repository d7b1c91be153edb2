#pragma once

#include "hce/jetcalc.hpp"
#include "hce/linalg.hpp"

namespace hce {

enum class FieldKind { Point, Equivalence };

struct EmptySystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The expanded right-hand side E_x u_x + E_u u_x^2 + E u_xx + H. For the
// point analysis E,H are (x,u) function kernels; for the equivalence analysis
// they are extended-space coordinates with formal partial symbols.
Expr equation_rhs(FieldKind kind);

// Residual of the invariance condition after eliminating u_t (and for the
// equivalence kind imposing E_t = H_t = 0). The equivalence kind packs the
// three conditions of the auxiliary system u_t = [...], E_t = 0, H_t = 0 into
// one expression as main + mu_E * chi^t + mu_H * eta^t with fresh marker
// symbols, so splitting recovers the union of the three systems exactly.
Expr invariance_residual(const VectorField& y, FieldKind kind);

// chi^t and eta^t residuals at E_t = H_t = 0 (equivalence generators only).
std::pair<Expr, Expr> auxiliary_residuals(const VectorField& y);

struct DeterminingSystem {
    FieldKind kind = FieldKind::Point;
    std::vector<FuncId> unknowns;
    std::vector<Expr> equations;
    std::vector<std::pair<Expr, Expr>> monomial_log;  // jet monomial -> originating equation
};

DeterminingSystem split_determining(const Expr& residual, FieldKind kind);

struct AnsatzSolution {
    std::vector<VectorField> basis;
    int degree = 0;
    std::size_t system_rank = 0;
    std::size_t unknown_count = 0;  // number of ansatz coefficients
};

// Substitutes a total-degree <= degree polynomial ansatz for every unknown,
// treats E, H and their formal partials as independent symbols, extracts the
// homogeneous linear system in the ansatz coefficients and returns a
// nullspace basis as vector fields (deterministic order).
AnsatzSolution solve_polynomial_ansatz(const DeterminingSystem& sys, int degree);

struct VerifyResult {
    bool valid = false;
    Expr residual;
};

// Valid iff the invariance residual vanishes identically with E,H arbitrary;
// `forms` may bind the E/H kernels to concrete classified expressions, in
// which case the substituted residual must vanish identically in Phi, Psi and
// their formal derivatives.
VerifyResult verify_generator(const VectorField& y, FieldKind kind, const Bindings& forms = {});

// Kernel substitution map for verify_generator: binds E(x,u), H(x,u) and all
// their derivative kernels up to the orders the residual uses.
Bindings kernel_bindings(const Expr& e_form, const Expr& h_form);

// Generators with symbolic unknown coefficient functions, used to build the
// determining systems.
VectorField generic_unknown_field(FieldKind kind);

// One-call pipeline: residual of the generic field, split, solve.
AnsatzSolution solve_symmetries(FieldKind kind, int degree);

} // namespace hce
