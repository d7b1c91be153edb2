#pragma once

#include <array>
#include <optional>

#include "hce/exppoly.hpp"
#include "hce/linalg.hpp"
#include "hce/vectorfield.hpp"

namespace hce {

struct NotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonRationalSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedCoefficientShape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Vec6 = std::array<Rational, 6>;

VectorField lie_bracket(const VectorField& a, const VectorField& b);

struct ExpPolyMatrix {
    std::array<std::array<ExpPoly, 6>, 6> m;

    std::array<ExpPoly, 6> column(int j) const;
    ExpPolyMatrix operator*(const ExpPolyMatrix& o) const;
    // entrywise exact evaluation -> rational matrix
    RatMatrix eval(const ExpParam& s) const;
    RatMatrix at_zero() const;
    ExpPolyMatrix derivative() const;
};

// The six-dimensional equivalence algebra in the canonical basis
//   Y1 = d/dt, Y2 = d/dx, Y3 = d/du,
//   Y4 = 2t d/dt + x d/dx - 2H d/dH,
//   Y5 = -t d/dt + E d/dE + H d/dH,
//   Y6 = u d/du + H d/dH.
class EquivalenceAlgebra {
public:
    static const EquivalenceAlgebra& canonical();

    const VectorField& Y(int i) const { return basis_[i - 1]; }  // 1-based
    const std::array<VectorField, 6>& basis() const { return basis_; }

    VectorField field_of(const Vec6& v) const;
    // Expands a field in the basis; NotClosed if outside the rational span.
    Vec6 expand(const VectorField& vf) const;

    // bracket in coordinates via the structure constants
    Vec6 bracket_vec(const Vec6& a, const Vec6& b) const;
    const Vec6& structure(int i, int j) const { return table_[i - 1][j - 1]; }  // [Yi,Yj]

    RatMatrix ad(const Vec6& v) const;
    Rational killing_trace(const Vec6& a, const Vec6& b) const;
    static Rational killing_closed(const Vec6& a, const Vec6& b);
    RatMatrix killing_matrix() const;

    // Derived series L >= L^(1) >= ... until stable; each entry is an RREF
    // basis (rows) of the subalgebra in basis coordinates; the series used by
    // the solvability claim terminates at an empty matrix.
    static std::vector<RatMatrix> derived_series_of(
        const std::array<std::array<Vec6, 6>, 6>& table);
    std::vector<RatMatrix> derived_series() const;

    // Ad(exp(s Y_i)) = exp(-s ad(Y_i)) as an exact ExpPoly matrix, computed
    // through the additive Jordan-Chevalley split of ad(Y_i) over Q.
    const ExpPolyMatrix& adjoint_matrix(int i) const;
    std::array<ExpPoly, 6> adjoint_action(int i, int j) const;

private:
    EquivalenceAlgebra();
    std::array<VectorField, 6> basis_;
    std::array<std::array<Vec6, 6>, 6> table_;
    mutable std::array<std::optional<ExpPolyMatrix>, 6> adjoint_cache_;
};

// exp(-s A) for a rational matrix whose spectrum is rational; the building
// block behind adjoint_matrix, exposed for user-supplied algebras and tests.
ExpPolyMatrix exp_neg_s(const RatMatrix& a);

// --- one-parameter flows and the discrete reflections ---

enum class CoordShape { Fixed, Translation, Scaling };

struct FlowComponent {
    SymbolId coord;
    CoordShape shape = CoordShape::Fixed;
    Rational amount{0};  // translation speed / scaling rate
    Expr map;            // image of the coordinate, an Expr in (t,x,u,E,H,s)
};

struct Flow {
    int generator = 0;  // 1-based basis index; 0 for reflections
    std::string name;
    std::vector<FlowComponent> components;

    Expr map_of(SymbolId coord) const;
    // map with the parameter bound to a concrete expression
    Expr map_at(SymbolId coord, const Expr& s_value) const;
};

Flow flow(const EquivalenceAlgebra& alg, int i);
// flow of an arbitrary field whose coefficients are constant or
// linear-diagonal; UnsupportedCoefficientShape otherwise
Flow flow_of_field(const VectorField& y, int generator_index, const std::string& name);

// The four discrete involutions closing the printed reflection list inside
// the equation class: (t,E,H) -> (-t,-E,-H); (u,H) -> (-u,-H); x -> -x; and
// the (t,u) composite.
std::vector<Flow> reflections();

// Action of a reflection on algebra coordinate vectors (conjugation).
Vec6 reflect_vec(const Flow& r, const Vec6& v);

// --- solution transformation rules ---

struct SolutionRule {
    int generator = 0;
    Expr u_rule;      // new solution in terms of the formal f(.,.)
    Expr e_bar;       // Ebar(x,u) as an expression in the E kernel
    Expr h_bar;       // Hbar(x,u) as an expression in the H kernel
    bool verified = false;
};

// The pullback rule of flow(i) whose f-arguments match the printed rule
// list; verification substitutes the rule into the (Ebar,Hbar)-equation and
// eliminates f_t by the original equation.
SolutionRule transform_solution(const EquivalenceAlgebra& alg, int i);

} // namespace hce
