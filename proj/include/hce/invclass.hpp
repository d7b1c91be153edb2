#pragma once

#include <optional>
#include <variant>

#include "hce/detsys.hpp"
#include "hce/optsys.hpp"

namespace hce {

// Shape of one coordinate ODE d(zeta)/ds = c, lambda*zeta, or lambda*zeta+c
// along a projected generator; constants may involve the alpha/beta
// parameters symbolically.
enum class SlotShape { Zero, Translation, Scaling, Affine };

struct CoordODE {
    SymbolId coord{};
    SlotShape shape = SlotShape::Zero;
    Expr scale;  // Scaling/Affine rate
    Expr shift;  // Translation/Affine constant
};

// shape classification of each (x,u,E,H) coefficient; Affine occurs for the
// canonical projections of the Y2+Y4-type representatives only
std::vector<CoordODE> classify_coordinates(const VectorField& z);

struct InvariantSet {
    Expr I1, I2, I3;               // log-canonical forms
    std::optional<Expr> lambda;    // the (x,u)-only invariant when it exists
    // reconstruction data
    bool reconstructible = false;
    Expr e_rate, h_rate;           // 0 when the slot is itself invariant
    Expr anchor_value;             // first-integral coordinate of the anchor
};

InvariantSet invariants_of(const VectorField& z);

struct Family {
    Expr e_form, h_form;  // expressions in Phi(lambda), Psi(lambda)
    Expr lambda;
};

struct NoInvariantEquation {};

std::variant<Family, NoInvariantEquation> reconstruct_equation(const InvariantSet& inv);

// (t,x,u)-projections of every representative sharing A^i's projection Z,
// normalized to primitive integer coefficients with positive leading term;
// sign slots not fixed by Z (the Y1 slot) contribute both variants.
std::vector<VectorField> additional_operator(int representative_index);

struct ClassificationEntry {
    int printed_row = 0;  // 0 for the Z4 no-invariant-equation entry
    int z_index = 0;
    std::string regime;            // "generic", "alpha2 = 1/2", ...
    std::map<int, int> signs;      // A-pattern sign slots used
    Bindings param_bindings;       // pinned/degenerate parameter values
    std::optional<Expr> lambda;
    std::optional<Expr> e_form, h_form;
    std::vector<VectorField> operators;  // verified X^(2) candidates
    std::string operators_display;
    bool no_invariant = false;
    bool degenerate_detected = false;  // regime found by exponent vanishing
    bool printed_special = false;      // regime printed as special but
                                       // canonically generic (Y4 cascade)
    bool verified = false;             // all operators + d/dt pass
    std::string note;                  // print-divergence notes
};

// Regenerates the full classification (37 printed rows plus the Z4 entry);
// `bound` may pin alpha/beta parameters to exact rationals.
std::vector<ClassificationEntry> classify_all(const Bindings& bound = {});

// The machine-detected degenerate regimes per Z index (H-exponent vanishing),
// exposed so tests can compare them against the printed row inventory.
std::vector<std::pair<int, std::string>> detected_degeneracies();

} // namespace hce
