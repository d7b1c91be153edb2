#pragma once

#include <map>
#include <vector>

#include "hce/expr.hpp"

namespace hce {

// A vector field Sigma_i c_i(coords) d/d(coord_i) on an ordered coordinate
// list. Missing coordinates have coefficient zero.
class VectorField {
public:
    VectorField() = default;
    VectorField(std::vector<SymbolId> coords, std::map<SymbolId, Expr> coeffs);

    const std::vector<SymbolId>& coords() const { return coords_; }
    Expr coeff(SymbolId c) const;
    void set_coeff(SymbolId c, const Expr& e);

    // directional derivative Sigma c_i * d(e)/d(coord_i)
    Expr apply(const Expr& e) const;

    bool is_zero() const;
    friend bool operator==(const VectorField& a, const VectorField& b);

    static VectorField combine(const std::vector<std::pair<Rational, VectorField>>& parts);
    VectorField scaled(const Rational& q) const;

    // Point generator on (t,x,u): xi d/dt + tau d/dx + phi d/du.
    static VectorField point(const Expr& xi, const Expr& tau, const Expr& phi);
    // Equivalence generator on (t,x,u,E,H).
    static VectorField equivalence(const Expr& xi, const Expr& tau, const Expr& phi,
                                   const Expr& chi, const Expr& eta);
    // Drops coordinates not in `keep` (projection); keeps coefficients as-is.
    VectorField project(const std::vector<SymbolId>& keep) const;

    std::string to_text() const;  // "xi*d/dt + ..." rendering

private:
    std::vector<SymbolId> coords_;
    std::map<SymbolId, Expr> coeffs_;
};

// Syntactic dependence checks from the spec's VectorField invariants; throw
// std::invalid_argument on violation.
void check_point_field(const VectorField& y);
void check_equivalence_field(const VectorField& y);

// A prolonged field: the base plus generated coefficients for derivative
// coordinates (u-jets, and for equivalence fields the E/H-jets).
struct ProlongedField {
    VectorField base;
    std::map<SymbolId, Expr> jet_coeffs;

    Expr coeff(SymbolId c) const;
    Expr apply(const Expr& e) const;
};

} // namespace hce
