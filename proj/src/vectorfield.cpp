#include "hce/vectorfield.hpp"

#include <algorithm>
#include <stdexcept>

#include "hce/expr_io.hpp"

namespace hce {

VectorField::VectorField(std::vector<SymbolId> coords, std::map<SymbolId, Expr> coeffs)
    : coords_(std::move(coords)), coeffs_(std::move(coeffs)) {
    for (const auto& [c, e] : coeffs_)
        if (std::find(coords_.begin(), coords_.end(), c) == coords_.end())
            throw std::invalid_argument("coefficient for a symbol outside the coordinate list");
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
}

Expr VectorField::coeff(SymbolId c) const {
    auto it = coeffs_.find(c);
    return it == coeffs_.end() ? Expr{} : it->second;
}

void VectorField::set_coeff(SymbolId c, const Expr& e) {
    if (std::find(coords_.begin(), coords_.end(), c) == coords_.end())
        throw std::invalid_argument("coefficient for a symbol outside the coordinate list");
    if (e.is_zero())
        coeffs_.erase(c);
    else
        coeffs_[c] = e;
}

Expr VectorField::apply(const Expr& e) const {
    std::vector<Expr> parts;
    for (const auto& [c, coef] : coeffs_) parts.push_back(coef * diff(e, c));
    return add(parts);
}

bool VectorField::is_zero() const {
    return coeffs_.empty();
}

bool operator==(const VectorField& a, const VectorField& b) {
    if (a.coords_ != b.coords_) return false;
    for (SymbolId c : a.coords_)
        if (a.coeff(c) != b.coeff(c)) return false;
    return true;
}

VectorField VectorField::combine(const std::vector<std::pair<Rational, VectorField>>& parts) {
    if (parts.empty()) return {};
    VectorField out;
    out.coords_ = parts.front().second.coords_;
    for (SymbolId c : out.coords_) {
        std::vector<Expr> sum;
        for (const auto& [q, vf] : parts) {
            if (vf.coords_ != out.coords_)
                throw std::invalid_argument("combining fields over different coordinate spaces");
            sum.push_back(num(q) * vf.coeff(c));
        }
        Expr e = add(sum);
        if (!e.is_zero()) out.coeffs_[c] = e;
    }
    return out;
}

VectorField VectorField::scaled(const Rational& q) const {
    return combine({{q, *this}});
}

VectorField VectorField::point(const Expr& xi, const Expr& tau, const Expr& phi) {
    auto& S = syms();
    std::map<SymbolId, Expr> m;
    if (!xi.is_zero()) m[S.t] = xi;
    if (!tau.is_zero()) m[S.x] = tau;
    if (!phi.is_zero()) m[S.u] = phi;
    return VectorField({S.t, S.x, S.u}, std::move(m));
}

VectorField VectorField::equivalence(const Expr& xi, const Expr& tau, const Expr& phi,
                                     const Expr& chi, const Expr& eta) {
    auto& S = syms();
    std::map<SymbolId, Expr> m;
    if (!xi.is_zero()) m[S.t] = xi;
    if (!tau.is_zero()) m[S.x] = tau;
    if (!phi.is_zero()) m[S.u] = phi;
    if (!chi.is_zero()) m[S.E] = chi;
    if (!eta.is_zero()) m[S.H] = eta;
    return VectorField({S.t, S.x, S.u, S.E, S.H}, std::move(m));
}

VectorField VectorField::project(const std::vector<SymbolId>& keep) const {
    std::map<SymbolId, Expr> m;
    for (SymbolId c : keep) {
        Expr e = coeff(c);
        if (!e.is_zero()) m[c] = e;
    }
    return VectorField(keep, std::move(m));
}

std::string VectorField::to_text() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (SymbolId c : coords_) {
        Expr e = coeff(c);
        if (e.is_zero()) continue;
        std::string piece;
        if (e.is_one()) {
            piece = "d/d" + syms().name(c);
        } else if (e == num(-1)) {
            piece = "-d/d" + syms().name(c);
        } else {
            std::string coef = hce::to_text(e);
            if (e.kind() == ExprKind::Add) coef = "(" + coef + ")";
            piece = coef + "*d/d" + syms().name(c);
        }
        if (!first) {
            if (!piece.empty() && piece[0] == '-') {
                out += " - ";
                piece = piece.substr(1);
            } else {
                out += " + ";
            }
        }
        out += piece;
        first = false;
    }
    return out;
}

namespace {

bool depends_on_any(const Expr& e, const std::vector<SymbolId>& vars) {
    for (SymbolId v : vars)
        if (depends_on(e, v)) return true;
    return false;
}

std::vector<SymbolId> jet_symbols() {
    auto& S = syms();
    return {S.jet(1, 0), S.jet(0, 1), S.jet(2, 0), S.jet(1, 1), S.jet(0, 2)};
}

} // namespace

void check_point_field(const VectorField& y) {
    auto& S = syms();
    if (y.coords() != std::vector<SymbolId>{S.t, S.x, S.u})
        throw std::invalid_argument("point generator must live on (t,x,u)");
    std::vector<SymbolId> banned = jet_symbols();
    banned.push_back(S.E);
    banned.push_back(S.H);
    for (SymbolId c : y.coords())
        if (depends_on_any(y.coeff(c), banned))
            throw std::invalid_argument("point generator coefficients may depend on t,x,u only");
}

void check_equivalence_field(const VectorField& y) {
    auto& S = syms();
    if (y.coords() != std::vector<SymbolId>{S.t, S.x, S.u, S.E, S.H})
        throw std::invalid_argument("equivalence generator must live on (t,x,u,E,H)");
    for (SymbolId c : {S.t, S.x, S.u})
        if (depends_on(y.coeff(c), S.E) || depends_on(y.coeff(c), S.H))
            throw std::invalid_argument("xi, tau, phi may depend on t,x,u only");
    for (SymbolId c : y.coords())
        if (depends_on_any(y.coeff(c), jet_symbols()))
            throw std::invalid_argument("equivalence coefficients may not involve jet variables");
}

Expr ProlongedField::coeff(SymbolId c) const {
    auto it = jet_coeffs.find(c);
    if (it != jet_coeffs.end()) return it->second;
    return base.coeff(c);
}

Expr ProlongedField::apply(const Expr& e) const {
    std::vector<Expr> parts{base.apply(e)};
    for (const auto& [c, coef] : jet_coeffs) parts.push_back(coef * diff(e, c));
    return add(parts);
}

} // namespace hce
