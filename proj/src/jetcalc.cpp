#include "hce/jetcalc.hpp"

#include <functional>

namespace hce {

namespace {

// Generic derivation: linear, Leibniz on products, chain rule through
// function kernels, exp, log and powers; the action on plain symbols is the
// parameter.
Expr derive(const Expr& e, const std::function<Expr(SymbolId)>& symrule) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat:
            return Expr{};
        case ExprKind::Sym:
            return symrule(n.sym);
        case ExprKind::Add: {
            std::vector<Expr> parts;
            for (const Expr& k : n.kids) parts.push_back(derive(k, symrule));
            return add(parts);
        }
        case ExprKind::Mul: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expr d = derive(n.kids[i], symrule);
                if (d.is_zero()) continue;
                std::vector<Expr> fs = n.kids;
                fs[i] = d;
                parts.push_back(mul(fs));
            }
            return add(parts);
        }
        case ExprKind::Pow: {
            Expr d = derive(n.kids[0], symrule);
            if (d.is_zero()) return Expr{};
            return mul({num(n.expo), pow(n.kids[0], n.expo - 1), d});
        }
        case ExprKind::App: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expr d = derive(n.kids[i], symrule);
                if (d.is_zero()) continue;
                parts.push_back(mul({app(syms().derive(n.fn, i), n.kids), d}));
            }
            return add(parts);
        }
        case ExprKind::Exp: {
            Expr d = derive(n.kids[0], symrule);
            if (d.is_zero()) return Expr{};
            return mul({e, d});
        }
        case ExprKind::Log: {
            Expr d = derive(n.kids[0], symrule);
            if (d.is_zero()) return Expr{};
            return mul({d, pow(n.kids[0], -1)});
        }
    }
    throw std::logic_error("unreachable expr kind");
}

} // namespace

Expr total_derivative(const Expr& e, SymbolId v, int max_order) {
    auto& S = syms();
    if (!(v == S.t || v == S.x))
        throw std::invalid_argument("total derivative direction must be t or x");
    const int dt = v == S.t ? 1 : 0;
    const int dx = v == S.x ? 1 : 0;
    auto rule = [&](SymbolId s) -> Expr {
        const SymbolInfo& si = S.info(s);
        if (s == v) return num(1);
        switch (si.kind) {
            case SymbolKind::IndependentVar:
                return Expr{};
            case SymbolKind::DependentVar:
                if (s == S.u) return sym(S.jet(dt, dx));
                if (s == S.E) return sym(dt ? S.E_t : S.E_x) + sym(S.E_u) * sym(S.jet(dt, dx));
                if (s == S.H) return sym(dt ? S.H_t : S.H_x) + sym(S.H_u) * sym(S.jet(dt, dx));
                return Expr{};
            case SymbolKind::JetVar: {
                int nt = si.jet_t + dt, nx = si.jet_x + dx;
                if (nt + nx > max_order)
                    throw JetOrderOverflow("total derivative would exceed jet order " +
                                           std::to_string(max_order));
                return sym(S.jet(nt, nx));
            }
            case SymbolKind::FormalDerivative:
                throw JetOrderOverflow("second-order E/H jets are outside the working space");
            default:
                return Expr{};
        }
    };
    return derive(e, rule);
}

Expr extended_total_derivative(const Expr& e, SymbolId I) {
    auto& S = syms();
    if (!(I == S.t || I == S.x || I == S.u))
        throw std::invalid_argument("extended total derivative direction must be t, x or u");
    auto rule = [&](SymbolId s) -> Expr {
        if (s == I) return num(1);
        const SymbolInfo& si = S.info(s);
        if (s == S.E) return sym(I == S.t ? S.E_t : (I == S.x ? S.E_x : S.E_u));
        if (s == S.H) return sym(I == S.t ? S.H_t : (I == S.x ? S.H_x : S.H_u));
        if (si.kind == SymbolKind::JetVar)
            throw std::invalid_argument("u-jet variable in an extended-space expression");
        if (si.kind == SymbolKind::FormalDerivative)
            throw JetOrderOverflow("second-order E/H jets are outside the working space");
        return Expr{};
    };
    return derive(e, rule);
}

Expr characteristic(const VectorField& y) {
    check_point_field(y);
    auto& S = syms();
    return y.coeff(S.u) - y.coeff(S.t) * sym(S.jet(1, 0)) - y.coeff(S.x) * sym(S.jet(0, 1));
}

ProlongedField prolong2(const VectorField& y) {
    check_point_field(y);
    auto& S = syms();
    const Expr xi = y.coeff(S.t), tau = y.coeff(S.x);
    const Expr u_t = sym(S.jet(1, 0)), u_x = sym(S.jet(0, 1));
    const Expr u_tt = sym(S.jet(2, 0)), u_tx = sym(S.jet(1, 1)), u_xx = sym(S.jet(0, 2));

    const Expr q = characteristic(y);
    Expr phi_t = total_derivative(q, S.t) + xi * u_tt + tau * u_tx;
    Expr phi_x = total_derivative(q, S.x) + xi * u_tx + tau * u_xx;

    auto iterate = [&](const Expr& prev, SymbolId v, const Expr& ujt, const Expr& ujx) {
        return total_derivative(prev, v) - ujt * total_derivative(xi, v) -
               ujx * total_derivative(tau, v);
    };
    Expr phi_tt = iterate(phi_t, S.t, u_tt, u_tx);
    Expr phi_tx = iterate(phi_t, S.x, u_tt, u_tx);
    Expr phi_xx = iterate(phi_x, S.x, u_tx, u_xx);

    ProlongedField p;
    p.base = y;
    p.jet_coeffs = {{S.jet(1, 0), phi_t},
                    {S.jet(0, 1), phi_x},
                    {S.jet(2, 0), phi_tt},
                    {S.jet(1, 1), phi_tx},
                    {S.jet(0, 2), phi_xx}};
    return p;
}

ProlongedField prolong_equivalence(const VectorField& y) {
    check_equivalence_field(y);
    auto& S = syms();
    VectorField point_part = VectorField::point(y.coeff(S.t), y.coeff(S.x), y.coeff(S.u));
    ProlongedField p = prolong2(point_part);
    p.base = y;

    const Expr xi = y.coeff(S.t), tau = y.coeff(S.x), phi = y.coeff(S.u);
    const Expr chi = y.coeff(S.E), eta = y.coeff(S.H);

    auto chi_I = [&](SymbolId I) {
        return extended_total_derivative(chi, I) -
               sym(S.E_t) * extended_total_derivative(xi, I) -
               sym(S.E_x) * extended_total_derivative(tau, I) -
               sym(S.E_u) * extended_total_derivative(phi, I);
    };
    Expr eta_t = extended_total_derivative(eta, S.t) -
                 sym(S.H_t) * extended_total_derivative(xi, S.t) -
                 sym(S.H_x) * extended_total_derivative(tau, S.t) -
                 sym(S.H_u) * extended_total_derivative(phi, S.t);

    p.jet_coeffs[S.E_t] = chi_I(S.t);
    p.jet_coeffs[S.E_x] = chi_I(S.x);
    p.jet_coeffs[S.E_u] = chi_I(S.u);
    p.jet_coeffs[S.H_t] = eta_t;
    return p;
}

} // namespace hce
