#include "hce/detsys.hpp"

#include <functional>
#include <cassert>

namespace hce {

namespace {

Expr jet(int nt, int nx) {
    return sym(syms().jet(nt, nx));
}

std::vector<Expr> canonical_args(FuncId f) {
    std::vector<Expr> a;
    for (SymbolId s : syms().finfo(f).args) a.push_back(sym(s));
    return a;
}

Expr kernel(FuncId f) {
    return app(f, canonical_args(f));
}

} // namespace

Expr equation_rhs(FieldKind kind) {
    auto& S = syms();
    if (kind == FieldKind::Point) {
        Expr e = kernel(S.fE);
        Expr ex = app(S.derive(S.fE, 0), canonical_args(S.fE));
        Expr eu = app(S.derive(S.fE, 1), canonical_args(S.fE));
        return ex * jet(0, 1) + eu * jet(0, 1) * jet(0, 1) + e * jet(0, 2) + kernel(S.fH);
    }
    return sym(S.E_x) * jet(0, 1) + sym(S.E_u) * jet(0, 1) * jet(0, 1) + sym(S.E) * jet(0, 2) +
           sym(S.H);
}

std::pair<Expr, Expr> auxiliary_residuals(const VectorField& y) {
    auto& S = syms();
    ProlongedField p = prolong_equivalence(y);
    Bindings zero;
    zero[sym(S.E_t)] = num(0);
    zero[sym(S.H_t)] = num(0);
    return {substitute(p.jet_coeffs.at(S.E_t), zero), substitute(p.jet_coeffs.at(S.H_t), zero)};
}

Expr invariance_residual(const VectorField& y, FieldKind kind) {
    auto& S = syms();
    Expr rhs = equation_rhs(kind);
    Expr f = jet(1, 0) - rhs;
    if (kind == FieldKind::Point) {
        ProlongedField p = prolong2(y);
        Expr r = p.apply(f);
        Bindings b;
        b[jet(1, 0)] = rhs;
        return substitute(r, b);
    }
    ProlongedField p = prolong_equivalence(y);
    Expr r = p.apply(f);
    Bindings b;
    b[jet(1, 0)] = rhs;
    b[sym(S.E_t)] = num(0);
    b[sym(S.H_t)] = num(0);
    Expr main = substitute(r, b);
    auto [chi_t, eta_t] = auxiliary_residuals(y);
    // fresh marker symbols keep the three conditions separated in the split
    return main + sym(S.mark_E) * chi_t + sym(S.mark_H) * eta_t;
}

DeterminingSystem split_determining(const Expr& residual, FieldKind kind) {
    auto& S = syms();
    std::vector<Expr> basis = {jet(1, 0), jet(0, 1), jet(2, 0), jet(1, 1), jet(0, 2)};
    if (kind == FieldKind::Equivalence)
        for (SymbolId s : {S.E_t, S.E_x, S.E_u, S.H_t, S.H_x, S.H_u, S.mark_E, S.mark_H})
            basis.push_back(sym(s));

    DeterminingSystem sys;
    sys.kind = kind;
    sys.unknowns = {S.fXi, S.fTau, S.fPhiCoef};
    if (kind == FieldKind::Equivalence) {
        sys.unknowns.push_back(S.fChi);
        sys.unknowns.push_back(S.fEta);
    }
    for (const auto& [mono, coef] : collect(residual, basis)) {
        sys.monomial_log.emplace_back(mono, coef);
        sys.equations.push_back(coef);
    }
    return sys;
}

namespace {

// graded-lex monomial list of total degree <= degree over `vars`
std::vector<Expr> ansatz_monomials(const std::vector<SymbolId>& vars, int degree) {
    std::vector<Expr> out;
    std::vector<int> expo(vars.size(), 0);
    for (int total = 0; total <= degree; ++total) {
        // enumerate exponent vectors with sum == total, lexicographically
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i + 1 == expo.size()) {
                expo[i] = left;
                std::vector<Expr> fs;
                for (std::size_t k = 0; k < vars.size(); ++k)
                    if (expo[k] > 0) fs.push_back(pow(sym(vars[k]), expo[k]));
                out.push_back(mul(fs));
                return;
            }
            for (int e = left; e >= 0; --e) {
                expo[i] = e;
                rec(i + 1, left - e);
            }
        };
        rec(0, total);
    }
    return out;
}

void find_unknown_kernels(const Expr& e, const std::vector<FuncId>& unknowns,
                          std::map<Expr, FuncId, ExprLess>& found) {
    const ENode& n = e.node();
    if (n.kind == ExprKind::App) {
        const std::string& base = syms().finfo(n.fn).base_name;
        for (FuncId f : unknowns)
            if (syms().finfo(f).base_name == base) {
                found.emplace(e, n.fn);
                break;
            }
    }
    for (const Expr& k : n.kids) find_unknown_kernels(k, unknowns, found);
}

} // namespace

AnsatzSolution solve_polynomial_ansatz(const DeterminingSystem& sys, int degree) {
    if (degree < 0) throw std::invalid_argument("ansatz degree must be non-negative");
    if (sys.equations.empty()) throw EmptySystem("determining system has no equations");
    auto& S = syms();

    // fresh coefficient parameters (reused deterministically between runs)
    std::size_t counter = 0;
    auto fresh = [&]() { return S.parameter("a" + std::to_string(counter++)); };

    struct UnknownAnsatz {
        FuncId f;
        Expr value;
        std::vector<SymbolId> params;
        std::vector<Expr> monomials;
    };
    std::vector<UnknownAnsatz> ansatz;
    std::vector<SymbolId> all_params;
    for (FuncId f : sys.unknowns) {
        UnknownAnsatz ua;
        ua.f = f;
        ua.monomials = ansatz_monomials(S.finfo(f).args, degree);
        std::vector<Expr> parts;
        for (const Expr& m : ua.monomials) {
            SymbolId p = fresh();
            ua.params.push_back(p);
            all_params.push_back(p);
            parts.push_back(sym(p) * m);
        }
        ua.value = add(parts);
        ansatz.push_back(std::move(ua));
    }
    std::map<SymbolId, std::size_t> param_col;
    for (std::size_t i = 0; i < all_params.size(); ++i) param_col[all_params[i]] = i;

    // kernel substitution map: every App of an unknown (derived or not) maps
    // to the corresponding derivative of its ansatz polynomial
    Bindings subs;
    std::map<Expr, FuncId, ExprLess> kernels;
    for (const Expr& eq : sys.equations) find_unknown_kernels(eq, sys.unknowns, kernels);
    for (const auto& [kexpr, fid] : kernels) {
        const FuncInfo& fi = S.finfo(fid);
        const UnknownAnsatz* ua = nullptr;
        for (const auto& cand : ansatz)
            if (S.finfo(cand.f).base_name == fi.base_name) ua = &cand;
        assert(ua);
        Expr value = ua->value;
        for (std::size_t slot = 0; slot < fi.deriv.size(); ++slot)
            for (int k = 0; k < fi.deriv[slot]; ++k) value = diff(value, fi.args[slot]);
        subs[kexpr] = value;
    }

    // extract the homogeneous linear system over the parameters; each
    // equation contributes one row per (t,x,u,E,H)-monomial of its own
    RatMatrix mat;
    for (const Expr& eq : sys.equations) {
        std::map<Expr, std::vector<Rational>, ExprLess> rows;
        Expr inst = substitute(eq, subs);
        for (const auto& [mono, coeff] : terms_of(inst)) {
            // locate the single parameter factor
            MonomialView mv = monomial_view(mono);
            SymbolId param{};
            bool found = false;
            std::vector<Expr> rest;
            for (auto& [base, k] : mv.factors) {
                bool is_param = base.kind() == ExprKind::Sym && param_col.count(base.node().sym);
                if (is_param) {
                    if (found || k != 1)
                        throw std::logic_error("determining system is not linear in the ansatz");
                    param = base.node().sym;
                    found = true;
                    continue;
                }
                rest.push_back(pow(base, k));
            }
            if (!found) throw std::logic_error("inhomogeneous term in determining system");
            if (!mv.exp_argument.is_zero()) rest.push_back(exp_(mv.exp_argument));
            Expr key = mul(rest);
            auto [it, inserted] =
                rows.try_emplace(key, std::vector<Rational>(all_params.size(), Rational(0)));
            it->second[param_col[param]] += coeff;
        }
        for (auto& [key, row] : rows) mat.m.push_back(std::move(row));
    }

    AnsatzSolution out;
    out.degree = degree;
    out.unknown_count = all_params.size();
    out.system_rank = rank(mat);
    for (const auto& v : nullspace(mat)) {
        std::vector<Expr> coeffs;
        std::size_t off = 0;
        for (const auto& ua : ansatz) {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < ua.monomials.size(); ++i)
                parts.push_back(num(v[off + i]) * ua.monomials[i]);
            coeffs.push_back(add(parts));
            off += ua.monomials.size();
        }
        if (sys.kind == FieldKind::Point)
            out.basis.push_back(VectorField::point(coeffs[0], coeffs[1], coeffs[2]));
        else
            out.basis.push_back(
                VectorField::equivalence(coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]));
    }
    return out;
}

Bindings kernel_bindings(const Expr& e_form, const Expr& h_form) {
    auto& S = syms();
    Bindings b;
    auto bind = [&](FuncId base, const Expr& form, int max_order) {
        std::vector<SymbolId> args = S.finfo(base).args;
        // all derivative kernels with total order <= max_order
        std::function<void(FuncId, const Expr&, int)> rec = [&](FuncId f, const Expr& val,
                                                                int order) {
            b[app(f, canonical_args(base))] = val;
            if (order == max_order) return;
            for (std::size_t slot = 0; slot < args.size(); ++slot)
                rec(S.derive(f, slot), diff(val, args[slot]), order + 1);
        };
        rec(base, form, 0);
    };
    bind(S.fE, e_form, 2);
    bind(S.fH, h_form, 2);
    return b;
}

VectorField generic_unknown_field(FieldKind kind) {
    auto& S = syms();
    if (kind == FieldKind::Point)
        return VectorField::point(kernel(S.fXi), kernel(S.fTau), kernel(S.fPhiCoef));
    return VectorField::equivalence(kernel(S.fXi), kernel(S.fTau), kernel(S.fPhiCoef),
                                    kernel(S.fChi), kernel(S.fEta));
}

VerifyResult verify_generator(const VectorField& y, FieldKind kind, const Bindings& forms) {
    Expr r = invariance_residual(y, kind);
    if (!forms.empty()) r = substitute(r, forms);
    return {r.is_zero(), r};
}

AnsatzSolution solve_symmetries(FieldKind kind, int degree) {
    Expr residual = invariance_residual(generic_unknown_field(kind), kind);
    DeterminingSystem sys = split_determining(residual, kind);
    return solve_polynomial_ansatz(sys, degree);
}

} // namespace hce
