#include "hce/liealg.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace hce {

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
    if (a.coords() != b.coords())
        throw std::invalid_argument("bracket of fields on different coordinate spaces");
    VectorField out({a.coords(), {}});
    for (SymbolId c : a.coords()) {
        Expr e = a.apply(b.coeff(c)) - b.apply(a.coeff(c));
        out.set_coeff(c, e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ExpPolyMatrix
// ---------------------------------------------------------------------------

std::array<ExpPoly, 6> ExpPolyMatrix::column(int j) const {
    std::array<ExpPoly, 6> col;
    for (int r = 0; r < 6; ++r) col[r] = m[r][j];
    return col;
}

ExpPolyMatrix ExpPolyMatrix::operator*(const ExpPolyMatrix& o) const {
    ExpPolyMatrix out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            ExpPoly acc;
            for (int k = 0; k < 6; ++k) acc = acc + m[i][k] * o.m[k][j];
            out.m[i][j] = acc;
        }
    return out;
}

RatMatrix ExpPolyMatrix::eval(const ExpParam& s) const {
    RatMatrix out = RatMatrix::zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out.m[i][j] = m[i][j].eval(s);
    return out;
}

RatMatrix ExpPolyMatrix::at_zero() const {
    RatMatrix out = RatMatrix::zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out.m[i][j] = m[i][j].at_zero();
    return out;
}

ExpPolyMatrix ExpPolyMatrix::derivative() const {
    ExpPolyMatrix out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out.m[i][j] = m[i][j].derivative();
    return out;
}

// ---------------------------------------------------------------------------
// canonical algebra
// ---------------------------------------------------------------------------

EquivalenceAlgebra::EquivalenceAlgebra() {
    auto& S = syms();
    Expr t = sym(S.t), x = sym(S.x), u = sym(S.u), E = sym(S.E), H = sym(S.H);
    basis_[0] = VectorField::equivalence(num(1), num(0), num(0), num(0), num(0));
    basis_[1] = VectorField::equivalence(num(0), num(1), num(0), num(0), num(0));
    basis_[2] = VectorField::equivalence(num(0), num(0), num(1), num(0), num(0));
    basis_[3] = VectorField::equivalence(num(2) * t, x, num(0), num(0), num(-2) * H);
    basis_[4] = VectorField::equivalence(-t, num(0), num(0), E, H);
    basis_[5] = VectorField::equivalence(num(0), num(0), u, num(0), H);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            table_[i][j] = expand(lie_bracket(basis_[i], basis_[j]));
}

const EquivalenceAlgebra& EquivalenceAlgebra::canonical() {
    static EquivalenceAlgebra alg;
    return alg;
}

VectorField EquivalenceAlgebra::field_of(const Vec6& v) const {
    std::vector<std::pair<Rational, VectorField>> parts;
    for (int i = 0; i < 6; ++i) parts.emplace_back(v[i], basis_[i]);
    return VectorField::combine(parts);
}

Vec6 EquivalenceAlgebra::expand(const VectorField& vf) const {
    // linear feature map: (coordinate, monomial) -> value
    using Feature = std::pair<SymbolId, Expr>;
    auto feature_cmp = [](const Feature& a, const Feature& b) {
        if (a.first != b.first) return a.first < b.first;
        return Expr::compare(a.second, b.second) < 0;
    };
    std::map<Feature, std::size_t, decltype(feature_cmp)> cols(feature_cmp);
    auto features_of = [&](const VectorField& f,
                           std::map<Feature, Rational, decltype(feature_cmp)>& out) {
        for (SymbolId c : f.coords())
            for (const auto& [mono, coeff] : terms_of(f.coeff(c))) out[{c, mono}] = coeff;
    };
    std::vector<std::map<Feature, Rational, decltype(feature_cmp)>> rows;
    for (int i = 0; i < 6; ++i) {
        rows.emplace_back(feature_cmp);
        features_of(basis_[i], rows.back());
    }
    std::map<Feature, Rational, decltype(feature_cmp)> target(feature_cmp);
    features_of(vf, target);
    for (const auto& r : rows)
        for (const auto& [f, q] : r) cols.try_emplace(f, cols.size());
    for (const auto& [f, q] : target) cols.try_emplace(f, cols.size());

    // solve c^T B = y by forming [B^T | y] and reducing
    RatMatrix aug = RatMatrix::zero(cols.size(), 7);
    for (int i = 0; i < 6; ++i)
        for (const auto& [f, q] : rows[i]) aug.m[cols[f]][i] = q;
    for (const auto& [f, q] : target) aug.m[cols[f]][6] = q;

    std::vector<std::size_t> pivots;
    RatMatrix r = rref(aug, &pivots);
    Vec6 out{};
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        if (pivots[k] == 6) throw NotClosed("field outside the rational span of the basis");
        out[pivots[k]] = r.m[k][6];
    }
    // consistency: reconstruct and compare
    if (!(field_of(out) == vf)) throw NotClosed("field outside the rational span of the basis");
    return out;
}

Vec6 EquivalenceAlgebra::bracket_vec(const Vec6& a, const Vec6& b) const {
    Vec6 out{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (a[i] == 0 || b[j] == 0) continue;
            Rational f = a[i] * b[j];
            for (int k = 0; k < 6; ++k) out[k] += f * table_[i][j][k];
        }
    return out;
}

RatMatrix EquivalenceAlgebra::ad(const Vec6& v) const {
    RatMatrix m = RatMatrix::zero(6, 6);
    for (int j = 0; j < 6; ++j) {
        Vec6 ej{};
        ej[j] = 1;
        Vec6 col = bracket_vec(v, ej);
        for (int i = 0; i < 6; ++i) m.m[i][j] = col[i];
    }
    return m;
}

Rational EquivalenceAlgebra::killing_trace(const Vec6& a, const Vec6& b) const {
    return trace(matmul(ad(a), ad(b)));
}

Rational EquivalenceAlgebra::killing_closed(const Vec6& a, const Vec6& b) {
    return 5 * a[3] * b[3] - 2 * (a[3] * b[4] + a[4] * b[3]) + a[4] * b[4] + a[5] * b[5];
}

RatMatrix EquivalenceAlgebra::killing_matrix() const {
    RatMatrix k = RatMatrix::zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Vec6 ei{}, ej{};
            ei[i] = 1;
            ej[j] = 1;
            k.m[i][j] = killing_trace(ei, ej);
        }
    return k;
}

std::vector<RatMatrix> EquivalenceAlgebra::derived_series_of(
    const std::array<std::array<Vec6, 6>, 6>& table) {
    auto bracket = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        std::vector<Rational> out(6, Rational(0));
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                if (a[i] == 0 || b[j] == 0) continue;
                Rational f = a[i] * b[j];
                for (int k = 0; k < 6; ++k) out[k] += f * table[i][j][k];
            }
        return out;
    };
    RatMatrix current = RatMatrix::zero(6, 6);
    for (int i = 0; i < 6; ++i) current.m[i][i] = 1;
    std::vector<RatMatrix> series;
    for (;;) {
        RatMatrix next;
        for (std::size_t i = 0; i < current.rows(); ++i)
            for (std::size_t j = i + 1; j < current.rows(); ++j)
                next.m.push_back(bracket(current.m[i], current.m[j]));
        next = rref(next);
        series.push_back(next);
        if (next.rows() == 0 || next.m == current.m) break;
        current = next;
    }
    return series;
}

std::vector<RatMatrix> EquivalenceAlgebra::derived_series() const {
    return derived_series_of(table_);
}

// ---------------------------------------------------------------------------
// exact matrix exponential through the Jordan-Chevalley split
// ---------------------------------------------------------------------------

namespace {

// dense univariate polynomials over Q, coeffs[k] multiplies x^k
using QPoly = std::vector<Rational>;

Rational qpoly_eval(const QPoly& p, const Rational& x) {
    Rational r(0);
    for (std::size_t k = p.size(); k-- > 0;) r = r * x + p[k];
    return r;
}

// divides by (x - root); remainder must be zero
QPoly qpoly_deflate(const QPoly& p, const Rational& root) {
    QPoly q(p.size() - 1, Rational(0));
    Rational carry(0);
    for (std::size_t k = p.size(); k-- > 1;) {
        carry = p[k] + carry * root;
        q[k - 1] = carry;
    }
    assert(p[0] + carry * root == 0);
    return q;
}

QPoly charpoly(const RatMatrix& a) {
    // Faddeev-LeVerrier: M_1 = A, c_1 = -tr M_1,
    // M_k = A(M_{k-1} + c_{k-1} I), c_k = -tr(M_k)/k
    const std::size_t n = a.rows();
    QPoly c(n + 1, Rational(0));
    c[n] = 1;
    RatMatrix m = a;
    c[n - 1] = -trace(m);
    for (std::size_t k = 2; k <= n; ++k) {
        RatMatrix mk = m;
        for (std::size_t i = 0; i < n; ++i) mk.m[i][i] += c[n - k + 1];
        m = matmul(a, mk);
        c[n - k] = -trace(m) / Rational(static_cast<long>(k));
    }
    return c;
}

std::vector<Integer> divisors(const Integer& n0) {
    Integer n = abs(n0);
    std::vector<Integer> ds;
    if (n == 0) return ds;
    if (mpz_cmp_ui(n.get_mpz_t(), 1000000000UL) > 0)
        throw NonRationalSpectrum("constant term too large for rational root search");
    unsigned long nn = mpz_get_ui(n.get_mpz_t());
    for (unsigned long d = 1; d * d <= nn; ++d)
        if (nn % d == 0) {
            ds.emplace_back(d);
            ds.emplace_back(nn / d);
        }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

// all rational roots with multiplicities; throws if the polynomial does not
// split over Q
std::map<Rational, int> rational_roots_full(QPoly p) {
    std::map<Rational, int> roots;
    // strip trailing zero coefficients = roots at 0
    while (p.size() > 1 && p[0] == 0) {
        roots[Rational(0)]++;
        p.erase(p.begin());
    }
    while (p.size() > 1) {
        // clear denominators
        Integer l(1);
        for (const auto& q : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
        QPoly ip = p;
        for (auto& q : ip) q *= Rational(l);
        Integer a0 = ip.front().get_num();
        Integer an = ip.back().get_num();
        bool found = false;
        for (const Integer& pnum : divisors(a0)) {
            for (const Integer& qden : divisors(an)) {
                for (int sign : {1, -1}) {
                    Rational cand(sign * pnum, qden);
                    cand.canonicalize();
                    if (qpoly_eval(p, cand) == 0) {
                        roots[cand]++;
                        p = qpoly_deflate(p, cand);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) throw NonRationalSpectrum("characteristic polynomial has irrational roots");
        while (p.size() > 1 && p[0] == 0) {
            roots[Rational(0)]++;
            p.erase(p.begin());
        }
    }
    return roots;
}

// coefficients of p(c + y) in y, by repeated synthetic division by (x - c)
QPoly taylor_shift(QPoly work, const Rational& c) {
    QPoly out;
    out.reserve(work.size());
    while (!work.empty()) {
        if (work.size() == 1) {
            out.push_back(work[0]);
            break;
        }
        QPoly q(work.size() - 1, Rational(0));
        Rational b = work.back();
        q[work.size() - 2] = b;
        for (std::size_t k = work.size() - 1; k-- > 1;) {
            b = work[k] + c * b;
            q[k - 1] = b;
        }
        out.push_back(work[0] + c * b);
        work = std::move(q);
    }
    return out;
}

// multiplicative inverse of g as a power series mod y^order (g[0] != 0)
QPoly series_inverse(const QPoly& g, int order) {
    QPoly inv(order, Rational(0));
    inv[0] = 1 / g[0];
    for (int k = 1; k < order; ++k) {
        Rational acc(0);
        for (int j = 1; j <= k; ++j) {
            Rational gj = j < static_cast<int>(g.size()) ? g[j] : Rational(0);
            acc += gj * inv[k - j];
        }
        inv[k] = -acc / g[0];
    }
    return inv;
}

QPoly qpoly_divide(const QPoly& num, const QPoly& den) {
    // exact division, used for charpoly / (x-lambda)^m
    QPoly rem = num;
    QPoly quot(num.size() - den.size() + 1, Rational(0));
    for (std::size_t k = quot.size(); k-- > 0;) {
        Rational f = rem[k + den.size() - 1] / den.back();
        quot[k] = f;
        for (std::size_t i = 0; i < den.size(); ++i) rem[k + i] -= f * den[i];
    }
    return quot;
}

RatMatrix identity6() {
    RatMatrix id = RatMatrix::zero(6, 6);
    for (int i = 0; i < 6; ++i) id.m[i][i] = 1;
    return id;
}

RatMatrix mat_poly(const QPoly& p, const RatMatrix& a) {
    RatMatrix out = RatMatrix::zero(a.rows(), a.cols());
    RatMatrix pw = identity6();
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] != 0)
            for (std::size_t i = 0; i < out.rows(); ++i)
                for (std::size_t j = 0; j < out.cols(); ++j) out.m[i][j] += p[k] * pw.m[i][j];
        if (k + 1 < p.size()) pw = matmul(pw, a);
    }
    return out;
}

} // namespace

ExpPolyMatrix exp_neg_s(const RatMatrix& a) {
    assert(a.rows() == 6 && a.cols() == 6);
    QPoly cp = charpoly(a);
    std::map<Rational, int> roots = rational_roots_full(cp);

    // spectral projectors via partial fractions of 1/charpoly
    std::map<Rational, RatMatrix> projectors;
    for (const auto& [lambda, mult] : roots) {
        QPoly lin = {-lambda, Rational(1)};
        QPoly gi = cp;
        for (int k = 0; k < mult; ++k) gi = qpoly_divide(gi, lin);
        QPoly gi_shift = taylor_shift(gi, lambda);
        QPoly hi = series_inverse(gi_shift, mult);
        // P_i = h_i(A - lambda I) * g_i(A)
        RatMatrix shifted = a;
        for (int i = 0; i < 6; ++i) shifted.m[i][i] -= lambda;
        RatMatrix pi = matmul(mat_poly(hi, shifted), mat_poly(gi, a));
        projectors.emplace(lambda, std::move(pi));
    }
    // semisimple part S = sum lambda P_i, nilpotent N = A - S
    RatMatrix s = RatMatrix::zero(6, 6);
    RatMatrix psum = RatMatrix::zero(6, 6);
    for (const auto& [lambda, pi] : projectors)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                s.m[i][j] += lambda * pi.m[i][j];
                psum.m[i][j] += pi.m[i][j];
            }
    assert(psum == identity6());
    RatMatrix n = a;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) n.m[i][j] -= s.m[i][j];

    // exp(-sA) = sum_i e^{-lambda_i s} [ sum_{m<mult} (-s)^m N^m / m! ] P_i
    ExpPolyMatrix out;
    for (const auto& [lambda, mult] : roots) {
        RatMatrix npow = identity6();
        Rational fact(1);
        for (int m = 0; m < mult; ++m) {
            if (m > 0) {
                npow = matmul(npow, n);
                fact *= m;
            }
            RatMatrix q = matmul(npow, projectors.at(lambda));
            Rational coeff = (m % 2 == 0 ? Rational(1) : Rational(-1)) / fact;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    if (q.m[i][j] != 0)
                        out.m[i][j] =
                            out.m[i][j] + ExpPoly::term(coeff * q.m[i][j], m, -lambda);
        }
    }
    return out;
}

const ExpPolyMatrix& EquivalenceAlgebra::adjoint_matrix(int i) const {
    auto& slot = adjoint_cache_[i - 1];
    if (!slot) {
        Vec6 ei{};
        ei[i - 1] = 1;
        slot = exp_neg_s(ad(ei));
    }
    return *slot;
}

std::array<ExpPoly, 6> EquivalenceAlgebra::adjoint_action(int i, int j) const {
    return adjoint_matrix(i).column(j - 1);
}

// ---------------------------------------------------------------------------
// flows, reflections, solution rules
// ---------------------------------------------------------------------------

Expr Flow::map_of(SymbolId coord) const {
    for (const auto& c : components)
        if (c.coord == coord) return c.map;
    return sym(coord);
}

Expr Flow::map_at(SymbolId coord, const Expr& s_value) const {
    Bindings b;
    b[sym(syms().s_param)] = s_value;
    return substitute(map_of(coord), b);
}

Flow flow(const EquivalenceAlgebra& alg, int i) {
    return flow_of_field(alg.Y(i), i, "G" + std::to_string(i));
}

Flow flow_of_field(const VectorField& y, int generator_index, const std::string& name) {
    auto& S = syms();
    Flow f;
    f.generator = generator_index;
    f.name = name;
    Expr s = sym(S.s_param);
    for (SymbolId c : y.coords()) {
        FlowComponent fc;
        fc.coord = c;
        Expr coef = y.coeff(c);
        if (coef.is_zero()) {
            fc.shape = CoordShape::Fixed;
            fc.map = sym(c);
        } else if (auto q = coef.as_rational()) {
            fc.shape = CoordShape::Translation;
            fc.amount = *q;
            fc.map = sym(c) + num(*q) * s;
        } else {
            // rational multiple of the coordinate itself?
            MonomialView mv = monomial_view(coef);
            if (mv.factors.size() == 1 && mv.factors[0].second == 1 &&
                mv.factors[0].first == sym(c) && mv.exp_argument.is_zero()) {
                fc.shape = CoordShape::Scaling;
                fc.amount = mv.coeff;
                fc.map = sym(c) * exp_(num(mv.coeff) * s);
            } else {
                throw UnsupportedCoefficientShape(
                    "flow coefficients must be constant or linear-diagonal");
            }
        }
        f.components.push_back(fc);
    }
    return f;
}

std::vector<Flow> reflections() {
    auto& S = syms();
    auto mk = [&](const std::string& name, std::map<SymbolId, int> flips) {
        Flow f;
        f.generator = 0;
        f.name = name;
        for (SymbolId c : {S.t, S.x, S.u, S.E, S.H}) {
            FlowComponent fc;
            fc.coord = c;
            fc.shape = CoordShape::Fixed;
            int sign = flips.count(c) ? flips[c] : 1;
            fc.map = sign == 1 ? sym(c) : -sym(c);
            f.components.push_back(fc);
        }
        return f;
    };
    return {
        mk("reflect_t", {{S.t, -1}, {S.E, -1}, {S.H, -1}}),
        mk("reflect_u", {{S.u, -1}, {S.H, -1}}),
        mk("reflect_x", {{S.x, -1}}),
        mk("reflect_tu", {{S.t, -1}, {S.u, -1}, {S.E, -1}}),
    };
}

Vec6 reflect_vec(const Flow& r, const Vec6& v) {
    const auto& alg = EquivalenceAlgebra::canonical();
    VectorField y = alg.field_of(v);
    // conjugation by the involution: Y'^c(p) = sigma_c * Y^c(R p)
    Bindings subs;
    std::map<SymbolId, Rational> sign;
    for (const auto& c : r.components) {
        Expr img = c.map;
        subs[sym(c.coord)] = img;
        sign[c.coord] = img == sym(c.coord) ? Rational(1) : Rational(-1);
    }
    VectorField out({y.coords(), {}});
    for (SymbolId c : y.coords())
        out.set_coeff(c, num(sign[c]) * substitute(y.coeff(c), subs));
    return alg.expand(out);
}

SolutionRule transform_solution(const EquivalenceAlgebra& alg, int i) {
    auto& S = syms();
    Flow g = flow(alg, i);
    Expr s = sym(S.s_param);
    Expr t = sym(S.t), x = sym(S.x), u = sym(S.u);

    // pullback by the flow at parameter -s; the f-arguments then carry the
    // forward (+s) coordinate maps, matching the printed rules
    Expr targ = g.map_of(S.t);
    Expr xarg = g.map_of(S.x);
    Expr fker = app(S.fSol, {targ, xarg});

    auto inverse_on = [&](SymbolId c, const Expr& w) -> Expr {
        // U_{-s} applied to w for the u-coordinate map
        for (const auto& fc : g.components) {
            if (fc.coord != c) continue;
            switch (fc.shape) {
                case CoordShape::Fixed:
                    return w;
                case CoordShape::Translation:
                    return w - num(fc.amount) * s;
                case CoordShape::Scaling:
                    return w * exp_(num(-fc.amount) * s);
            }
        }
        return w;
    };
    SolutionRule rule;
    rule.generator = i;
    rule.u_rule = inverse_on(S.u, fker);

    // Ebar(x,u) = e^{-lambda_E s} E(X_s(x), U_s(u)), same shape for H
    auto bar = [&](FuncId kernel, SymbolId coord) {
        Rational rate(0);
        for (const auto& fc : g.components)
            if (fc.coord == coord && fc.shape == CoordShape::Scaling) rate = fc.amount;
        Expr arg_x = g.map_of(S.x);
        Expr arg_u = g.map_of(S.u);
        return exp_(num(-rate) * s) * app(kernel, {arg_x, arg_u});
    };
    rule.e_bar = bar(S.fE, S.E);
    rule.h_bar = bar(S.fH, S.H);

    // verification: substitute into the barred equation and eliminate f_t via
    // the original equation at the transformed arguments
    Bindings at_u;
    at_u[u] = rule.u_rule;
    Expr ebar_val = substitute(rule.e_bar, at_u);
    Expr hbar_val = substitute(rule.h_bar, at_u);
    Expr residual = diff(rule.u_rule, S.t) - diff(ebar_val * diff(rule.u_rule, S.x), S.x) -
                    hbar_val;

    Expr fx = app(S.derive(S.fSol, 1), {targ, xarg});
    Expr fxx = app(S.derive(S.derive(S.fSol, 1), 1), {targ, xarg});
    Expr eker = app(S.fE, {xarg, fker});
    Expr exker = app(S.derive(S.fE, 0), {xarg, fker});
    Expr euker = app(S.derive(S.fE, 1), {xarg, fker});
    Expr hker = app(S.fH, {xarg, fker});
    Bindings elim;
    elim[app(S.derive(S.fSol, 0), {targ, xarg})] =
        exker * fx + euker * fx * fx + eker * fxx + hker;
    residual = substitute(residual, elim);
    rule.verified = residual.is_zero();
    return rule;
}

} // namespace hce
