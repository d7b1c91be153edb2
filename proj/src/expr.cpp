#include "hce/expr.hpp"

#include <algorithm>
#include <optional>
#include <cassert>

namespace hce {

namespace {

std::shared_ptr<const ENode> make_node(ENode&& n) {
    return std::make_shared<const ENode>(std::move(n));
}

const Expr& zero_expr() {
    static Expr z{make_node(ENode{ExprKind::Rat, Rational(0)})};
    return z;
}
const Expr& one_expr() {
    static Expr o{make_node(ENode{ExprKind::Rat, Rational(1)})};
    return o;
}

int kind_rank(ExprKind k) {
    switch (k) {
        case ExprKind::Rat: return 0;
        case ExprKind::Sym: return 1;
        case ExprKind::Pow: return 2;
        case ExprKind::Exp: return 3;
        case ExprKind::Log: return 4;
        case ExprKind::App: return 5;
        case ExprKind::Mul: return 6;
        case ExprKind::Add: return 7;
    }
    return 8;
}

} // namespace

Expr::Expr() : node_(zero_expr().ptr()) {}

std::optional<Rational> Expr::as_rational() const {
    if (kind() == ExprKind::Rat) return node_->rat;
    return std::nullopt;
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    const ENode& na = a.node();
    const ENode& nb = b.node();
    if (int d = kind_rank(na.kind) - kind_rank(nb.kind); d != 0) return d < 0 ? -1 : 1;
    switch (na.kind) {
        case ExprKind::Rat:
            return cmp(na.rat, nb.rat);
        case ExprKind::Sym:
            return na.sym.v < nb.sym.v ? -1 : (na.sym.v > nb.sym.v ? 1 : 0);
        case ExprKind::Pow: {
            if (int d = compare(na.kids[0], nb.kids[0]); d != 0) return d;
            return na.expo < nb.expo ? -1 : (na.expo > nb.expo ? 1 : 0);
        }
        case ExprKind::Exp:
        case ExprKind::Log:
            return compare(na.kids[0], nb.kids[0]);
        case ExprKind::App: {
            if (na.fn.v != nb.fn.v) return na.fn.v < nb.fn.v ? -1 : 1;
            break;
        }
        default:
            break;
    }
    // child-list comparison for App/Mul/Add
    std::size_t n = std::min(na.kids.size(), nb.kids.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int d = compare(na.kids[i], nb.kids[i]); d != 0) return d;
    if (na.kids.size() != nb.kids.size()) return na.kids.size() < nb.kids.size() ? -1 : 1;
    return 0;
}

// ---------------------------------------------------------------------------
// normalization engine: polynomial normal form over opaque atoms
// ---------------------------------------------------------------------------

namespace {

struct Mono {
    std::map<Expr, long, ExprLess> bases;  // atom (or inverted-sum) -> exponent != 0
    Expr exparg;                           // argument of the single exp factor; 0 if none
};

int mono_cmp(const Mono& a, const Mono& b) {
    auto ia = a.bases.begin(), ib = b.bases.begin();
    for (; ia != a.bases.end() && ib != b.bases.end(); ++ia, ++ib) {
        if (int d = Expr::compare(ia->first, ib->first); d != 0) return d;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.bases.end()) return 1;
    if (ib != b.bases.end()) return -1;
    return Expr::compare(a.exparg, b.exparg);
}

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return mono_cmp(a, b) < 0; }
};

using Poly = std::map<Mono, Rational, MonoLess>;

Poly to_poly(const Expr& e);
Expr from_poly(const Poly& p);

void poly_add_inplace(Poly& acc, const Poly& p, const Rational& scale = Rational(1)) {
    for (const auto& [m, c] : p) {
        Rational& slot = acc[m];
        slot += c * scale;
        if (slot == 0) acc.erase(m);
    }
}

// Builds the poly for coeff * mono, expanding any sum-base carrying a
// positive exponent (those may appear transiently from exponent arithmetic)
// and folding exp(log b) factors into plain powers of b.
Poly finalize_mono(Rational coeff, Mono m);

// plain distribution, no divisibility folding (used inside the divider)
Poly poly_mul_raw(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Mono m = ma;
            for (const auto& [base, k] : mb.bases) {
                long& slot = m.bases[base];
                slot += k;
                if (slot == 0) m.bases.erase(base);
            }
            if (!mb.exparg.is_zero()) m.exparg = add({m.exparg, mb.exparg});
            Poly piece = finalize_mono(ca * cb, std::move(m));
            poly_add_inplace(out, piece);
        }
    return out;
}

bool plain_poly(const Poly& p) {
    for (const auto& [m, c] : p) {
        if (!m.exparg.is_zero()) return false;
        for (const auto& [base, k] : m.bases)
            if (k < 0) return false;
    }
    return true;
}

// Exact division p / s. The divisor must be plain with a single-monomial
// leading coefficient in its maximal atom (true for every inverse base this
// project produces); the dividend may carry exp factors and inverse atoms,
// which ride along opaquely. Returns nullopt when the division is not exact.
std::optional<Poly> poly_divide_exact(const Poly& p, const Poly& s) {
    if (s.empty()) throw std::domain_error("division by zero polynomial");
    if (!plain_poly(s)) return std::nullopt;
    if (p.empty()) return p;
    if (s.size() == 1) {
        const auto& [sm, sc] = *s.begin();
        Poly out;
        for (const auto& [m, c] : p) {
            Mono q = m;
            for (const auto& [base, k] : sm.bases) {
                long& slot = q.bases[base];
                slot -= k;
                if (slot == 0) q.bases.erase(base);
            }
            out.emplace(std::move(q), c / sc);
        }
        return out;
    }
    // main variable: the maximal atom occurring in s
    Expr v;
    bool have_v = false;
    for (const auto& [m, c] : s)
        for (const auto& [base, k] : m.bases)
            if (!have_v || Expr::compare(base, v) > 0) {
                v = base;
                have_v = true;
            }
    if (!have_v) return std::nullopt;
    auto v_deg = [&](const Mono& m) {
        auto it = m.bases.find(v);
        return it == m.bases.end() ? 0L : it->second;
    };
    long d = 0;
    for (const auto& [m, c] : s) d = std::max(d, v_deg(m));
    // leading coefficient of s in v must be one monomial
    Mono lead_mono;
    Rational lead_coef;
    int lead_count = 0;
    for (const auto& [m, c] : s)
        if (v_deg(m) == d) {
            lead_mono = m;
            lead_coef = c;
            ++lead_count;
        }
    if (lead_count != 1 || d == 0) return std::nullopt;

    Poly n = p, quot;
    int guard = 0;
    for (;;) {
        if (n.empty()) return quot;
        if (++guard > 4096) return std::nullopt;
        long k = 0;
        bool any = false;
        for (const auto& [m, c] : n) {
            long dv = v_deg(m);
            if (!any || dv > k) k = dv;
            any = true;
        }
        if (k < d) return std::nullopt;
        // peel the v^k stratum
        Poly piece;
        for (const auto& [m, c] : n) {
            if (v_deg(m) != k) continue;
            Mono q = m;
            // divide by lead_mono * v^(d - lead's own v power folds in)
            bool ok = true;
            for (const auto& [base, e] : lead_mono.bases) {
                long& slot = q.bases[base];
                slot -= e;
                if (slot == 0) q.bases.erase(base);
            }
            if (!lead_mono.exparg.is_zero()) {
                if (q.exparg.is_zero()) {
                    ok = false;
                } else {
                    q.exparg = add({q.exparg, mul({num(-1), lead_mono.exparg})});
                }
            }
            if (!ok) return std::nullopt;
            piece.emplace(std::move(q), c / lead_coef);
        }
        poly_add_inplace(quot, piece);
        Poly prod = poly_mul_raw(piece, s);
        poly_add_inplace(n, prod, Rational(-1));
    }
}

Poly poly_pow(const Poly& p, long k);

// Canonicalizes inverse sum bases: all monomials are put over the uniform
// maximal denominator per base, the resulting plain numerator is reduced by
// exact division, and the remaining inverse powers are re-attached uniformly.
// Makes forms like x(1+x)^-3 + (1+x)^-3 and (1+x)^-2 structurally equal.
Poly canonicalize_fractions(Poly p) {
    std::map<Expr, long, ExprLess> denom;  // base -> max inverse power (positive)
    for (const auto& [m, c] : p)
        for (const auto& [base, k] : m.bases)
            if (base.kind() == ExprKind::Add && k < 0) {
                long need = -k;
                long& slot = denom[base];
                slot = std::max(slot, need);
            }
    if (denom.empty()) return p;
    Poly numer;
    for (const auto& [m, c] : p) {
        Mono stripped;
        stripped.exparg = m.exparg;
        std::map<Expr, long, ExprLess> present;
        for (const auto& [base, k] : m.bases) {
            if (base.kind() == ExprKind::Add && k < 0)
                present[base] = -k;
            else
                stripped.bases.emplace(base, k);
        }
        Poly piece;
        piece.emplace(std::move(stripped), c);
        for (const auto& [base, need] : denom) {
            long have = present.count(base) ? present[base] : 0;
            if (need > have) piece = poly_mul_raw(piece, poly_pow(to_poly(base), need - have));
        }
        poly_add_inplace(numer, piece);
    }
    for (auto& [base, k] : denom) {
        Poly bp = to_poly(base);
        while (k > 0) {
            auto q = poly_divide_exact(numer, bp);
            if (!q) break;
            numer = std::move(*q);
            --k;
        }
    }
    Poly out;
    for (const auto& [m, c] : numer) {
        Mono mm = m;
        for (const auto& [base, k] : denom)
            if (k > 0) mm.bases[base] -= k;
        out.emplace(std::move(mm), c);
    }
    return out;
}

// Multiplication that folds a multi-term factor against inverse sum bases on
// the monomial side when the division is exact ((x+1)^2 * (x+1)^-2 -> 1).
Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.size() == 1 || b.size() == 1) {
        const Poly& mono_side = a.size() == 1 ? a : b;
        Poly poly_side = a.size() == 1 ? b : a;
        Mono m = mono_side.begin()->first;
        Rational c = mono_side.begin()->second;
        bool has_inverse = false;
        for (const auto& [base, k] : m.bases)
            has_inverse = has_inverse || (base.kind() == ExprKind::Add && k < 0);
        if (has_inverse && poly_side.size() > 1) {
            for (auto it = m.bases.begin(); it != m.bases.end();) {
                auto& [base, k] = *it;
                bool erased = false;
                if (base.kind() == ExprKind::Add && k < 0) {
                    Poly bp = to_poly(base);
                    while (k < 0) {
                        auto q = poly_divide_exact(poly_side, bp);
                        if (!q) break;
                        poly_side = std::move(*q);
                        if (++k == 0) {
                            it = m.bases.erase(it);
                            erased = true;
                            break;
                        }
                    }
                }
                if (!erased) ++it;
            }
        }
        Poly ms;
        ms.emplace(std::move(m), std::move(c));
        return poly_mul_raw(ms, poly_side);
    }
    return poly_mul_raw(a, b);
}

// first-coefficient normalization: p == c * p0 with p0's leading coeff 1
std::pair<Rational, Poly> content_normalize(const Poly& p) {
    assert(!p.empty());
    Rational c = p.begin()->second;
    Poly p0;
    for (const auto& [m, q] : p) p0.emplace(m, q / c);
    return {c, std::move(p0)};
}

Poly poly_pow(const Poly& p, long k) {
    if (p.empty()) {
        if (k > 0) return {};
        throw std::domain_error("zero raised to a non-positive power");
    }
    Poly one_p;
    one_p.emplace(Mono{}, Rational(1));
    if (k == 0) return one_p;
    if (k == 1) return p;
    if (p.size() == 1) {
        const auto& [m, c] = *p.begin();
        Mono nm;
        for (const auto& [base, e] : m.bases) nm.bases[base] = e * k;
        if (!m.exparg.is_zero()) nm.exparg = mul({num(k), m.exparg});
        return finalize_mono(pow_rational(c, k), std::move(nm));
    }
    if (k > 0) {
        assert(k <= 256 && "unreasonably large symbolic power");
        Poly acc = p;
        for (long i = 1; i < k; ++i) acc = poly_mul(acc, p);
        return acc;
    }
    auto [c, p0] = content_normalize(p);
    Mono nm;
    nm.bases[from_poly(p0)] = k;
    return finalize_mono(pow_rational(c, k), std::move(nm));
}

Poly finalize_mono(Rational coeff, Mono m) {
    if (coeff == 0) return {};
    std::vector<std::pair<Expr, long>> pending;
    if (!m.exparg.is_zero()) {
        // move integer multiples of log terms out of the exponential:
        // exp(k ln b + rest) = b^k exp(rest)
        Poly ep = to_poly(m.exparg);
        bool changed = false;
        for (auto it = ep.begin(); it != ep.end();) {
            const Mono& em = it->first;
            const Rational& ec = it->second;
            if (em.exparg.is_zero() && em.bases.size() == 1 &&
                em.bases.begin()->first.kind() == ExprKind::Log &&
                em.bases.begin()->second == 1 && ec.get_den() == 1 && ec.get_num().fits_slong_p()) {
                pending.emplace_back(em.bases.begin()->first.node().kids[0],
                                     ec.get_num().get_si());
                it = ep.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
        if (changed) m.exparg = from_poly(ep);
    }
    Mono core;
    core.exparg = m.exparg;
    for (auto& [base, k] : m.bases) {
        if (k == 0) continue;
        if (base.kind() == ExprKind::Add && k > 0)
            pending.emplace_back(base, k);
        else
            core.bases.emplace(base, k);
    }
    Poly out;
    out.emplace(std::move(core), std::move(coeff));
    for (const auto& [base, k] : pending) out = poly_mul(out, poly_pow(to_poly(base), k));
    return out;
}

Poly mul_factors(const std::vector<Expr>& factors) {
    Rational coeff(1);
    std::map<Expr, long, ExprLess> bases;
    Expr exparg;
    for (const Expr& f : factors) {
        Poly p = to_poly(f);
        if (p.empty()) return {};
        if (p.size() == 1) {
            const auto& [m, c] = *p.begin();
            coeff *= c;
            for (const auto& [base, k] : m.bases) {
                long& slot = bases[base];
                slot += k;
                if (slot == 0) bases.erase(base);
            }
            if (!m.exparg.is_zero()) exparg = add({exparg, m.exparg});
        } else {
            auto [c, p0] = content_normalize(p);
            coeff *= c;
            Expr key = from_poly(p0);
            long& slot = bases[key];
            slot += 1;
            if (slot == 0) bases.erase(key);
        }
    }
    Mono m;
    m.bases = std::move(bases);
    m.exparg = exparg;
    return finalize_mono(std::move(coeff), std::move(m));
}

Poly to_poly(const Expr& e) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat: {
            Poly p;
            if (n.rat != 0) p.emplace(Mono{}, n.rat);
            return p;
        }
        case ExprKind::Sym:
        case ExprKind::App:
        case ExprKind::Log: {
            Poly p;
            Mono m;
            m.bases.emplace(e, 1);
            p.emplace(std::move(m), Rational(1));
            return p;
        }
        case ExprKind::Exp: {
            Poly p;
            Mono m;
            m.exparg = n.kids[0];
            p.emplace(std::move(m), Rational(1));
            return p;
        }
        case ExprKind::Add: {
            Poly acc;
            for (const Expr& k : n.kids) poly_add_inplace(acc, to_poly(k));
            return acc;
        }
        case ExprKind::Mul:
            return mul_factors(n.kids);
        case ExprKind::Pow:
            return poly_pow(to_poly(n.kids[0]), n.expo);
    }
    throw std::logic_error("unreachable expr kind");
}

Expr raw_pow(const Expr& base, long k) {
    ENode n{ExprKind::Pow};
    n.expo = k;
    n.kids = {base};
    return Expr{make_node(std::move(n))};
}

Expr raw_exp(const Expr& arg) {
    ENode n{ExprKind::Exp};
    n.kids = {arg};
    return Expr{make_node(std::move(n))};
}

Expr term_expr(const Mono& m, const Rational& c) {
    std::vector<Expr> factors;
    for (const auto& [base, k] : m.bases) factors.push_back(k == 1 ? base : raw_pow(base, k));
    if (!m.exparg.is_zero()) factors.push_back(raw_exp(m.exparg));
    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (factors.empty()) return num(c);
    if (c == 1 && factors.size() == 1) return factors[0];
    std::vector<Expr> kids;
    if (c != 1) kids.push_back(num(c));
    kids.insert(kids.end(), factors.begin(), factors.end());
    if (kids.size() == 1) return kids[0];
    ENode n{ExprKind::Mul};
    n.kids = std::move(kids);
    return Expr{make_node(std::move(n))};
}

Expr from_poly(const Poly& p0) {
    Poly p = canonicalize_fractions(p0);
    if (p.empty()) return zero_expr();
    if (p.size() == 1) return term_expr(p.begin()->first, p.begin()->second);
    ENode n{ExprKind::Add};
    for (const auto& [m, c] : p) n.kids.push_back(term_expr(m, c));
    return Expr{make_node(std::move(n))};
}

} // namespace

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

Expr num(long v) {
    if (v == 0) return zero_expr();
    if (v == 1) return one_expr();
    return Expr{make_node(ENode{ExprKind::Rat, Rational(v)})};
}

Expr num(const Rational& q) {
    if (q == 0) return zero_expr();
    if (q == 1) return one_expr();
    Rational c = q;
    c.canonicalize();
    return Expr{make_node(ENode{ExprKind::Rat, std::move(c)})};
}

Expr sym(SymbolId s) {
    ENode n{ExprKind::Sym};
    n.sym = s;
    return Expr{make_node(std::move(n))};
}

Expr add(const std::vector<Expr>& terms) {
    Poly acc;
    for (const Expr& t : terms) poly_add_inplace(acc, to_poly(t));
    return from_poly(acc);
}

Expr mul(const std::vector<Expr>& factors) {
    return from_poly(mul_factors(factors));
}

Expr pow(const Expr& base, long k) {
    return from_poly(poly_pow(to_poly(base), k));
}

Expr app(FuncId f, const std::vector<Expr>& args) {
    ENode n{ExprKind::App};
    n.fn = f;
    n.kids = args;
    return Expr{make_node(std::move(n))};
}

Expr exp_(const Expr& a) {
    if (a.is_zero()) return one_expr();
    if (a.kind() == ExprKind::Log) return a.node().kids[0];
    Mono m;
    m.exparg = a;
    return from_poly(finalize_mono(Rational(1), std::move(m)));
}

Expr log_(const Expr& a) {
    if (a.is_one()) return zero_expr();
    if (a.kind() == ExprKind::Exp) return a.node().kids[0];
    if (a.is_zero()) throw std::domain_error("log of zero");
    ENode n{ExprKind::Log};
    n.kids = {a};
    return Expr{make_node(std::move(n))};
}

Expr normalize(const Expr& e) {
    return from_poly(to_poly(e));
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

Expr diff(const Expr& e, SymbolId v) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat:
            return zero_expr();
        case ExprKind::Sym:
            return n.sym == v ? one_expr() : zero_expr();
        case ExprKind::Add: {
            std::vector<Expr> parts;
            for (const Expr& k : n.kids) parts.push_back(diff(k, v));
            return add(parts);
        }
        case ExprKind::Mul: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expr d = diff(n.kids[i], v);
                if (d.is_zero()) continue;
                std::vector<Expr> fs = n.kids;
                fs[i] = d;
                parts.push_back(mul(fs));
            }
            return add(parts);
        }
        case ExprKind::Pow: {
            Expr d = diff(n.kids[0], v);
            if (d.is_zero()) return zero_expr();
            return mul({num(n.expo), pow(n.kids[0], n.expo - 1), d});
        }
        case ExprKind::App: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expr d = diff(n.kids[i], v);
                if (d.is_zero()) continue;
                parts.push_back(mul({app(syms().derive(n.fn, i), n.kids), d}));
            }
            return add(parts);
        }
        case ExprKind::Exp: {
            Expr d = diff(n.kids[0], v);
            if (d.is_zero()) return zero_expr();
            return mul({e, d});
        }
        case ExprKind::Log: {
            Expr d = diff(n.kids[0], v);
            if (d.is_zero()) return zero_expr();
            return mul({d, pow(n.kids[0], -1)});
        }
    }
    throw std::logic_error("unreachable expr kind");
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

namespace {

Expr substitute_rec(const Expr& e, const Bindings& b, std::map<const ENode*, Expr>& memo) {
    if (auto it = b.find(e); it != b.end()) return it->second;
    const ENode& n = e.node();
    if (n.kind == ExprKind::Rat || n.kind == ExprKind::Sym) return e;
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    Expr out;
    switch (n.kind) {
        case ExprKind::Add: {
            std::vector<Expr> kids;
            for (const Expr& k : n.kids) kids.push_back(substitute_rec(k, b, memo));
            out = add(kids);
            break;
        }
        case ExprKind::Mul: {
            std::vector<Expr> kids;
            for (const Expr& k : n.kids) kids.push_back(substitute_rec(k, b, memo));
            out = mul(kids);
            break;
        }
        case ExprKind::Pow:
            out = pow(substitute_rec(n.kids[0], b, memo), n.expo);
            break;
        case ExprKind::App: {
            std::vector<Expr> args;
            for (const Expr& k : n.kids) args.push_back(substitute_rec(k, b, memo));
            out = app(n.fn, args);
            break;
        }
        case ExprKind::Exp:
            out = exp_(substitute_rec(n.kids[0], b, memo));
            break;
        case ExprKind::Log:
            out = log_(substitute_rec(n.kids[0], b, memo));
            break;
        default:
            out = e;
    }
    memo.emplace(&n, out);
    return out;
}

} // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
    if (bindings.empty()) return e;
    std::map<const ENode*, Expr> memo;
    return normalize(substitute_rec(e, bindings, memo));
}

// ---------------------------------------------------------------------------
// collect / queries
// ---------------------------------------------------------------------------

bool depends_on(const Expr& e, SymbolId v) {
    const ENode& n = e.node();
    if (n.kind == ExprKind::Sym) return n.sym == v;
    for (const Expr& k : n.kids)
        if (depends_on(k, v)) return true;
    return false;
}

bool contains_kernel(const Expr& e, const Expr& kernel) {
    if (e == kernel) return true;
    for (const Expr& k : e.node().kids)
        if (contains_kernel(k, kernel)) return true;
    return false;
}

namespace {

bool contains_any(const Expr& e, const std::map<Expr, std::size_t, ExprLess>& basis) {
    if (basis.count(e)) return true;
    for (const Expr& k : e.node().kids)
        if (contains_any(k, basis)) return true;
    return false;
}

} // namespace

std::map<Expr, Expr, ExprLess> collect(const Expr& e, const std::vector<Expr>& basis) {
    std::map<Expr, std::size_t, ExprLess> bset;
    for (std::size_t i = 0; i < basis.size(); ++i) bset.emplace(basis[i], i);

    Poly p = to_poly(e);
    std::map<Mono, Poly, MonoLess> grouped;
    for (const auto& [m, c] : p) {
        Mono bpart, rest;
        for (const auto& [base, k] : m.bases) {
            if (bset.count(base)) {
                if (k < 0)
                    throw NotPolynomialInBasis("negative power of basis kernel " );
                bpart.bases.emplace(base, k);
            } else {
                // a basis kernel hiding inside an opaque kernel argument is
                // not polynomial behaviour
                for (const Expr& kid : base.node().kids)
                    if (contains_any(kid, bset))
                        throw NotPolynomialInBasis("basis kernel inside opaque kernel argument");
                rest.bases.emplace(base, k);
            }
        }
        if (!m.exparg.is_zero() && contains_any(m.exparg, bset))
            throw NotPolynomialInBasis("basis kernel inside exp argument");
        rest.exparg = m.exparg;
        Poly piece;
        piece.emplace(std::move(rest), c);
        poly_add_inplace(grouped[bpart], piece);
    }
    std::map<Expr, Expr, ExprLess> out;
    for (const auto& [m, coefpoly] : grouped) {
        if (coefpoly.empty()) continue;
        out.emplace(term_expr(m, Rational(1)), from_poly(coefpoly));
    }
    return out;
}

std::vector<std::pair<Expr, Rational>> terms_of(const Expr& e) {
    Poly p = to_poly(e);
    std::vector<std::pair<Expr, Rational>> out;
    out.reserve(p.size());
    for (const auto& [m, c] : p) out.emplace_back(term_expr(m, Rational(1)), c);
    return out;
}

MonomialView monomial_view(const Expr& e) {
    Poly p = to_poly(e);
    if (p.size() > 1) throw std::invalid_argument("monomial_view of a sum");
    MonomialView v;
    if (p.empty()) {
        v.coeff = 0;
        return v;
    }
    const auto& [m, c] = *p.begin();
    v.coeff = c;
    for (const auto& [base, k] : m.bases) v.factors.emplace_back(base, k);
    v.exp_argument = m.exparg;
    return v;
}

Rational eval(const Expr& e, const std::map<SymbolId, Rational>& env) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat:
            return n.rat;
        case ExprKind::Sym: {
            auto it = env.find(n.sym);
            if (it == env.end())
                throw EvalError("unbound symbol in eval: " + syms().name(n.sym));
            return it->second;
        }
        case ExprKind::Add: {
            Rational r(0);
            for (const Expr& k : n.kids) r += eval(k, env);
            return r;
        }
        case ExprKind::Mul: {
            Rational r(1);
            for (const Expr& k : n.kids) r *= eval(k, env);
            return r;
        }
        case ExprKind::Pow:
            return pow_rational(eval(n.kids[0], env), n.expo);
        default:
            throw EvalError("cannot evaluate opaque kernel exactly");
    }
}

} // namespace hce
