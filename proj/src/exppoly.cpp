#include "hce/exppoly.hpp"

#include "hce/symbols.hpp"

namespace hce {

ExpPoly ExpPoly::constant(const Rational& q) {
    return term(q, 0, Rational(0));
}

ExpPoly ExpPoly::term(const Rational& q, long k, const Rational& lambda) {
    ExpPoly p;
    if (q != 0) p.terms_[{k, lambda}] = q;
    return p;
}

ExpPoly ExpPoly::operator+(const ExpPoly& o) const {
    ExpPoly out = *this;
    for (const auto& [key, q] : o.terms_) {
        Rational& slot = out.terms_[key];
        slot += q;
        if (slot == 0) out.terms_.erase(key);
    }
    return out;
}

ExpPoly ExpPoly::operator*(const ExpPoly& o) const {
    ExpPoly out;
    for (const auto& [ka, qa] : terms_)
        for (const auto& [kb, qb] : o.terms_) {
            std::pair<long, Rational> key{ka.first + kb.first, ka.second + kb.second};
            Rational& slot = out.terms_[key];
            slot += qa * qb;
            if (slot == 0) out.terms_.erase(key);
        }
    return out;
}

ExpPoly ExpPoly::scaled(const Rational& q) const {
    if (q == 0) return {};
    ExpPoly out;
    for (const auto& [key, c] : terms_) out.terms_[key] = c * q;
    return out;
}

ExpPoly ExpPoly::derivative() const {
    ExpPoly out;
    for (const auto& [key, q] : terms_) {
        auto [k, lambda] = key;
        if (lambda != 0) out = out + term(q * lambda, k, lambda);
        if (k > 0) out = out + term(q * k, k - 1, lambda);
    }
    return out;
}

Rational ExpPoly::at_zero() const {
    Rational r(0);
    for (const auto& [key, q] : terms_)
        if (key.first == 0) r += q;
    return r;
}

Rational ExpPoly::eval(const ExpParam& s) const {
    Rational r(0);
    for (const auto& [key, q] : terms_) {
        auto [k, lambda] = key;
        if (!s.is_log) {
            // s rational: e^{lambda s} rational only for lambda*s == 0
            if (lambda != 0 && s.value != 0)
                throw IrrationalResult("e^{lambda s} irrational at rational s");
            if (k > 0 && s.value == 0) continue;
            r += q * pow_rational(s.value, k);
        } else {
            // s = ln(rho): s^k irrational unless k == 0 or rho == 1
            if (k > 0) {
                if (s.value == 1) continue;  // ln 1 = 0 kills the term
                throw IrrationalResult("ln(r)^k irrational");
            }
            // e^{lambda ln rho} = rho^lambda
            Rational factor;
            if (lambda.get_den() == 1) {
                if (!lambda.get_num().fits_slong_p())
                    throw IrrationalResult("exponent too large");
                factor = pow_rational(s.value, lambda.get_num().get_si());
            } else {
                auto root = rational_root(s.value, lambda.get_den().get_ui());
                if (!root) throw IrrationalResult("r^(p/q) irrational");
                if (!lambda.get_num().fits_slong_p())
                    throw IrrationalResult("exponent too large");
                factor = pow_rational(*root, lambda.get_num().get_si());
            }
            r += q * factor;
        }
    }
    return r;
}

Expr ExpPoly::to_expr(SymbolId s) const {
    std::vector<Expr> parts;
    for (const auto& [key, q] : terms_) {
        auto [k, lambda] = key;
        Expr piece = num(q) * pow(sym(s), k);
        if (lambda != 0) piece = piece * exp_(num(lambda) * sym(s));
        parts.push_back(piece);
    }
    return add(parts);
}

} // namespace hce
