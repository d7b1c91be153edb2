#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hce/expr.hpp"
#include "hce/rational.hpp"

namespace hce {

struct IrrationalResult : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact scalar parameter for adjoint words: either a rational value of s or
// s = ln(r) for a positive rational r (so e^{ks} stays rational).
struct ExpParam {
    bool is_log = false;
    Rational value{0};

    static ExpParam rational(const Rational& q) { return {false, q}; }
    static ExpParam log(const Rational& r) {
        if (r <= 0) throw std::domain_error("log parameter must be positive");
        return {true, r};
    }
};

// Scalars of the form Sigma q * s^k * e^{lambda s} with exact rational q,
// lambda and natural k; closed under +, * and d/ds.
class ExpPoly {
public:
    ExpPoly() = default;
    static ExpPoly constant(const Rational& q);
    // q * s^k * e^{lambda s}
    static ExpPoly term(const Rational& q, long k, const Rational& lambda);

    bool is_zero() const { return terms_.empty(); }
    friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }

    ExpPoly operator+(const ExpPoly& o) const;
    ExpPoly operator*(const ExpPoly& o) const;
    ExpPoly scaled(const Rational& q) const;
    ExpPoly derivative() const;

    Rational at_zero() const;
    // exact evaluation; throws IrrationalResult when the value leaves Q
    Rational eval(const ExpParam& s) const;

    Expr to_expr(SymbolId s) const;

    const std::map<std::pair<long, Rational>, Rational>& terms() const { return terms_; }

private:
    // (k, lambda) -> q
    std::map<std::pair<long, Rational>, Rational> terms_;
};

} // namespace hce
