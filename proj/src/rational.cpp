#include "hce/rational.hpp"

#include <stdexcept>

namespace hce {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        Rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational literal: " + s);
    }
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    bool invert = e < 0;
    unsigned long n = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    if (invert && base == 0) throw std::domain_error("zero base with negative exponent");
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), n);
    r.canonicalize();
    if (invert) r = 1 / r;
    return r;
}

std::optional<Rational> rational_root(const Rational& q, unsigned long n) {
    if (n == 0) throw std::invalid_argument("0th root");
    if (n == 1) return q;
    if (sgn(q) < 0 && n % 2 == 0) return std::nullopt;
    Integer num = q.get_num(), den = q.get_den();
    Integer rn, rd;
    int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n);
    int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n);
    if (!exact_n || !exact_d) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

} // namespace hce
