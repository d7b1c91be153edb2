#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <string_view>

namespace hce {

using Rational = mpq_class;
using Integer  = mpz_class;

// Parses "p", "-p", "p/q"; throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

// base^e for any integer e; base must be nonzero when e < 0.
Rational pow_rational(const Rational& base, long e);

// Exact n-th root when it exists (n >= 1; negative base allowed for odd n).
std::optional<Rational> rational_root(const Rational& q, unsigned long n);

inline int sign(const Rational& q) { return sgn(q); }

} // namespace hce
