#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace descent {

using Integer = mpz_class;
// Always canonical: lowest terms, positive denominator.
using Rational = mpq_class;

// Accepts "p" or "p/q" with decimal integers; rejects a zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

std::optional<Integer> integer_sqrt_exact(const Integer& n);
std::optional<Rational> rational_sqrt(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace descent
