#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace modgrid {

// Exact rational scalar used throughout. Always kept canonicalized.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "a/b" or "a"; throws ConfigError on malformed input.
Rational rational_from_string(const std::string& text);

// Canonical "a/b" (or "a" when the denominator is 1).
std::string rational_to_string(const Rational& value);

// value^e for integer e (negative allowed; throws ZeroSeries-style domain
// error via std::domain_error when value == 0 and e < 0).
Rational rational_pow(const Rational& value, long e);

// Narrowing conversion with overflow check.
long long to_long_long(const Integer& value);

// True iff value is an integer.
bool is_integral(const Rational& value);

// Exact floor / ceiling.
Integer floor_rational(const Rational& value);
Integer ceil_rational(const Rational& value);

// GMP's C++ classes predate long long constructors; long is 64 bits on
// every platform this library targets, so the casts are lossless.
inline Integer to_integer(long long v) {
  return Integer(static_cast<long>(v));
}
inline Rational to_rational(long long v) {
  return Rational(static_cast<long>(v));
}

// Optional-valued precision bound: nullopt means the series is exact at
// every exponent (finitely many terms, all known).
using PrecBound = std::optional<Rational>;

// min of two precision bounds, treating nullopt as +infinity.
PrecBound min_prec(const PrecBound& a, const PrecBound& b);

// bound + delta, exacting through nullopt.
PrecBound shift_prec(const PrecBound& bound, const Rational& delta);

// True iff e is strictly below the bound (i.e. the coefficient at e is known).
bool below_prec(const Rational& e, const PrecBound& bound);

}  // namespace modgrid
