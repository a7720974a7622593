#include "modgrid/rational.hpp"

#include <limits>
#include <stdexcept>

#include "modgrid/errors.hpp"

namespace modgrid {

Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw ConfigError("empty rational literal");
  mpq_class value;
  if (value.set_str(text, 10) != 0)
    throw ConfigError("malformed rational literal: '" + text + "'");
  if (value.get_den() == 0)
    throw ConfigError("zero denominator in rational literal: '" + text + "'");
  value.canonicalize();
  return value;
}

std::string rational_to_string(const Rational& value) {
  return value.get_str();
}

Rational rational_pow(const Rational& value, long e) {
  if (e == 0) return Rational(1);
  if (value == 0) {
    if (e < 0) throw std::domain_error("zero base with negative exponent");
    return Rational(0);
  }
  Rational base = e > 0 ? value : Rational(1) / value;
  unsigned long n = e > 0 ? static_cast<unsigned long>(e)
                          : static_cast<unsigned long>(-(e + 1)) + 1;
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), n);
  result.canonicalize();
  return result;
}

long long to_long_long(const Integer& value) {
  if (!value.fits_slong_p())
    throw ConfigError("integer out of machine range: " + value.get_str());
  long v = value.get_si();
  return static_cast<long long>(v);
}

bool is_integral(const Rational& value) {
  return value.get_den() == 1;
}

Integer floor_rational(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Integer ceil_rational(const Rational& value) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

PrecBound min_prec(const PrecBound& a, const PrecBound& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? a : b;
}

PrecBound shift_prec(const PrecBound& bound, const Rational& delta) {
  if (!bound) return std::nullopt;
  return *bound + delta;
}

bool below_prec(const Rational& e, const PrecBound& bound) {
  return !bound || e < *bound;
}

}  // namespace modgrid
