#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "modgrid/rational.hpp"
#include "modgrid/support.hpp"

namespace modgrid {

// Truncated Laurent q-expansion with exact rational coefficients on the
// lattice (1/den)Z. Terms are stored sparsely keyed by exponent numerator
// (exponent = key / den). prec() is an exclusive bound: every coefficient at
// exponent < prec is represented (implicitly zero when absent); coefficients
// at >= prec are unknown. A nullopt prec means the expansion is exact
// everywhere (a Laurent polynomial).
//
// Invariants: den == support.den(); no stored zero coefficients; every
// stored exponent lies in support and below prec.
class QExpansion {
 public:
  // Exact zero on the integer lattice.
  QExpansion() = default;

  static QExpansion zero(ExponentSupport support, PrecBound prec);
  static QExpansion constant(const Rational& value);
  static QExpansion monomial(const Rational& coefficient,
                             const Rational& exponent);

  // Assembles a checked expansion: keys are exponent numerators over
  // support.den(). Terms outside the support raise IncompatibleSupport;
  // terms at or beyond prec are dropped.
  QExpansion(ExponentSupport support, std::map<long long, Rational> terms,
             PrecBound prec);

  const ExponentSupport& support() const noexcept { return support_; }
  long long den() const noexcept { return support_.den(); }
  const std::map<long long, Rational>& terms() const noexcept {
    return terms_;
  }
  const PrecBound& prec() const noexcept { return prec_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  std::optional<Rational> leading_exponent() const;
  // Throws ZeroSeries when empty.
  const Rational& leading_coefficient() const;
  // max(0, -leading_exponent): q-pole order at the cusp of expansion.
  Rational pole_order() const;

  // Coefficient at the given exponent; throws BeyondPrecision when the
  // exponent is not strictly below prec.
  Rational coefficient(const Rational& exponent) const;

  // Copy limited to the (possibly lower) bound.
  QExpansion truncated(const PrecBound& new_prec) const;

  // Same terms re-declared on a support that must contain them.
  QExpansion with_support(const ExponentSupport& support) const;

  std::string to_display_string(std::size_t max_terms = 10) const;

 private:
  friend QExpansion add(const QExpansion&, const QExpansion&);
  friend QExpansion mul(const QExpansion&, const QExpansion&);

  ExponentSupport support_;
  std::map<long long, Rational> terms_;
  PrecBound prec_;
};

// Pointwise sum; the result support is the union lattice, precision the min.
QExpansion add(const QExpansion& a, const QExpansion& b);
QExpansion sub(const QExpansion& a, const QExpansion& b);
QExpansion negate(const QExpansion& a);
QExpansion scalar_mul(const Rational& scalar, const QExpansion& a);

// Cauchy product. Result precision is min(a.prec + lead(b), b.prec +
// lead(a)) with an empty factor's lead read as its precision bound; the
// result support is the sumset of the operand supports.
QExpansion mul(const QExpansion& a, const QExpansion& b);

// Multiplicative inverse by ascending long division. Throws ZeroSeries on an
// empty input. An exact non-monomial input has an infinite inverse series
// and is truncated at leading + default_invert_window q-units unless
// prec_cap is given.
QExpansion invert(const QExpansion& a, PrecBound prec_cap = std::nullopt);
inline constexpr long long default_invert_window = 64;

// a^e with integer e (negative via invert).
QExpansion power(const QExpansion& a, long e, PrecBound prec_cap = std::nullopt);

// Termwise q d/dq: n * c_n q^n.
QExpansion derive(const QExpansion& a);

// q -> q^factor exponent scaling, factor > 0 rational.
QExpansion dilate(const QExpansion& a, const Rational& factor);

// Free-function coefficient accessor.
Rational coefficient(const QExpansion& a, const Rational& exponent);

// Equality of term maps and precision bounds, ignoring support metadata.
bool identical(const QExpansion& a, const QExpansion& b);

// Term-map equality below the smaller precision bound (used by tests and
// verification passes; supports and the bounds themselves may differ).
bool agree_below_common_prec(const QExpansion& a, const QExpansion& b);

}  // namespace modgrid
