#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modgrid/qexpansion.hpp"

namespace modgrid {

// Product of eta factors eta(d z)^r, given as (dilation d, power r) pairs.
// The expansion carries the prefactor q^(sum d*r/24), so exponents live on
// the lattice generated by that shift and the dilations.
struct EtaQuotientSpec {
  std::vector<std::pair<long long, long long>> factors;

  // sum d*r/24: exponent of the leading term.
  Rational leading_exponent() const;

  // Stable text form, e.g. "eta[1^8,4^-8]" (used in cache keys).
  std::string descriptor() const;
};

// q-expansion of the eta quotient, exact below prec. Memoized.
QExpansion eta_quotient(const EtaQuotientSpec& spec, const Rational& prec);

// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for
// even k >= 2 (k = 2 is the quasimodular one). Memoized.
QExpansion eisenstein(long weight, const Rational& prec);

// Weight-2 holomorphic combination (E_2(z) - level*E_2(level z))/(1 - level)
// with constant term 1; level >= 2.
QExpansion e2_hat(long level, const Rational& prec);

// Jacobi theta = 1 + 2 sum q^{n^2}, exponent classes {0,1 mod 4}.
QExpansion theta_series(const Rational& prec);

// Discriminant form eta^24 = q - 24q^2 + 252q^3 - ...
QExpansion delta_series(const Rational& prec);

// Klein j = E4^3 / Delta = q^-1 + 744 + 196884 q + ...
QExpansion j_function(const Rational& prec);

// Genus-zero Hauptmodul (eta(z)/eta(level z))^{24/(level-1)} for level in
// {2, 3, 5, 7, 13}; throws UnsupportedLevel otherwise.
QExpansion level_hauptmodul(long level, const Rational& prec);

// Exact Bernoulli number B_n (B_1 = -1/2 convention). Memoized.
Rational bernoulli_number(long n);

}  // namespace modgrid
