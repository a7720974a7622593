#pragma once

#include <utility>

#include "modgrid/qexpansion.hpp"
#include "modgrid/spaces.hpp"

namespace modgrid {

// Width-weighted coefficient convolution of two expansions at the cusp at
// infinity, with explicit completeness accounting.
struct PairingResult {
  Rational value{0};
  // True iff the available precision makes the finite convolution provably
  // exact; a complete value never changes under precision increase.
  bool complete = false;
  // Exponent interval [-P_f, P_g] that can contribute.
  std::pair<Rational, Rational> contributing_range{Rational(0), Rational(0)};
};

// (w_inf / hat_w) * sum over l of a(l) * b(-l). The convolution has finite
// support once both pole orders are known, so completeness is decidable:
// every f-term at exponent <= P_g and every g-term at exponent <= P_f must
// be below the respective precision bound.
PairingResult pair_infty(const QExpansion& f, const QExpansion& g,
                         const Rational& w_inf, const Rational& hat_w);

// True iff the pairing of the two members is complete and exactly zero;
// widths are taken from the config. Throws IncompletePairing when the
// precision does not support a verdict.
bool assert_pairing_zero(const QExpansion& f, const QExpansion& g,
                         const SpaceConfig& config);

}  // namespace modgrid
