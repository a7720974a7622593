#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "modgrid/grid.hpp"

namespace modgrid {

// Finite window of a bivariate series Sum_m row_m(q) p^m, stored as
// q-expansions keyed by p-exponent (expansion region: the p-variable is the
// small one). Absent rows inside [p_lo, p_hi] are identically zero.
struct BivariateWindow {
  std::map<long long, QExpansion> rows;
  long long p_lo = 0;
  long long p_hi = 0;
};

// Rational expression generating a grid: numerator tuples (c, m, n) stand
// for c * f_m(z) * g_n(tau), over the denominator H(tau) - H(z).
struct GridGeneratingExpression {
  std::string hauptmodul;
  std::vector<std::tuple<Rational, long long, long long>> numerator;
};

// Rows of Sum f_m(z) p^m for grid members with index in [p_lo, p_hi], each
// truncated to q_prec. Throws WindowExceedsGrid if the grid window or the
// family precision cannot cover the request.
BivariateWindow build_F_window(const ModularGrid& grid, long long p_lo,
                               long long p_hi, const Rational& q_prec);

// K = (H(tau) - H(z)) * F, rowwise: K_m = Sum_i C_{m-i} f_i - f_m H with
// C_t the coefficients of H. The result loses the top B rows (B = pole
// order of H). Every valid row's pole order is checked against the global
// bound B + max cusp index of the g-side (PoleBoundViolated on failure).
BivariateWindow multiply_by_H_difference(const BivariateWindow& F,
                                         const QExpansion& H,
                                         const ModularGrid& grid);

// Reads the numerator tensors off K's principal square: c_{m,n} is the
// coefficient of q^{-m} p^{-n} for m and n in the index sets intersected
// with the pole bounds B_z = B + max cusp index (g-side) and B_tau = B +
// max holomorphic index (f-side). The residual K - Sum c f_m (x) g_n must
// vanish on the window; if not, the read-off is retried over the enlarged
// index rectangle including holomorphic (negative-index) members, and
// ResidualNonzero is thrown when a residual still survives.
GridGeneratingExpression tensor_decompose(const BivariateWindow& K,
                                          const ModularGrid& grid,
                                          const QExpansion& H);

// Expands expr / (H(tau) - H(z)) independently in both regions by bivariate
// long division and compares: p-rows must reproduce every f_m (and vanish
// off the index set) for m <= window_m up to q-precision window_n + 1;
// q-rows must reproduce every -g_n symmetrically. Families are rebuilt at
// the precision the division depth requires.
bool verify_two_sided(const GridGeneratingExpression& expr,
                      const ModularGrid& grid, long long window_m,
                      long long window_n);

// End-to-end: build a sufficient grid for the config, assemble K with the
// config's Hauptmodul, decompose, and two-sidedly verify on the window.
GridGeneratingExpression derive_generating_expression(
    const SpaceConfig& config, long long window_m, long long window_n,
    bool* verified = nullptr);

nlohmann::ordered_json genfun_to_json(const GridGeneratingExpression& expr);
std::string genfun_to_pretty(const GridGeneratingExpression& expr);

}  // namespace modgrid
