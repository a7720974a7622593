#include "modgrid/pairing.hpp"

#include "modgrid/errors.hpp"

namespace modgrid {

PairingResult pair_infty(const QExpansion& f, const QExpansion& g,
                         const Rational& w_inf, const Rational& hat_w) {
  if (hat_w <= 0 || w_inf <= 0)
    throw ConfigError("cusp widths must be positive");
  const Rational P_f = f.pole_order();
  const Rational P_g = g.pole_order();

  PairingResult out;
  out.contributing_range = {-P_f, P_g};
  // Coefficients of f are needed on [-P_f, P_g], of g on [-P_g, P_f]; the
  // bounds are exclusive-precision, hence the strict comparisons.
  out.complete = below_prec(P_g, f.prec()) && below_prec(P_f, g.prec());

  Rational sum(0);
  const Rational g_den = to_rational(g.den());
  for (const auto& [key, a] : f.terms()) {
    Rational l = to_rational(key) / to_rational(f.den());
    if (!below_prec(-l, g.prec())) continue;
    Rational scaled = -l * g_den;
    if (!is_integral(scaled)) continue;
    auto it = g.terms().find(to_long_long(scaled.get_num()));
    if (it == g.terms().end()) continue;
    Rational term = a * it->second;
    sum += term;
  }
  out.value = Rational(w_inf / hat_w) * sum;
  return out;
}

bool assert_pairing_zero(const QExpansion& f, const QExpansion& g,
                         const SpaceConfig& config) {
  PairingResult r =
      pair_infty(f, g, config.width_infty, config.hat_width);
  if (!r.complete)
    throw IncompletePairing("precision too low to evaluate the pairing of " +
                            config.id + " members");
  return r.value == 0;
}

}  // namespace modgrid
