#include "modgrid/genfun.hpp"

#include <algorithm>
#include <sstream>

#include "modgrid/errors.hpp"

namespace modgrid {

namespace {

Rational coeff_or_zero(const QExpansion& a, const Rational& exponent) {
  Rational scaled = exponent * to_rational(a.den());
  if (!is_integral(scaled)) return Rational(0);
  auto it = a.terms().find(to_long_long(scaled.get_num()));
  return it == a.terms().end() ? Rational(0) : it->second;
}

long long max_or_zero(const std::set<long long>& s) {
  return s.empty() ? 0 : *s.rbegin();
}

long long pole_order_ll(const QExpansion& a) {
  return to_long_long(ceil_rational(a.pole_order()));
}

// Rows of the H-difference arranged along the expansion axis: the lead row
// at index -B is the constant 1, row t carries the constant C_t, and row 0
// additionally subtracts the full series H on the other axis. The same
// construction serves both regions because the difference is antisymmetric.
std::map<long long, QExpansion> h_difference_rows(const QExpansion& H,
                                                  long long row_hi) {
  long long B = pole_order_ll(H);
  std::map<long long, QExpansion> rows;
  for (long long t = -B; t <= row_hi; ++t) {
    if (!below_prec(to_rational(t), H.prec()))
      throw PrecisionTooLow("Hauptmodul precision does not reach row " +
                            std::to_string(t));
    Rational c = coeff_or_zero(H, to_rational(t));
    if (t == 0) {
      rows.emplace(t, sub(QExpansion::constant(c), H));
    } else if (c != 0) {
      rows.emplace(t, QExpansion::constant(c));
    }
  }
  return rows;
}

// Ascending long division N / D of row maps; D's lead row must be the
// constant 1 at index den_lead. Quotient rows are produced up to out_hi.
std::map<long long, QExpansion> divide_rows(
    const std::map<long long, QExpansion>& num,
    const std::map<long long, QExpansion>& den, long long den_lead,
    long long out_hi) {
  std::map<long long, QExpansion> quotient;
  if (num.empty()) return quotient;
  auto lead_it = den.find(den_lead);
  if (lead_it == den.end() ||
      !identical(lead_it->second, QExpansion::constant(1)))
    throw InconsistentIndexData(
        "division requires a monic constant lead row");
  long long q_lo = num.begin()->first - den_lead;
  for (long long u = q_lo; u <= out_hi; ++u) {
    // N_{u+lead} = Q_u * D_lead + sum_{s<u} Q_s * D_{u+lead-s}, D_lead = 1.
    QExpansion acc;
    auto nit = num.find(u + den_lead);
    if (nit != num.end()) acc = nit->second;
    for (const auto& [s, qrow] : quotient) {
      auto dit = den.find(u + den_lead - s);
      if (dit == den.end()) continue;
      acc = sub(acc, mul(qrow, dit->second));
    }
    if (!acc.is_zero()) quotient.emplace(u, std::move(acc));
  }
  return quotient;
}

bool rows_agree(const QExpansion& got, const QExpansion& want,
                const Rational& q_hi) {
  // Compare exactly on exponents < q_hi + 1; both inputs must know them.
  PrecBound bound = PrecBound(q_hi + 1);
  if (!below_prec(q_hi, got.prec()) || !below_prec(q_hi, want.prec()))
    throw PrecisionTooLow("comparison window exceeds known coefficients");
  return identical(got.truncated(bound), want.truncated(bound));
}

struct DecompositionScope {
  const SpaceConfig* config;
  const SpaceConfig* dual;
  IndexSets idx;
  IndexSets idx_dual;
  long long B;
  long long B_z;    // pole bound in z: B + max cusp index of the g-side
  long long B_tau;  // pole bound in tau: B + max holomorphic index

  DecompositionScope(const ModularGrid& grid, long long pole_order)
      : config(&space_config(grid.space_id)),
        dual(&space_config(grid.dual_space_id)),
        idx(index_sets(*config)),
        idx_dual(index_sets(*dual)),
        B(pole_order),
        B_z(pole_order + max_or_zero(dual->index_data.cuspidal)),
        B_tau(pole_order + max_or_zero(config->index_data.holomorphic)) {}
};

}  // namespace

BivariateWindow build_F_window(const ModularGrid& grid, long long p_lo,
                               long long p_hi, const Rational& q_prec) {
  if (p_hi > grid.max_m)
    throw WindowExceedsGrid("requested rows beyond index " +
                            std::to_string(grid.max_m));
  BivariateWindow F;
  F.p_lo = p_lo;
  F.p_hi = p_hi;
  for (const auto& [m, member] : grid.f_family.members) {
    if (m < p_lo || m > p_hi) continue;
    if (member.prec() && *member.prec() < q_prec)
      throw WindowExceedsGrid("family precision below the requested window");
    F.rows.emplace(m, member.truncated(PrecBound(q_prec)));
  }
  return F;
}

BivariateWindow multiply_by_H_difference(const BivariateWindow& F,
                                         const QExpansion& H,
                                         const ModularGrid& grid) {
  if (H.is_zero()) throw ZeroSeries("Hauptmodul");
  DecompositionScope scope(grid, pole_order_ll(H));
  const long long B = scope.B;

  BivariateWindow K;
  K.p_lo = F.p_lo - B;
  K.p_hi = F.p_hi - B;
  for (long long m = K.p_lo; m <= K.p_hi; ++m) {
    QExpansion acc;
    for (const auto& [i, f_i] : F.rows) {
      Rational t = to_rational(m - i);
      if (!below_prec(t, H.prec()))
        throw PrecisionTooLow("Hauptmodul precision does not reach row " +
                              std::to_string(m - i));
      Rational c = coeff_or_zero(H, t);
      if (c != 0) acc = add(acc, scalar_mul(c, f_i));
    }
    auto self = F.rows.find(m);
    if (self != F.rows.end()) acc = sub(acc, mul(self->second, H));
    if (!acc.is_zero()) {
      if (acc.pole_order() > to_rational(scope.B_z))
        throw PoleBoundViolated("row " + std::to_string(m) +
                                " exceeds pole order " +
                                std::to_string(scope.B_z));
      K.rows.emplace(m, std::move(acc));
    }
  }
  return K;
}

namespace {

std::vector<std::tuple<Rational, long long, long long>> read_off(
    const BivariateWindow& K, const std::vector<long long>& ms,
    const std::vector<long long>& ns) {
  std::vector<std::tuple<Rational, long long, long long>> out;
  for (long long m : ms) {
    for (long long n : ns) {
      if (-n < K.p_lo || -n > K.p_hi)
        throw WindowExceedsGrid("window misses row " + std::to_string(-n));
      auto row = K.rows.find(-n);
      if (row == K.rows.end()) continue;
      Rational c = coeff_or_zero(row->second, to_rational(-m));
      if (c != 0) out.emplace_back(c, m, n);
    }
  }
  return out;
}

bool residual_vanishes(
    const BivariateWindow& K, const ModularGrid& grid,
    const std::vector<std::tuple<Rational, long long, long long>>& numerator) {
  for (long long t = K.p_lo; t <= K.p_hi; ++t) {
    QExpansion expect;
    for (const auto& [c, m, n] : numerator) {
      const QExpansion& g = grid.g_family.members.at(n);
      if (!below_prec(to_rational(t), g.prec()))
        throw PrecisionTooLow("g-side precision does not reach row " +
                              std::to_string(t));
      Rational gc = coeff_or_zero(g, to_rational(t));
      if (gc == 0) continue;
      Rational scale = c * gc;
      expect = add(expect, scalar_mul(scale, grid.f_family.members.at(m)));
    }
    auto it = K.rows.find(t);
    QExpansion have = it == K.rows.end() ? QExpansion() : it->second;
    if (!sub(have, expect).is_zero()) return false;
  }
  return true;
}

}  // namespace

GridGeneratingExpression tensor_decompose(const BivariateWindow& K,
                                          const ModularGrid& grid,
                                          const QExpansion& H) {
  DecompositionScope scope(grid, pole_order_ll(H));

  auto require_covered = [&](long long f_hi, long long g_hi) {
    if (grid.f_family.max_index < f_hi || grid.g_family.max_index < g_hi)
      throw WindowExceedsGrid(
          "families do not cover the decomposition pole bounds");
  };
  require_covered(scope.B_z, scope.B_tau);

  GridGeneratingExpression expr;
  expr.hauptmodul = scope.config->kit.genfun_hauptmodul_label;
  expr.numerator =
      read_off(K, scope.idx.itilde_in(0, scope.B_z),
               scope.idx_dual.jtilde_in(0, scope.B_tau));
  if (residual_vanishes(K, grid, expr.numerator)) return expr;

  // Fallback: enlarge the read-off rectangle to every family member,
  // holomorphic (negative) indices included.
  expr.numerator = read_off(
      K, scope.idx.itilde_in(scope.idx.itilde_min(), scope.B_z),
      scope.idx_dual.jtilde_in(scope.idx_dual.jtilde_min(), scope.B_tau));
  if (residual_vanishes(K, grid, expr.numerator)) return expr;
  throw ResidualNonzero("tensor read-off leaves a nonzero residual");
}

bool verify_two_sided(const GridGeneratingExpression& expr,
                      const ModularGrid& grid, long long window_m,
                      long long window_n) {
  const SpaceConfig& fc = space_config(grid.space_id);
  const SpaceConfig& dual = space_config(grid.dual_space_id);
  IndexSets idx = index_sets(fc);
  IndexSets idx_dual = index_sets(dual);

  long long max_mj = 0, max_nj = 0;
  for (const auto& [c, m, n] : expr.numerator) {
    if (!idx.itilde_contains(m) || !idx_dual.jtilde_contains(n))
      throw IndexMismatch("numerator tensor (" + std::to_string(m) + ", " +
                          std::to_string(n) +
                          ") does not index a member pair of " +
                          grid.space_id);
    max_mj = std::max(max_mj, m);
    max_nj = std::max(max_nj, n);
  }

  // Probe the Hauptmodul to learn its pole order, then rebuild everything
  // deep enough for the division depth on both axes.
  long long B = pole_order_ll(resolve_hauptmodul(expr.hauptmodul, Rational(1)));
  long long f_hi = std::max(window_m, max_mj);
  long long g_hi = std::max(window_n, max_nj);
  long long p_steps = window_m + max_nj + B + 2;
  long long q_steps = window_n + max_mj + B + 2;
  Rational deep_prec = to_rational(std::max(p_steps, q_steps) * std::max(B, 1LL) +
                               std::max(window_m, window_n) + 8);
  // Quotient-row products bind at H.prec + lead(Q_s) with leads down to
  // -max(f_hi, g_hi); pad so every row keeps at least deep_prec.
  QExpansion H = resolve_hauptmodul(
      expr.hauptmodul, deep_prec + to_rational(f_hi + g_hi + B + 4));
  BasisFamily f_fam = canonical_basis(fc, FamilyKind::F, f_hi, deep_prec);
  BasisFamily g_fam =
      canonical_basis(dual, FamilyKind::G, g_hi, deep_prec);

  // p-side: rows of expr/(H(tau)-H(z)) in the p-small region equal f_m.
  {
    std::map<long long, QExpansion> num;
    for (const auto& [c, m, n] : expr.numerator) {
      const QExpansion& g = g_fam.members.at(n);
      const QExpansion& f = f_fam.members.at(m);
      for (long long t = -g_hi; t <= window_m; ++t) {
        Rational gc = coeff_or_zero(g, to_rational(t));
        if (gc == 0) continue;
        Rational scale = c * gc;
        auto [it, inserted] = num.try_emplace(t);
        it->second = add(it->second, scalar_mul(scale, f));
      }
    }
    std::map<long long, QExpansion> den = h_difference_rows(H, window_m + B);
    std::map<long long, QExpansion> quot =
        divide_rows(num, den, -B, window_m);
    long long lo = quot.empty() ? 0 : quot.begin()->first;
    for (long long m = std::min(lo, idx.itilde_min()); m <= window_m; ++m) {
      QExpansion got;
      auto it = quot.find(m);
      if (it != quot.end()) got = it->second;
      QExpansion want;
      if (idx.itilde_contains(m)) want = f_fam.members.at(m);
      if (!rows_agree(got, want, to_rational(window_n))) return false;
    }
  }

  // q-side: rows in the q-small region equal -g_n; dividing by the negated
  // difference flips the sign, so the quotient rows equal +g_n.
  {
    std::map<long long, QExpansion> num;
    for (const auto& [c, m, n] : expr.numerator) {
      const QExpansion& f = f_fam.members.at(m);
      const QExpansion& g = g_fam.members.at(n);
      for (long long s = -f_hi; s <= window_n; ++s) {
        Rational fcoef = coeff_or_zero(f, to_rational(s));
        if (fcoef == 0) continue;
        Rational scale = c * fcoef;
        auto [it, inserted] = num.try_emplace(s);
        it->second = add(it->second, scalar_mul(scale, g));
      }
    }
    std::map<long long, QExpansion> den = h_difference_rows(H, window_n + B);
    std::map<long long, QExpansion> quot =
        divide_rows(num, den, -B, window_n);
    long long lo = quot.empty() ? 0 : quot.begin()->first;
    for (long long n = std::min(lo, idx_dual.jtilde_min()); n <= window_n;
         ++n) {
      QExpansion got;
      auto it = quot.find(n);
      if (it != quot.end()) got = it->second;
      QExpansion want;
      if (idx_dual.jtilde_contains(n)) want = g_fam.members.at(n);
      if (!rows_agree(got, want, to_rational(window_m))) return false;
    }
  }
  return true;
}

GridGeneratingExpression derive_generating_expression(
    const SpaceConfig& config, long long window_m, long long window_n,
    bool* verified) {
  const SpaceConfig& dual = space_config(config.dual_id);
  long long B = pole_order_ll(
      resolve_hauptmodul(config.kit.genfun_hauptmodul_label, Rational(1)));
  long long B_z = B + max_or_zero(dual.index_data.cuspidal);
  long long B_tau = B + max_or_zero(config.index_data.holomorphic);

  long long max_m = std::max(window_m, B_z);
  long long max_n = std::max(window_n, B_tau);
  Rational prec = to_rational(std::max(max_m, max_n) + B_z + B_tau + 6);
  ModularGrid grid = build_grid(config, max_m, max_n, prec);

  IndexSets idx = index_sets(config);
  QExpansion H = resolve_hauptmodul(config.kit.genfun_hauptmodul_label,
                                    prec + to_rational(max_m + B + 4));
  BivariateWindow F =
      build_F_window(grid, idx.itilde_min(), grid.max_m, prec);
  BivariateWindow K = multiply_by_H_difference(F, H, grid);
  GridGeneratingExpression expr = tensor_decompose(K, grid, H);
  if (verified) *verified = verify_two_sided(expr, grid, window_m, window_n);
  return expr;
}

nlohmann::ordered_json genfun_to_json(const GridGeneratingExpression& expr) {
  nlohmann::ordered_json j;
  j["hauptmodul"] = expr.hauptmodul;
  nlohmann::ordered_json numerator = nlohmann::ordered_json::array();
  for (const auto& [c, m, n] : expr.numerator) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::array();
    if (is_integral(c) && c.get_num().fits_slong_p())
      entry.push_back(to_long_long(c.get_num()));
    else
      entry.push_back(rational_to_string(c));
    entry.push_back(m);
    entry.push_back(n);
    numerator.push_back(std::move(entry));
  }
  j["numerator"] = std::move(numerator);
  return j;
}

std::string genfun_to_pretty(const GridGeneratingExpression& expr) {
  std::ostringstream out;
  out << "F(z,tau) = (";
  bool first = true;
  for (const auto& [c, m, n] : expr.numerator) {
    if (!first) out << " + ";
    first = false;
    if (c != 1) out << rational_to_string(c) << "*";
    out << "f_" << m << "(z)*g_" << n << "(tau)";
  }
  if (first) out << "0";
  out << ") / (H(tau) - H(z)),  H = " << expr.hauptmodul;
  return out.str();
}

}  // namespace modgrid
