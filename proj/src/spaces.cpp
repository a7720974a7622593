#include "modgrid/spaces.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <utility>

#include "modgrid/errors.hpp"

namespace modgrid {

namespace {

// Term lookup that treats absent (or out-of-lattice) exponents as zero and
// never consults the precision bound; callers guard soundness.
Rational coeff_or_zero(const QExpansion& a, const Rational& exponent) {
  Rational scaled = exponent * to_rational(a.den());
  if (!is_integral(scaled)) return Rational(0);
  auto it = a.terms().find(to_long_long(scaled.get_num()));
  return it == a.terms().end() ? Rational(0) : it->second;
}

bool below_bound(const PrecBound& prec, const Rational& e) {
  return !prec || e < *prec;
}

long long index_of_lead(const QExpansion& row) {
  Rational lead = *row.leading_exponent();
  Rational neg = -lead;
  if (!is_integral(neg))
    throw InconsistentIndexData("non-integral pivot exponent " +
                                rational_to_string(lead));
  return to_long_long(neg.get_num());
}

struct SL2ZBase {
  int e4 = 0;
  int e6 = 0;
  long delta = 0;  // exponent of the discriminant form, possibly negative
};

SL2ZBase sl2z_base_exponents(int k) {
  int m = ((k % 12) + 12) % 12;
  int a = 0, b = 0;
  switch (m) {
    case 0: a = 0; b = 0; break;
    case 4: a = 1; b = 0; break;
    case 8: a = 2; b = 0; break;
    case 6: a = 0; b = 1; break;
    case 10: a = 1; b = 1; break;
    case 2: a = 2; b = 1; break;
    default:
      throw UnsupportedSpace("odd weight " + std::to_string(k));
  }
  return SL2ZBase{a, b, (k - 4L * a - 6L * b) / 12L};
}

QExpansion build_sl2z_base(int k, const Rational& prec) {
  SL2ZBase base = sl2z_base_exponents(k);
  Rational work = prec + Rational(3 * std::labs(base.delta) + 6);
  QExpansion out = QExpansion::constant(1);
  if (base.e4) out = mul(out, power(eisenstein(4, work), base.e4));
  if (base.e6) out = mul(out, power(eisenstein(6, work), base.e6));
  if (base.delta) out = mul(out, power(delta_series(work), base.delta));
  return out.truncated(min_prec(out.prec(), PrecBound(prec)));
}

IndexData sl2z_index_data(int k) {
  if (k < 0 || k == 2) return {};
  int m = ((k % 12) + 12) % 12;
  int dim = (m == 2) ? k / 12 : k / 12 + 1;
  int dim_cusp = std::max(0, dim - 1);
  IndexData data;
  for (int i = 0; i < dim; ++i) data.holomorphic.insert(i);
  for (int i = 1; i <= dim_cusp; ++i) data.cuspidal.insert(i);
  return data;
}

SpaceConfig make_sl2z_config(int k) {
  SpaceConfig cfg;
  cfg.id = "sl2z-k" + std::to_string(k);
  cfg.dual_id = "sl2z-k" + std::to_string(2 - k);
  cfg.group_level = 1;
  cfg.weight2 = 2 * k;
  cfg.support = ExponentSupport::integers();
  cfg.kit.seeds = {SeedRecipe{
      "sl2z-base-k" + std::to_string(k),
      [k](const Rational& prec) { return build_sl2z_base(k, prec); }}};
  cfg.kit.ladder = SeedRecipe{"j-744", [](const Rational& prec) {
                                return sub(j_function(prec),
                                           QExpansion::constant(744));
                              }};
  cfg.kit.genfun_hauptmodul_label = "j-744";
  cfg.index_data = sl2z_index_data(k);
  return cfg;
}

SpaceConfig make_gamma0_config(long level, int k) {
  SpaceConfig cfg;
  cfg.id = "gamma0-" + std::to_string(level) + "-k" + std::to_string(k);
  cfg.dual_id = "gamma0-" + std::to_string(level) + "-k" + std::to_string(2 - k);
  cfg.group_level = level;
  cfg.weight2 = 2 * k;
  cfg.support = ExponentSupport::integers();
  cfg.cusp_widths = {{"0", Rational(level)}};
  if (k == 0) {
    cfg.kit.seeds = {SeedRecipe{
        "one", [](const Rational&) { return QExpansion::constant(1); }}};
    cfg.kit.g_eisenstein_constants = true;
  } else {
    cfg.kit.seeds = {SeedRecipe{
        "e2hat-" + std::to_string(level),
        [level](const Rational& prec) { return e2_hat(level, prec); }}};
    cfg.kit.g_by_derivative = true;
  }
  cfg.kit.ladder =
      SeedRecipe{"hauptmodul-" + std::to_string(level),
                 [level](const Rational& prec) {
                   return level_hauptmodul(level, prec);
                 }};
  cfg.kit.genfun_hauptmodul_label = "hauptmodul-" + std::to_string(level);
  cfg.index_data.holomorphic = {0};
  return cfg;
}

SpaceConfig make_kohnen_config(bool half) {
  SpaceConfig cfg;
  cfg.id = half ? "kohnen-half" : "kohnen-three-half";
  cfg.dual_id = half ? "kohnen-three-half" : "kohnen-half";
  cfg.group_level = 4;
  cfg.weight2 = half ? 1 : 3;
  cfg.support = half ? ExponentSupport::residue_classes(1, 4, {0, 1})
                     : ExponentSupport::residue_classes(1, 4, {0, 3});
  cfg.cusp_widths = {{"0", Rational(4)}, {"1/2", Rational(1)}};
  if (half) {
    cfg.kit.seeds = {SeedRecipe{
        "theta", [](const Rational& prec) { return theta_series(prec); }}};
    cfg.index_data.holomorphic = {0};
  } else {
    cfg.kit.seeds = {SeedRecipe{"theta-cubed", [](const Rational& prec) {
                                  return power(theta_series(prec), 3);
                                }}};
  }
  cfg.kit.ladder = SeedRecipe{"h4", [](const Rational& prec) {
                                return eta_quotient(
                                    EtaQuotientSpec{{{1, 8}, {4, -8}}}, prec);
                              }};
  cfg.kit.extra_cusp_generator =
      SeedRecipe{"w4", [](const Rational& prec) {
                   return eta_quotient(
                       EtaQuotientSpec{{{1, 8}, {2, -24}, {4, 16}}}, prec);
                 }};
  cfg.kit.genfun_hauptmodul_label = "j4z";
  cfg.kit.plus_projection = cfg.support;
  return cfg;
}

const std::map<std::string, SpaceConfig>& registry() {
  static const std::map<std::string, SpaceConfig> table = [] {
    std::map<std::string, SpaceConfig> out;
    for (int k = -14; k <= 16; k += 2) {
      SpaceConfig cfg = make_sl2z_config(k);
      out.emplace(cfg.id, std::move(cfg));
    }
    for (long level : {2L, 3L, 5L, 7L, 13L}) {
      for (int k : {0, 2}) {
        SpaceConfig cfg = make_gamma0_config(level, k);
        out.emplace(cfg.id, std::move(cfg));
      }
    }
    for (bool half : {true, false}) {
      SpaceConfig cfg = make_kohnen_config(half);
      out.emplace(cfg.id, std::move(cfg));
    }
    return out;
  }();
  return table;
}

}  // namespace

std::string to_string(FamilyKind kind) {
  return kind == FamilyKind::F ? "f" : "g";
}

FamilyKind family_kind_from_string(const std::string& text) {
  if (text == "f" || text == "F") return FamilyKind::F;
  if (text == "g" || text == "G") return FamilyKind::G;
  throw UnsupportedSpace("unknown family kind '" + text + "'");
}

const SpaceConfig& space_config(const std::string& id) {
  auto it = registry().find(id);
  if (it == registry().end())
    throw UnsupportedSpace("unknown space '" + id + "'");
  return it->second;
}

std::vector<std::string> space_ids() {
  std::vector<std::string> out;
  for (const auto& [id, cfg] : registry()) out.push_back(id);
  return out;
}

QExpansion resolve_hauptmodul(const std::string& label, const Rational& prec) {
  if (label == "j-744")
    return sub(j_function(prec), QExpansion::constant(744));
  if (label == "j4z") {
    QExpansion j = j_function(prec / 4 + 1);
    return dilate(j, Rational(4)).truncated(PrecBound(prec));
  }
  const std::string prefix = "hauptmodul-";
  if (label.rfind(prefix, 0) == 0) {
    long level = std::strtol(label.c_str() + prefix.size(), nullptr, 10);
    return level_hauptmodul(level, prec);
  }
  throw UnsupportedSpace("unknown Hauptmodul label '" + label + "'");
}

IndexSets::IndexSets(const SpaceConfig& config, const SpaceConfig& dual)
    : support_self_(config.support),
      support_dual_(dual.support),
      I_self_(config.index_data.holomorphic),
      J_self_(config.index_data.cuspidal),
      I_dual_(dual.index_data.holomorphic),
      J_dual_(dual.index_data.cuspidal) {
  if (support_self_.negated() != support_dual_)
    throw InconsistentIndexData("dual support is not the negated support of " +
                                config.id);
  verify_partitions();
}

bool IndexSets::itilde_contains(long long m) const {
  if (J_dual_.count(m)) return false;
  if (m > 0 && support_dual_.contains(to_rational(m))) return true;
  return I_self_.count(-m) > 0;
}

bool IndexSets::jtilde_contains(long long n) const {
  if (I_dual_.count(n)) return false;
  if (n >= 0 && support_dual_.contains(to_rational(n))) return true;
  return J_self_.count(-n) > 0;
}

std::vector<long long> IndexSets::itilde_in(long long lo, long long hi) const {
  std::vector<long long> out;
  for (long long m = lo; m <= hi; ++m)
    if (itilde_contains(m)) out.push_back(m);
  return out;
}

std::vector<long long> IndexSets::jtilde_in(long long lo, long long hi) const {
  std::vector<long long> out;
  for (long long n = lo; n <= hi; ++n)
    if (jtilde_contains(n)) out.push_back(n);
  return out;
}

long long IndexSets::itilde_min() const {
  long long start = I_self_.empty() ? 0 : -*I_self_.rbegin();
  for (long long m = start; m <= start + 64; ++m)
    if (itilde_contains(m)) return m;
  throw InconsistentIndexData("empty pole-order index set");
}

long long IndexSets::jtilde_min() const {
  long long start = J_self_.empty() ? 0 : -*J_self_.rbegin();
  for (long long n = start; n <= start + 64; ++n)
    if (jtilde_contains(n)) return n;
  throw InconsistentIndexData("empty dual index set");
}

void IndexSets::verify_partitions() const {
  // Mirror membership with self/dual roles swapped.
  auto itilde_dual = [&](long long m) {
    if (J_self_.count(m)) return false;
    if (m > 0 && support_self_.contains(to_rational(m))) return true;
    return I_dual_.count(-m) > 0;
  };
  auto jtilde_dual = [&](long long n) {
    if (I_self_.count(n)) return false;
    if (n >= 0 && support_self_.contains(to_rational(n))) return true;
    return J_dual_.count(-n) > 0;
  };
  constexpr long long W = 48;
  // Every lattice exponent is a pole order of exactly one side: the e-th
  // self lead exists iff the dual family has no member of index e, and
  // symmetrically.
  long long den = support_self_.den();
  for (long long num = -W * den; num <= W * den; ++num) {
    Rational e = to_rational(num) / to_rational(den);
    if (!is_integral(e)) continue;  // shipped index sets are integral
    long long ei = to_long_long(e.get_num());
    if (support_self_.contains(e)) {
      if (itilde_contains(-ei) == jtilde_dual(ei))
        throw InconsistentIndexData(
            "index partition fails at exponent " + rational_to_string(e));
    }
    if (support_dual_.contains(e)) {
      if (itilde_dual(-ei) == jtilde_contains(ei))
        throw InconsistentIndexData(
            "dual index partition fails at exponent " + rational_to_string(e));
    }
  }
}

IndexSets index_sets(const SpaceConfig& config) {
  return IndexSets(config, space_config(config.dual_id));
}

std::vector<QExpansion> row_reduce(std::vector<QExpansion> forms) {
  std::map<Rational, QExpansion> pivots;
  for (auto& incoming : forms) {
    QExpansion cur = std::move(incoming);
    while (!cur.is_zero()) {
      Rational lead = *cur.leading_exponent();
      auto it = pivots.find(lead);
      if (it != pivots.end()) {
        cur = add(cur, scalar_mul(-cur.leading_coefficient(), it->second));
        continue;
      }
      cur = scalar_mul(Rational(1) / cur.leading_coefficient(), cur);
      // Clear existing pivot columns from the new row (only exponents above
      // its lead can occur; unknown cells beyond its precision stay).
      for (auto& [pl, prow] : pivots) {
        if (pl < lead || !below_bound(cur.prec(), pl)) continue;
        Rational c = coeff_or_zero(cur, pl);
        if (c != 0) cur = add(cur, scalar_mul(-c, prow));
      }
      // Clear the new pivot column from existing rows.
      for (auto& [pl, prow] : pivots) {
        if (!below_bound(prow.prec(), lead)) continue;
        Rational c = coeff_or_zero(prow, lead);
        if (c != 0) prow = add(prow, scalar_mul(-c, cur));
      }
      pivots.emplace(lead, std::move(cur));
      break;
    }
  }
  std::vector<QExpansion> out;
  out.reserve(pivots.size());
  for (auto& [lead, row] : pivots) out.push_back(std::move(row));
  return out;
}

std::vector<QExpansion> plus_project(const std::vector<QExpansion>& forms,
                                     const ExponentSupport& target) {
  if (forms.empty()) return {};
  const long long n = static_cast<long long>(forms.size());
  long long den = target.den();
  Rational maxpole(0);
  for (const auto& f : forms) {
    den = std::lcm(den, f.den());
    maxpole = std::max(maxpole, f.pole_order());
  }
  long long pole = to_long_long(ceil_rational(maxpole));
  long long hi = pole + n + 10;
  for (const auto& f : forms)
    if (f.prec() && *f.prec() < to_rational(hi))
      throw PrecisionTooLow("projection window reaches exponent " +
                            std::to_string(hi) + " beyond a form's precision");

  // Constraint matrix: one row per off-target lattice exponent in the
  // window, one column per form.
  std::vector<std::vector<Rational>> mat;
  const Rational inv_den = Rational(1) / to_rational(den);
  for (long long num = -pole * den; num < hi * den; ++num) {
    Rational e = to_rational(num) * inv_den;
    if (target.contains(e)) continue;
    std::vector<Rational> row(n);
    bool any = false;
    for (long long c = 0; c < n; ++c) {
      row[c] = coeff_or_zero(forms[c], e);
      if (row[c] != 0) any = true;
    }
    if (any) mat.push_back(std::move(row));
  }

  // Null space by column-ordered Gaussian elimination.
  std::vector<long long> pivot_row_of_col(n, -1);
  long long rank = 0;
  for (long long col = 0; col < n; ++col) {
    long long found = -1;
    for (long long r = rank; r < static_cast<long long>(mat.size()); ++r)
      if (mat[r][col] != 0) {
        found = r;
        break;
      }
    if (found < 0) continue;
    std::swap(mat[rank], mat[found]);
    Rational inv = Rational(1) / mat[rank][col];
    for (auto& x : mat[rank]) x *= inv;
    for (long long r = 0; r < static_cast<long long>(mat.size()); ++r) {
      if (r == rank || mat[r][col] == 0) continue;
      Rational factor = mat[r][col];
      for (long long c2 = 0; c2 < n; ++c2) {
        Rational delta = factor * mat[rank][c2];
        mat[r][c2] -= delta;
      }
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }

  std::vector<QExpansion> out;
  for (long long free_col = 0; free_col < n; ++free_col) {
    if (pivot_row_of_col[free_col] >= 0) continue;
    QExpansion combo = forms[free_col];
    for (long long col = 0; col < n; ++col) {
      if (pivot_row_of_col[col] < 0) continue;
      Rational c = mat[pivot_row_of_col[col]][free_col];
      if (c != 0) combo = add(combo, scalar_mul(-c, forms[col]));
    }
    out.push_back(std::move(combo));
  }
  return out;
}

namespace {

std::vector<QExpansion> ladder_rows(const SpaceConfig& config,
                                    long long itilde_min, long long max_index,
                                    const Rational& prec) {
  if (config.kit.seeds.size() != 1)
    throw InconsistentIndexData("ladder construction expects one seed in " +
                                config.id);
  long long depth = max_index - itilde_min;
  Rational work = prec + to_rational(depth + 6);
  QExpansion seed = config.kit.seeds[0].build(work);
  if (seed.is_zero()) throw ZeroSeries("seed " + config.kit.seeds[0].label);
  if (-*seed.leading_exponent() != to_rational(itilde_min))
    throw InconsistentIndexData("seed lead of " + config.id +
                                " disagrees with its index data");
  QExpansion ladder = config.kit.ladder.build(work);
  std::vector<QExpansion> rows;
  rows.reserve(depth + 1);
  QExpansion cur = seed;
  for (long long i = 0; i <= depth; ++i) {
    rows.push_back(cur);
    if (i < depth) cur = mul(cur, ladder);
  }
  return rows;
}

std::vector<QExpansion> plus_span_rows(const SpaceConfig& config,
                                       long long max_index,
                                       const Rational& prec) {
  const long long R = std::max<long long>(max_index, 0) + 1;
  const long long hi = 4 * R + 11;
  Rational need = std::max(prec, to_rational(hi));
  Rational work = need + to_rational(R + 6);
  QExpansion seed = config.kit.seeds[0].build(work);
  QExpansion ladder = config.kit.ladder.build(work);
  if (!config.kit.extra_cusp_generator)
    throw InconsistentIndexData("plus-space kit of " + config.id +
                                " lacks its second cusp generator");
  QExpansion extra = config.kit.extra_cusp_generator->build(work);
  QExpansion ladder_inv = invert(ladder);

  std::vector<QExpansion> rows;
  rows.reserve(3 * R + 1);
  rows.push_back(seed);
  QExpansion cur = seed;
  for (long long i = 1; i <= R; ++i) {
    cur = mul(cur, ladder);
    rows.push_back(cur);
  }
  cur = seed;
  for (long long i = 1; i <= R; ++i) {
    cur = mul(cur, ladder_inv);
    rows.push_back(cur);
  }
  cur = seed;
  for (long long j = 1; j <= R; ++j) {
    cur = mul(cur, extra);
    rows.push_back(cur);
  }
  return plus_project(rows, *config.kit.plus_projection);
}

}  // namespace

BasisFamily canonical_basis(const SpaceConfig& config, FamilyKind kind,
                            long long max_index, const Rational& prec) {
  if (prec <= 0)
    throw PrecisionTooLow("family precision must be positive");
  IndexSets idx = index_sets(config);

  BasisFamily fam;
  fam.space_id = config.id;
  fam.kind = kind;
  fam.max_index = max_index;
  fam.prec = PrecBound(prec);

  if (kind == FamilyKind::G && config.kit.g_by_derivative) {
    const SpaceConfig& dual = space_config(config.dual_id);
    BasisFamily weight0 = canonical_basis(dual, FamilyKind::F, max_index, prec);
    for (long long n : idx.jtilde_in(idx.jtilde_min(), max_index)) {
      auto it = weight0.members.find(n);
      if (it == weight0.members.end())
        throw LadderGap("derivative source lacks index " + std::to_string(n));
      QExpansion g = scalar_mul(Rational(-1) / to_rational(n), derive(it->second));
      if (-*g.leading_exponent() != to_rational(n))
        throw InconsistentIndexData("derivative member lead mismatch at " +
                                    std::to_string(n));
      fam.members.emplace(n, g.truncated(fam.prec));
    }
    return fam;
  }

  if (kind == FamilyKind::G && config.kit.g_eisenstein_constants) {
    BasisFamily plain = canonical_basis(config, FamilyKind::F, max_index, prec);
    QExpansion e2 = e2_hat(config.group_level, to_rational(max_index + 1));
    for (long long n : idx.jtilde_in(idx.jtilde_min(), max_index)) {
      auto it = plain.members.find(n);
      if (it == plain.members.end())
        throw LadderGap("f-side source lacks index " + std::to_string(n));
      Rational c = coeff_or_zero(e2, to_rational(n));
      fam.members.emplace(
          n, add(it->second, QExpansion::constant(-c)).truncated(fam.prec));
    }
    return fam;
  }

  std::vector<long long> targets =
      kind == FamilyKind::F ? idx.itilde_in(idx.itilde_min(), max_index)
                            : idx.jtilde_in(idx.jtilde_min(), max_index);
  if (targets.empty()) return fam;

  std::vector<QExpansion> rows =
      config.kit.plus_projection
          ? plus_span_rows(config, max_index, prec)
          : ladder_rows(config, idx.itilde_min(), max_index, prec);
  std::vector<QExpansion> reduced = row_reduce(std::move(rows));

  std::map<long long, QExpansion> by_index;
  for (auto& row : reduced) {
    long long m = index_of_lead(row);
    if (!idx.itilde_contains(m))
      throw InconsistentIndexData("pivot at unexpected index " +
                                  std::to_string(m) + " in " + config.id);
    by_index.emplace(m, std::move(row));
  }
  for (long long t : targets) {
    auto it = by_index.find(t);
    if (it == by_index.end())
      throw LadderGap("no member of index " + std::to_string(t) + " in " +
                      config.id);
    QExpansion member = it->second.truncated(fam.prec);
    if (member.prec() && *member.prec() < prec)
      throw PrecisionTooLow("member " + std::to_string(t) +
                            " fell short of the requested precision");
    fam.members.emplace(t, member.with_support(config.support));
  }
  return fam;
}

std::map<long long, Rational> expand_in_basis(const QExpansion& f,
                                              const BasisFamily& family) {
  PrecBound common = f.prec();
  for (const auto& [m, member] : family.members)
    common = min_prec(common, member.prec());

  if (!f.is_zero() &&
      *f.leading_exponent() < to_rational(-family.max_index))
    throw IndexMismatch("pole order exceeds the family window");

  QExpansion residual = f;
  std::map<long long, Rational> out;
  for (auto it = family.members.rbegin(); it != family.members.rend(); ++it) {
    Rational e = to_rational(-it->first);
    if (common && e >= *common)
      throw PrecisionTooLow("cannot read coefficient at exponent " +
                            rational_to_string(e));
    Rational c = coeff_or_zero(residual, e);
    if (c != 0) {
      out[it->first] = c;
      residual = sub(residual, scalar_mul(c, it->second));
    }
  }
  residual = residual.truncated(common);
  if (!residual.is_zero())
    throw ResidualNonzero("expansion residual " +
                          residual.to_display_string(4));
  return out;
}

}  // namespace modgrid
