#include "modgrid/grid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "modgrid/errors.hpp"
#include "modgrid/serialize.hpp"

namespace modgrid {

namespace {

Rational coeff_or_zero(const QExpansion& a, const Rational& exponent) {
  Rational scaled = exponent * to_rational(a.den());
  if (!is_integral(scaled)) return Rational(0);
  auto it = a.terms().find(to_long_long(scaled.get_num()));
  return it == a.terms().end() ? Rational(0) : it->second;
}

// Reads a coefficient that duality verification relies on; unknown cells
// are a caller error, not a silent zero.
Rational checked_coeff(const QExpansion& a, long long exponent,
                       const char* side) {
  if (!below_prec(to_rational(exponent), a.prec()))
    throw PrecisionTooLow(std::string(side) +
                          " member precision does not reach exponent " +
                          std::to_string(exponent));
  return coeff_or_zero(a, to_rational(exponent));
}

void verify_duality(const BasisFamily& f_family, const BasisFamily& g_family,
                    std::map<std::pair<long long, long long>, Rational>&
                        a_matrix) {
  for (const auto& [m, f] : f_family.members) {
    for (const auto& [n, g] : g_family.members) {
      Rational a = checked_coeff(f, n, "f-side");
      Rational b = checked_coeff(g, m, "g-side");
      Rational s = a + b;
      if (s != 0)
        throw DualityViolation("a(" + std::to_string(m) + "," +
                               std::to_string(n) + ") + b(" +
                               std::to_string(n) + "," + std::to_string(m) +
                               ") = " + rational_to_string(s));
      a_matrix[{m, n}] = a;
    }
  }
}

}  // namespace

ModularGrid build_grid(const SpaceConfig& config, long long max_m,
                       long long max_n, const Rational& min_precision) {
  const SpaceConfig& dual = space_config(config.dual_id);
  Rational f_prec = std::max(min_precision, to_rational(max_n + 1));
  Rational g_prec = std::max(min_precision, to_rational(max_m + 1));
  return grid_from_families(
      canonical_basis(config, FamilyKind::F, max_m, f_prec),
      canonical_basis(dual, FamilyKind::G, max_n, g_prec));
}

ModularGrid grid_from_families(BasisFamily f_family, BasisFamily g_family) {
  const SpaceConfig& config = space_config(f_family.space_id);
  if (config.dual_id != g_family.space_id)
    throw IndexMismatch("g-family lives on " + g_family.space_id +
                        ", expected " + config.dual_id);
  if (f_family.kind != FamilyKind::F || g_family.kind != FamilyKind::G)
    throw IndexMismatch("grid sides must be an f-family and a g-family");

  ModularGrid grid;
  grid.space_id = f_family.space_id;
  grid.dual_space_id = g_family.space_id;
  grid.max_m = f_family.max_index;
  grid.max_n = g_family.max_index;
  grid.f_family = std::move(f_family);
  grid.g_family = std::move(g_family);
  verify_duality(grid.f_family, grid.g_family, grid.a_matrix);
  return grid;
}

ModularGrid combine(const std::vector<ModularGrid>& grids,
                    const std::vector<Rational>& scalars) {
  if (grids.empty() || grids.size() != scalars.size())
    throw IndexMismatch("combine needs one scalar per grid");
  const ModularGrid& first = grids.front();
  for (const ModularGrid& g : grids)
    if (g.space_id != first.space_id ||
        g.dual_space_id != first.dual_space_id)
      throw IndexMismatch("grids over different spaces cannot be combined");

  ModularGrid out;
  out.space_id = first.space_id;
  out.dual_space_id = first.dual_space_id;
  out.f_family.space_id = first.space_id;
  out.f_family.kind = FamilyKind::F;
  out.g_family.space_id = first.dual_space_id;
  out.g_family.kind = FamilyKind::G;

  auto combine_side = [&](auto member_of, BasisFamily& target) {
    PrecBound prec;
    std::set<long long> keys;
    long long max_index = 0;
    for (const ModularGrid& g : grids) {
      const BasisFamily& fam = member_of(g);
      prec = min_prec(prec, fam.prec);
      max_index = std::max(max_index, fam.max_index);
      for (const auto& [k, unused] : fam.members) keys.insert(k);
    }
    target.prec = prec;
    target.max_index = max_index;
    for (long long k : keys) {
      QExpansion sum;
      for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& members = member_of(grids[i]).members;
        auto it = members.find(k);
        if (it != members.end())
          sum = add(sum, scalar_mul(scalars[i], it->second));
      }
      // A combination may cancel a member to zero; a zero series is not a
      // family member (it has no leading term), so its row disappears.
      if (sum.is_zero()) continue;
      target.members.emplace(k, std::move(sum));
    }
  };
  combine_side([](const ModularGrid& g) -> const BasisFamily& {
                 return g.f_family;
               },
               out.f_family);
  combine_side([](const ModularGrid& g) -> const BasisFamily& {
                 return g.g_family;
               },
               out.g_family);

  for (const ModularGrid& g : grids) {
    out.max_m = std::max(out.max_m, g.max_m);
    out.max_n = std::max(out.max_n, g.max_n);
  }
  verify_duality(out.f_family, out.g_family, out.a_matrix);
  return out;
}

ModularGrid eisenstein_constant_grid(long level, long long max_m,
                                     const Rational& min_precision) {
  const SpaceConfig& config =
      space_config("gamma0-" + std::to_string(level) + "-k0");
  const SpaceConfig& dual = space_config(config.dual_id);
  Rational prec = std::max(min_precision, to_rational(max_m + 1));
  QExpansion e2 = e2_hat(level, prec);

  ModularGrid grid;
  grid.space_id = config.id;
  grid.dual_space_id = dual.id;
  grid.max_m = max_m;
  grid.max_n = 0;

  grid.f_family.space_id = config.id;
  grid.f_family.kind = FamilyKind::F;
  grid.f_family.max_index = max_m;
  for (long long m = 0; m <= max_m; ++m) {
    Rational c = checked_coeff(e2, m, "Eisenstein");
    grid.f_family.members.emplace(m, QExpansion::constant(c));
  }

  grid.g_family.space_id = dual.id;
  grid.g_family.kind = FamilyKind::G;
  grid.g_family.max_index = 0;
  grid.g_family.prec = e2.prec();
  grid.g_family.members.emplace(0, negate(e2));

  verify_duality(grid.f_family, grid.g_family, grid.a_matrix);
  return grid;
}

QExpansion hecke(const QExpansion& f, long long M, int weight2,
                 const SpaceConfig& config) {
  if (M < 1) throw ConfigError("Hecke index must be positive");
  if (weight2 % 4 != 0)
    throw UnsupportedSpace(
        "Hecke transform requires an even integer weight (doubled weight "
        "divisible by 4)");
  if (!config.support.is_full_lattice() || config.support.den() != 1)
    throw UnsupportedSpace("Hecke transform requires integer exponents");
  if (f.den() != 1)
    throw UnsupportedSpace("input lattice is finer than the config support");
  if (std::gcd(M, config.group_level) != 1)
    throw LevelConflict("Hecke index " + std::to_string(M) +
                        " shares a factor with level " +
                        std::to_string(config.group_level));

  const long e_d = weight2 / 4;       // k/2
  const long e_md = 1 - weight2 / 4;  // 1 - k/2
  PrecBound out_prec =
      f.prec() ? PrecBound(*f.prec() / to_rational(M)) : std::nullopt;

  std::map<long long, Rational> out_terms;
  for (const auto& [e, a] : f.terms()) {
    for (long long d = 1; d <= M; ++d) {
      if (M % d != 0) continue;
      // contribution of a(e) to b(n) with e = M n / d^2 requires d | n
      long long num = e * d * d;
      if (num % M != 0) continue;
      long long n = num / M;
      if (n % d != 0) continue;
      Rational factor = rational_pow(to_rational(d), e_d) *
                        rational_pow(to_rational(M) / to_rational(d), e_md);
      Rational delta = factor * a;
      out_terms[n] += delta;
    }
  }
  for (auto it = out_terms.begin(); it != out_terms.end();)
    it = it->second == 0 ? out_terms.erase(it) : std::next(it);
  return QExpansion(ExponentSupport::integers(), std::move(out_terms),
                    out_prec);
}

bool hecke_symmetry_check(const ModularGrid& grid, long long M) {
  const SpaceConfig& fc = space_config(grid.space_id);
  const SpaceConfig& dual = space_config(grid.dual_space_id);
  const SpaceConfig& positive_side =
      fc.weight2 >= dual.weight2 ? fc : dual;
  if (!positive_side.index_data.cuspidal.empty())
    throw UnsupportedSpace(
        "two-sided Hecke symmetry needs a trivial cusp subspace on the "
        "positive-weight side");
  if (fc.weight2 % 4 != 0 || dual.weight2 % 4 != 0)
    throw UnsupportedSpace("two-sided Hecke symmetry needs even weights");
  if (std::gcd(M, fc.group_level) != 1)
    throw LevelConflict("Hecke index shares a factor with the level");
  if (!grid.f_family.prec)
    throw WindowTooSmall("grid families must carry a finite precision");

  IndexSets idx = index_sets(fc);
  const Rational P = *grid.f_family.prec;
  const Rational sound_prec = P / to_rational(M);

  // Rows whose transform stays inside the computed window.
  std::vector<long long> rows;
  for (const auto& [m, unused] : grid.f_family.members)
    if (to_rational(M) * to_rational(m) <= to_rational(grid.max_m))
      rows.push_back(m);
  if (rows.empty())
    throw WindowTooSmall("no grid row survives the Hecke index " +
                         std::to_string(M));

  const long long n_lo = -grid.max_m - 1;
  if (!(to_rational(n_lo) < sound_prec))
    throw WindowTooSmall("no sound column for Hecke index " +
                         std::to_string(M));

  const long e_d = (4 - fc.weight2) / 4;  // dual k/2
  const long e_md = 1 - e_d;

  auto row_coeff = [&](long long m_prime, long long n) -> Rational {
    auto it = grid.f_family.members.find(m_prime);
    if (it != grid.f_family.members.end())
      return coeff_or_zero(it->second, to_rational(n));
    if (!idx.itilde_contains(m_prime)) return Rational(0);
    throw WindowTooSmall("transform reaches row " + std::to_string(m_prime) +
                         " outside the grid");
  };

  for (long long m : rows) {
    QExpansion transformed =
        hecke(grid.f_family.members.at(m), M, fc.weight2, fc);
    long long g = std::gcd(std::llabs(m), M);  // gcd(0, M) == M
    for (long long n = n_lo; to_rational(n) < sound_prec; ++n) {
      Rational q_side = coeff_or_zero(transformed, to_rational(n));
      Rational p_side(0);
      for (long long d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        Rational factor = rational_pow(to_rational(d), e_d) *
                          rational_pow(to_rational(M) / to_rational(d), e_md);
        long long m_prime = M * m / (d * d);
        Rational contrib = factor * row_coeff(m_prime, n);
        p_side += contrib;
      }
      if (q_side != p_side) return false;
    }
  }
  return true;
}

nlohmann::ordered_json grid_to_json(const ModularGrid& grid) {
  nlohmann::ordered_json j;
  j["f_space"] = grid.space_id;
  j["g_space"] = grid.dual_space_id;
  j["window"] = {grid.max_m, grid.max_n};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& [m, unused] : grid.f_family.members) rows.push_back(m);
  for (const auto& [n, unused] : grid.g_family.members) cols.push_back(n);
  nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
  for (const auto& [m, unused_f] : grid.f_family.members) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& [n, unused_g] : grid.g_family.members) {
      auto it = grid.a_matrix.find({m, n});
      row.push_back(it == grid.a_matrix.end() ? "0"
                                              : rational_to_string(it->second));
    }
    matrix.push_back(std::move(row));
  }
  j["row_indices"] = std::move(rows);
  j["col_indices"] = std::move(cols);
  j["matrix"] = std::move(matrix);
  return j;
}

std::string grid_to_csv(const ModularGrid& grid) {
  std::ostringstream out;
  out << "m";
  for (const auto& [n, unused] : grid.g_family.members) out << "," << n;
  out << "\n";
  for (const auto& [m, unused_f] : grid.f_family.members) {
    out << m;
    for (const auto& [n, unused_g] : grid.g_family.members) {
      auto it = grid.a_matrix.find({m, n});
      out << ","
          << (it == grid.a_matrix.end() ? std::string("0")
                                        : rational_to_string(it->second));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace modgrid
