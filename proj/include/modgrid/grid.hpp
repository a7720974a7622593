#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modgrid/spaces.hpp"

namespace modgrid {

// A dual pair of canonical families together with the coefficient matrix
// a(m, n) = coefficient of q^n in f_m. The defining property, verified at
// construction: the coefficient of q^m in g_n equals -a(m, n).
struct ModularGrid {
  std::string space_id;       // f-side configuration
  std::string dual_space_id;  // g-side configuration
  long long max_m = 0;
  long long max_n = 0;
  BasisFamily f_family;
  BasisFamily g_family;
  std::map<std::pair<long long, long long>, Rational> a_matrix;
};

// Builds both families, populates a(m, n) over the index window
// [min, max_m] x [min, max_n], and verifies the duality identity for every
// populated cell (DualityViolation on failure — unreachable unless an
// upstream construction is wrong). Families are built to at least the
// precision the window requires; min_prec raises that floor.
ModularGrid build_grid(const SpaceConfig& config, long long max_m,
                       long long max_n, const Rational& min_precision);

// Assembles a grid from prebuilt families (f-type on a config, g-type on
// its dual), verifying duality on every populated cell.
ModularGrid grid_from_families(BasisFamily f_family, BasisFamily g_family);

// Memberwise linear combination of grids over the same dual pair of spaces;
// members missing from one input are treated as zero. Duality is
// re-verified on the union window.
ModularGrid combine(const std::vector<ModularGrid>& grids,
                    const std::vector<Rational>& scalars);

// The level-l Eisenstein grid: f_m is the constant c(m) (the q^m
// coefficient of the weight-2 Eisenstein combination for the level) and the
// single dual member g_0 is its negative.
ModularGrid eisenstein_constant_grid(long level, long long max_m,
                                     const Rational& min_precision);

// Coefficient-level Hecke transform T_M at the config's weight: the output
// coefficient at n is sum over d | gcd(n, M) of
// d^(k/2) (M/d)^(1-k/2) a(M n / d^2), with gcd(0, M) = M. Output precision
// is f.prec / M (every reported coefficient needs a(M n)). Requires an
// integer-exponent config with doubled weight divisible by 4
// (UnsupportedSpace) and gcd(M, level) = 1 (LevelConflict).
QExpansion hecke(const QExpansion& f, long long M, int weight2,
                 const SpaceConfig& config);

// Two-sided Hecke symmetry: applies T_M rowwise at the f-side weight and
// columnwise (on the bivariate coefficient array) at the dual weight, then
// compares the arrays cell by cell on the sound sub-window, principal cells
// included. Throws WindowTooSmall when the sound sub-window is empty.
bool hecke_symmetry_check(const ModularGrid& grid, long long M);

nlohmann::ordered_json grid_to_json(const ModularGrid& grid);
std::string grid_to_csv(const ModularGrid& grid);

}  // namespace modgrid
