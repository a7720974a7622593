#pragma once

#include <iosfwd>
#include <string>

#include "modgrid/spaces.hpp"

namespace modgrid {

// One fully resolved invocation. Field defaults are placeholders meaning
// "not given"; run() derives sensible values from the window and space.
struct JobConfig {
  std::string command;           // basis | grid | genfun | hecke | pair | table
  std::string space;             // space identifier, e.g. "kohnen-half"
  std::string kind = "f";        // family side for basis/hecke/table
  long long index = -1;          // member index for basis/hecke/pair
  long long dual_index = -1;     // column index for pair
  long long window_m = -1;       // grid/genfun/table window, rows
  long long window_n = -1;       // grid/genfun/table window, columns
  long long hecke_m = -1;        // Hecke operator index
  long long prec = -1;           // requested q-precision (integer exponent)
  std::string format = "json";   // json | csv | pretty
  std::string cache_dir;         // empty: $MODGRID_CACHE or .modgrid-cache
};

// Stable cache key for a basis-family request; depends on the space id,
// family side, maximal index, precision, and library version.
std::string basis_cache_key(const std::string& space_id, FamilyKind kind,
                            long long max_index, const Rational& prec);

// canonical_basis with a disk cache in front: hit -> verify checksum and
// reload; corrupt or stale entries are evicted and recomputed. Writes go
// through a temp file and an atomic rename.
BasisFamily cached_basis(const SpaceConfig& config, FamilyKind kind,
                         long long max_index, const Rational& prec,
                         const std::string& cache_dir);

// Executes a job, writing the result to `out` and diagnostics to `err`.
// Returns the process exit code: 0 success, 2 configuration error,
// 3 mathematical invariant violation, 4 precision shortfall.
int run(const JobConfig& job, std::ostream& out, std::ostream& err);

}  // namespace modgrid
