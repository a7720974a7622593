#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modgrid/generators.hpp"
#include "modgrid/qexpansion.hpp"

namespace modgrid {

enum class FamilyKind { F, G };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& text);

// Named builder for a generator series (theta, Hauptmodul, Eisenstein
// combination, ...). The label is stable and used in cache keys and
// serialized generating expressions.
struct SeedRecipe {
  std::string label;
  std::function<QExpansion(const Rational& prec)> build;
};

// How canonical bases of a space are constructed.
struct GeneratorKit {
  // Echelon ladder seeds (leading forms); one per residue class family.
  std::vector<SeedRecipe> seeds;
  // Weight-0 ladder multiplier with a simple pole at infinity.
  SeedRecipe ladder;
  // Extra weight-0 generator with its pole at the remaining cusp; required
  // by spaces whose members carry poles at three cusps.
  std::optional<SeedRecipe> extra_cusp_generator;
  // Hauptmodul used by generating-function work on this space's grids.
  std::string genfun_hauptmodul_label;
  // Target exponent classes of a plus-space projection.
  std::optional<ExponentSupport> plus_projection;
  // Weight-2 g-families arise as -(1/n) q d/dq of the dual weight-0 family.
  bool g_by_derivative = false;
  // Weight-0 g-families are pinned only modulo constants by row reduction
  // (constants are themselves weight-0 forms); duality against the dual
  // family's Eisenstein row forces the constant of g_n to minus the n-th
  // Eisenstein coefficient.
  bool g_eisenstein_constants = false;
};

// Leading-order data of the holomorphic (I) and cuspidal (J) subspaces.
struct IndexData {
  std::set<long long> holomorphic;
  std::set<long long> cuspidal;
};

// Everything the library knows about one shipped space of weakly
// holomorphic forms: group, doubled weight, exponent support at infinity,
// cusp widths, construction kit, and dimension data.
struct SpaceConfig {
  std::string id;
  std::string dual_id;  // partner with weight2' = 4 - weight2
  long long group_level = 1;
  int weight2 = 0;  // doubled weight
  ExponentSupport support;
  Rational varsigma = Rational(0);
  Rational width_infty = Rational(1);
  std::vector<std::pair<std::string, Rational>> cusp_widths;
  Rational hat_width = Rational(1);
  GeneratorKit kit;
  IndexData index_data;
};

// Registry of shipped configurations; throws UnsupportedSpace for unknown
// ids.
const SpaceConfig& space_config(const std::string& id);
std::vector<std::string> space_ids();

// Builds the named Hauptmodul series used by a kit ("j-744",
// "hauptmodul-<level>", "j4z").
QExpansion resolve_hauptmodul(const std::string& label, const Rational& prec);

// Index sets of a dual pair: the finite I/J data of both sides plus
// membership logic for the extended sets. Construction verifies the two
// finite-window partition identities and throws InconsistentIndexData on
// violation.
class IndexSets {
 public:
  IndexSets(const SpaceConfig& config, const SpaceConfig& dual);

  const std::set<long long>& holomorphic() const { return I_self_; }
  const std::set<long long>& cuspidal() const { return J_self_; }

  // Extended pole-order set of f-type members: all attainable principal
  // exponents of the echelon basis.
  bool itilde_contains(long long m) const;
  // Extended index set of g-type members.
  bool jtilde_contains(long long n) const;

  std::vector<long long> itilde_in(long long lo, long long hi) const;
  std::vector<long long> jtilde_in(long long lo, long long hi) const;

  long long itilde_min() const;
  long long jtilde_min() const;

 private:
  void verify_partitions() const;

  ExponentSupport support_self_;
  ExponentSupport support_dual_;
  std::set<long long> I_self_, J_self_, I_dual_, J_dual_;
};

IndexSets index_sets(const SpaceConfig& config);

// A canonical (row-reduced) family of forms: member with index i has
// leading term q^{-i} and zero coefficients at every other member's leading
// exponent.
struct BasisFamily {
  std::string space_id;
  FamilyKind kind = FamilyKind::F;
  long long max_index = 0;
  PrecBound prec;
  std::map<long long, QExpansion> members;
};

// Builds the canonical family with indices up to max_index, coefficients
// exact below prec. Throws LadderGap / InconsistentIndexData when the
// constructed pivots disagree with the configured index data, and
// PrecisionTooLow when prec is too small to row-reduce the window.
BasisFamily canonical_basis(const SpaceConfig& config, FamilyKind kind,
                            long long max_index, const Rational& prec);

// Writes f as a finite combination of family members by principal-part
// elimination; throws ResidualNonzero if a nonzero remainder survives below
// the common precision, IndexMismatch when f's poles exceed the family.
std::map<long long, Rational> expand_in_basis(const QExpansion& f,
                                              const BasisFamily& family);

// Kernel of the off-support coefficient functionals over the span: returns
// a spanning set (not yet reduced) of the projected space. The constraint
// window is pole bound + #forms + a fixed margin; inputs must carry that
// much precision (PrecisionTooLow otherwise).
std::vector<QExpansion> plus_project(const std::vector<QExpansion>& forms,
                                     const ExponentSupport& target);

// Sparse reduced row echelon form by ascending leading exponent; rows that
// vanish identically are dropped. Pivot coefficients are normalized to 1
// and cleared from every other row.
std::vector<QExpansion> row_reduce(std::vector<QExpansion> forms);

}  // namespace modgrid
