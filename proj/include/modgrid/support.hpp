#pragma once

#include <set>

#include "modgrid/rational.hpp"

namespace modgrid {

// Admissible exponent set of a q-expansion: a finite union of residue
// classes on the lattice (1/den)Z,
//
//   { a / den : a == r (mod modulus), r in residues }.
//
// Always held in canonical form: residues reduced mod modulus, the common
// factor of (den, modulus, residues) divided out, and the modulus reduced to
// the smallest period of the residue set. The full lattice is
// (den, modulus=1, residues={0}).
class ExponentSupport {
 public:
  // Full integer lattice Z.
  ExponentSupport() = default;

  static ExponentSupport integers();
  static ExponentSupport lattice(long long den);
  static ExponentSupport residue_classes(long long den, long long modulus,
                                         std::set<long long> residues);

  long long den() const noexcept { return den_; }
  long long modulus() const noexcept { return modulus_; }
  const std::set<long long>& residues() const noexcept { return residues_; }

  bool is_full_lattice() const noexcept { return modulus_ == 1; }

  bool contains(const Rational& exponent) const;

  // Support of f(q) -> f with exponents negated.
  ExponentSupport negated() const;

  // Support after exponent scaling by factor > 0.
  ExponentSupport dilated(const Rational& factor) const;

  bool operator==(const ExponentSupport& other) const = default;

 private:
  void canonicalize();

  long long den_ = 1;
  long long modulus_ = 1;
  std::set<long long> residues_{0};
};

// Free-function membership predicate.
bool support_member(const ExponentSupport& support, const Rational& exponent);

// Smallest canonical support containing both operands (used by add).
// Throws IncompatibleSupport if the merged lattice would overflow.
ExponentSupport unite(const ExponentSupport& a, const ExponentSupport& b);

// Support of pairwise exponent sums (used by mul). Sum of two residue
// classes mod m1, m2 is a class mod gcd of the scaled moduli, so the result
// is always representable.
ExponentSupport sumset(const ExponentSupport& a, const ExponentSupport& b);

}  // namespace modgrid
