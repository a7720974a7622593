#include "modgrid/support.hpp"

#include <limits>
#include <numeric>

#include "modgrid/errors.hpp"

namespace modgrid {

namespace {

long long checked_mul(long long a, long long b) {
  __int128 p = static_cast<__int128>(a) * b;
  if (p > std::numeric_limits<long long>::max() ||
      p < std::numeric_limits<long long>::min())
    throw IncompatibleSupport("exponent lattice overflow");
  return static_cast<long long>(p);
}

long long checked_lcm(long long a, long long b) {
  return checked_mul(a / std::gcd(a, b), b);
}

long long pos_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

ExponentSupport ExponentSupport::integers() { return ExponentSupport(); }

ExponentSupport ExponentSupport::lattice(long long den) {
  return residue_classes(den, 1, {0});
}

ExponentSupport ExponentSupport::residue_classes(long long den,
                                                 long long modulus,
                                                 std::set<long long> residues) {
  if (den <= 0) throw ConfigError("support denominator must be positive");
  if (modulus <= 0) throw ConfigError("support modulus must be positive");
  if (residues.empty()) throw ConfigError("support needs at least one class");
  ExponentSupport s;
  s.den_ = den;
  s.modulus_ = modulus;
  s.residues_.clear();
  for (long long r : residues) s.residues_.insert(pos_mod(r, modulus));
  s.canonicalize();
  return s;
}

void ExponentSupport::canonicalize() {
  // All classes present collapses to the full lattice.
  if (static_cast<long long>(residues_.size()) == modulus_) {
    modulus_ = 1;
    residues_ = {0};
  }
  // Reduce modulus to the smallest period of the residue pattern.
  for (long long p = 1; p < modulus_; ++p) {
    if (modulus_ % p != 0) continue;
    bool periodic = true;
    for (long long r : residues_) {
      if (!residues_.count(pos_mod(r + p, modulus_))) {
        periodic = false;
        break;
      }
    }
    if (periodic) {
      std::set<long long> reduced;
      for (long long r : residues_) reduced.insert(pos_mod(r, p));
      modulus_ = p;
      residues_ = std::move(reduced);
      break;
    }
  }
  // Divide out the common factor of den, modulus, and residues: the set
  // {a/den : a == r (mod m)} with g | gcd(den, m, all r) equals the same set
  // on the coarser lattice.
  long long g = std::gcd(den_, modulus_);
  for (long long r : residues_) {
    g = std::gcd(g, r);
    if (g == 1) break;
  }
  if (g > 1) {
    std::set<long long> reduced;
    for (long long r : residues_) reduced.insert(r / g);
    den_ /= g;
    modulus_ /= g;
    residues_ = std::move(reduced);
  }
}

bool ExponentSupport::contains(const Rational& exponent) const {
  Rational scaled = exponent * to_rational(den_);
  if (!is_integral(scaled)) return false;
  Integer a(scaled.get_num());
  Integer r = a % to_integer(modulus_);
  if (r < 0) r += to_integer(modulus_);
  return residues_.count(to_long_long(r)) != 0;
}

ExponentSupport ExponentSupport::negated() const {
  ExponentSupport s;
  s.den_ = den_;
  s.modulus_ = modulus_;
  s.residues_.clear();
  for (long long r : residues_) s.residues_.insert(pos_mod(-r, modulus_));
  s.canonicalize();
  return s;
}

ExponentSupport ExponentSupport::dilated(const Rational& factor) const {
  if (factor <= 0) throw ConfigError("dilation factor must be positive");
  long long u = to_long_long(Integer(factor.get_num()));
  long long v = to_long_long(Integer(factor.get_den()));
  // a/den -> a*u/(den*v): classes scale to r*u mod m*u.
  ExponentSupport s;
  s.den_ = checked_mul(den_, v);
  s.modulus_ = checked_mul(modulus_, u);
  s.residues_.clear();
  for (long long r : residues_) s.residues_.insert(checked_mul(r, u));
  s.canonicalize();
  return s;
}

bool support_member(const ExponentSupport& support, const Rational& exponent) {
  return support.contains(exponent);
}

namespace {

// Rescales (modulus, residues) data from lattice 1/den onto 1/target_den.
struct ScaledClasses {
  long long modulus;
  std::set<long long> residues;
};

ScaledClasses rescale(const ExponentSupport& s, long long target_den) {
  long long f = target_den / s.den();
  ScaledClasses out;
  out.modulus = checked_mul(s.modulus(), f);
  for (long long r : s.residues()) out.residues.insert(checked_mul(r, f));
  return out;
}

}  // namespace

ExponentSupport unite(const ExponentSupport& a, const ExponentSupport& b) {
  if (a == b) return a;
  long long den = checked_lcm(a.den(), b.den());
  ScaledClasses ca = rescale(a, den), cb = rescale(b, den);
  long long m = checked_lcm(ca.modulus, cb.modulus);
  std::set<long long> residues;
  for (long long r : ca.residues)
    for (long long k = r; k < m; k += ca.modulus) residues.insert(k);
  for (long long r : cb.residues)
    for (long long k = r; k < m; k += cb.modulus) residues.insert(k);
  return ExponentSupport::residue_classes(den, m, std::move(residues));
}

ExponentSupport sumset(const ExponentSupport& a, const ExponentSupport& b) {
  long long den = checked_lcm(a.den(), b.den());
  ScaledClasses ca = rescale(a, den), cb = rescale(b, den);
  // {x + y : x == r1 (m1), y == r2 (m2)} = r1 + r2 (mod gcd(m1, m2)).
  long long m = std::gcd(ca.modulus, cb.modulus);
  std::set<long long> residues;
  for (long long r1 : ca.residues)
    for (long long r2 : cb.residues) residues.insert(((r1 + r2) % m + m) % m);
  return ExponentSupport::residue_classes(den, m, std::move(residues));
}

}  // namespace modgrid
