#include "modgrid/qexpansion.hpp"

#include <numeric>
#include <sstream>

#include "modgrid/errors.hpp"

namespace modgrid {

namespace {

Rational key_exponent(long long key, long long den) {
  Rational e(to_integer(key), to_integer(den));
  e.canonicalize();
  return e;
}

// Exponent numerator of e on the lattice 1/den; nullopt if off-lattice.
std::optional<long long> key_for(const Rational& e, long long den) {
  Rational scaled = e * to_rational(den);
  if (!is_integral(scaled)) return std::nullopt;
  return to_long_long(Integer(scaled.get_num()));
}

// Terms of a re-keyed onto lattice 1/new_den (a multiple of a's lattice).
std::map<long long, Rational> rekey(const QExpansion& a, long long new_den) {
  if (new_den % a.den() != 0)
    throw IncompatibleSupport("cannot rebase terms onto a coarser lattice");
  std::map<long long, Rational> out;
  long long f = new_den / a.den();
  for (const auto& [key, c] : a.terms()) out.emplace(key * f, c);
  return out;
}

}  // namespace

QExpansion QExpansion::zero(ExponentSupport support, PrecBound prec) {
  QExpansion out;
  out.support_ = std::move(support);
  out.prec_ = std::move(prec);
  return out;
}

QExpansion QExpansion::constant(const Rational& value) {
  QExpansion out;
  if (value != 0) out.terms_[0] = value;
  return out;
}

QExpansion QExpansion::monomial(const Rational& coefficient,
                                const Rational& exponent) {
  QExpansion out;
  long long den = to_long_long(Integer(exponent.get_den()));
  out.support_ = ExponentSupport::lattice(den);
  if (coefficient != 0) {
    auto key = key_for(exponent, out.den());
    out.terms_[*key] = coefficient;
  }
  return out;
}

QExpansion::QExpansion(ExponentSupport support,
                       std::map<long long, Rational> terms, PrecBound prec)
    : support_(std::move(support)), prec_(std::move(prec)) {
  for (auto& [key, c] : terms) {
    if (c == 0) continue;
    Rational e = key_exponent(key, den());
    if (!support_.contains(e))
      throw IncompatibleSupport("term exponent " + rational_to_string(e) +
                                " outside declared support");
    if (!below_prec(e, prec_)) continue;
    terms_.emplace(key, std::move(c));
  }
}

std::optional<Rational> QExpansion::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return key_exponent(terms_.begin()->first, den());
}

const Rational& QExpansion::leading_coefficient() const {
  if (terms_.empty()) throw ZeroSeries("leading coefficient of zero series");
  return terms_.begin()->second;
}

Rational QExpansion::pole_order() const {
  auto lead = leading_exponent();
  if (!lead || *lead >= 0) return Rational(0);
  return -*lead;
}

Rational QExpansion::coefficient(const Rational& exponent) const {
  if (!below_prec(exponent, prec_))
    throw BeyondPrecision("coefficient at " + rational_to_string(exponent) +
                          " is beyond the precision bound");
  auto key = key_for(exponent, den());
  if (!key) return Rational(0);
  auto it = terms_.find(*key);
  return it == terms_.end() ? Rational(0) : it->second;
}

QExpansion QExpansion::truncated(const PrecBound& new_prec) const {
  QExpansion out;
  out.support_ = support_;
  out.prec_ = min_prec(prec_, new_prec);
  for (const auto& [key, c] : terms_) {
    if (!below_prec(key_exponent(key, den()), out.prec_)) break;
    out.terms_.emplace(key, c);
  }
  return out;
}

QExpansion QExpansion::with_support(const ExponentSupport& support) const {
  return QExpansion(support, rekey(*this, support.den()), prec_);
}

std::string QExpansion::to_display_string(std::size_t max_terms) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  std::size_t shown = 0;
  for (const auto& [key, c] : terms_) {
    if (shown == max_terms) {
      out << " + ...";
      break;
    }
    if (shown > 0) out << (c > 0 ? " + " : " - ");
    else if (c < 0) out << "-";
    Rational mag = abs(c);
    Rational e = key_exponent(key, den());
    if (e == 0) {
      out << rational_to_string(mag);
    } else {
      if (mag != 1) out << rational_to_string(mag) << "*";
      out << "q";
      if (e != 1) out << "^" << rational_to_string(e);
    }
    ++shown;
  }
  return out.str();
}

QExpansion add(const QExpansion& a, const QExpansion& b) {
  ExponentSupport support = unite(a.support(), b.support());
  QExpansion out;
  out.support_ = support;
  out.prec_ = min_prec(a.prec(), b.prec());
  // Work on the common refinement; the canonical union lattice may be
  // coarser, so keys are scaled back down at the end (always exact).
  long long work_den = std::lcm(a.den(), b.den());
  long long shrink = work_den / support.den();
  auto ta = rekey(a, work_den);
  auto tb = rekey(b, work_den);
  for (const auto& [key, c] : tb) {
    auto [it, inserted] = ta.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) ta.erase(it);
    }
  }
  for (auto& [key, c] : ta) {
    if (c == 0) continue;
    if (!below_prec(key_exponent(key, work_den), out.prec_)) continue;
    out.terms_.emplace(key / shrink, std::move(c));
  }
  return out;
}

QExpansion sub(const QExpansion& a, const QExpansion& b) {
  return add(a, negate(b));
}

QExpansion negate(const QExpansion& a) {
  return scalar_mul(Rational(-1), a);
}

QExpansion scalar_mul(const Rational& scalar, const QExpansion& a) {
  if (scalar == 0) return QExpansion::zero(a.support(), a.prec());
  std::map<long long, Rational> terms;
  for (const auto& [key, c] : a.terms()) terms.emplace(key, scalar * c);
  return QExpansion(a.support(), std::move(terms), a.prec());
}

QExpansion mul(const QExpansion& a, const QExpansion& b) {
  ExponentSupport support = sumset(a.support(), b.support());
  QExpansion out;
  out.support_ = support;

  // Leading exponent of an empty factor is read as its precision bound: a
  // series that is zero below p contributes nothing below p + lead(other).
  auto lead_or_prec = [](const QExpansion& x) -> PrecBound {
    auto lead = x.leading_exponent();
    if (lead) return *lead;
    return x.prec();
  };
  PrecBound la = lead_or_prec(a), lb = lead_or_prec(b);
  PrecBound pa = la && b.prec() ? PrecBound(*b.prec() + *la) : std::nullopt;
  PrecBound pb = lb && a.prec() ? PrecBound(*a.prec() + *lb) : std::nullopt;
  out.prec_ = min_prec(pa, pb);

  long long work_den = std::lcm(a.den(), b.den());
  long long shrink = work_den / support.den();
  auto ta = rekey(a, work_den);
  auto tb = rekey(b, work_den);
  std::optional<long long> bound_key;
  if (out.prec_) {
    // Smallest working-lattice key at or above the bound.
    Rational scaled = *out.prec_ * to_rational(work_den);
    Integer ceiling;
    mpz_cdiv_q(ceiling.get_mpz_t(), scaled.get_num_mpz_t(),
               scaled.get_den_mpz_t());
    bound_key = to_long_long(ceiling);
  }
  std::map<long long, Rational> terms;
  for (const auto& [ka, ca] : ta) {
    for (const auto& [kb, cb] : tb) {
      long long key = ka + kb;
      if (bound_key && key >= *bound_key) break;
      auto [it, inserted] = terms.emplace(key, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  for (auto& [key, c] : terms)
    if (c != 0) out.terms_.emplace(key / shrink, std::move(c));
  return out;
}

QExpansion invert(const QExpansion& a, PrecBound prec_cap) {
  if (a.is_zero()) throw ZeroSeries("invert of zero series");

  long long den = a.den();
  long long lead_key = a.terms().begin()->first;
  Rational lead_exp = key_exponent(lead_key, den);
  const Rational& lead_coeff = a.leading_coefficient();

  // Sound output bound: the inverse coefficient at -lead + t needs input
  // coefficients through lead + t, so out.prec = a.prec - 2*lead. Exact
  // monomials invert exactly; other exact inputs are capped.
  PrecBound natural;
  if (a.prec()) {
    natural = *a.prec() - 2 * lead_exp;
  } else if (a.term_count() == 1) {
    natural = std::nullopt;
  } else {
    natural = -lead_exp + to_rational(default_invert_window);
  }
  PrecBound out_prec = min_prec(natural, prec_cap);

  std::map<long long, Rational> out_terms;
  if (a.term_count() == 1) {
    if (below_prec(-lead_exp, out_prec))
      out_terms[-lead_key] = Rational(1) / lead_coeff;
    return QExpansion(ExponentSupport::lattice(den), std::move(out_terms),
                      out_prec);
  }

  // Ascending long division on normalized u = a / (c q^e): u0 = 1.
  // v(t) = -sum_{0<s<=t} u(s) v(t-s), inverse = (1/c) q^{-e} v.
  long long t_max;
  {
    // largest t with (-lead + t/den) < out_prec
    Rational scaled = (*out_prec + lead_exp) * to_rational(den);
    Integer ceiling;
    mpz_cdiv_q(ceiling.get_mpz_t(), scaled.get_num_mpz_t(),
               scaled.get_den_mpz_t());
    t_max = to_long_long(ceiling) - 1;
  }
  std::map<long long, Rational> u;  // normalized tail offsets, u[0] == 1
  for (const auto& [key, c] : a.terms())
    if (key != lead_key) u.emplace(key - lead_key, c / lead_coeff);

  std::map<long long, Rational> v;
  v[0] = Rational(1);
  for (long long t = 1; t <= t_max; ++t) {
    Rational acc(0);
    for (const auto& [s, us] : u) {
      if (s > t) break;
      auto it = v.find(t - s);
      if (it != v.end()) acc += us * it->second;
    }
    if (acc != 0) v[t] = -acc;
  }
  for (const auto& [t, c] : v) {
    Rational coeff = c / lead_coeff;
    if (coeff != 0) out_terms.emplace(-lead_key + t, coeff);
  }
  return QExpansion(ExponentSupport::lattice(den), std::move(out_terms),
                    out_prec);
}

QExpansion power(const QExpansion& a, long e, PrecBound prec_cap) {
  if (e == 0) return QExpansion::constant(Rational(1));
  QExpansion base = e > 0 ? a : invert(a, prec_cap);
  unsigned long n = e > 0 ? static_cast<unsigned long>(e)
                          : static_cast<unsigned long>(-(e + 1)) + 1;
  QExpansion result = QExpansion::constant(Rational(1));
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  if (prec_cap) result = result.truncated(prec_cap);
  return result;
}

QExpansion derive(const QExpansion& a) {
  std::map<long long, Rational> terms;
  long long den = a.den();
  for (const auto& [key, c] : a.terms()) {
    if (key == 0) continue;
    terms.emplace(key, key_exponent(key, den) * c);
  }
  return QExpansion(a.support(), std::move(terms), a.prec());
}

QExpansion dilate(const QExpansion& a, const Rational& factor) {
  if (factor <= 0) throw ConfigError("dilation factor must be positive");
  ExponentSupport support = a.support().dilated(factor);
  long long u = to_long_long(Integer(factor.get_num()));
  long long v = to_long_long(Integer(factor.get_den()));
  // old key/old_den -> key*u / (old_den*v); new den divides old_den*v.
  long long scaled_den = a.den() * v;
  long long f = scaled_den / support.den();
  std::map<long long, Rational> terms;
  for (const auto& [key, c] : a.terms()) {
    long long scaled = key * u;
    // scaled/f is exact: the canonical support den divides the scaled lattice
    terms.emplace(scaled / f, c);
  }
  PrecBound prec = a.prec() ? PrecBound(*a.prec() * factor) : std::nullopt;
  return QExpansion(support, std::move(terms), prec);
}

Rational coefficient(const QExpansion& a, const Rational& exponent) {
  return a.coefficient(exponent);
}

bool identical(const QExpansion& a, const QExpansion& b) {
  if (a.prec() != b.prec()) return false;
  if (a.term_count() != b.term_count()) return false;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end(); ++ia, ++ib) {
    if (key_exponent(ia->first, a.den()) != key_exponent(ib->first, b.den()) ||
        ia->second != ib->second)
      return false;
  }
  return true;
}

bool agree_below_common_prec(const QExpansion& a, const QExpansion& b) {
  PrecBound bound = min_prec(a.prec(), b.prec());
  QExpansion diff = sub(a, b);
  for (const auto& [key, c] : diff.terms()) {
    if (below_prec(key_exponent(key, diff.den()), bound) && c != 0)
      return false;
  }
  return true;
}

}  // namespace modgrid
