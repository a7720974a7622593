#include "modgrid/generators.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <vector>

#include "modgrid/errors.hpp"

namespace modgrid {

namespace {

std::mutex cache_mutex;

// Euler function prod_{n>=1} (1 - q^n) by the pentagonal number series.
QExpansion euler_phi(long long prec) {
  std::map<long long, Rational> terms;
  terms[0] = Rational(1);
  for (long long k = 1;; ++k) {
    long long p1 = k * (3 * k - 1) / 2;
    long long p2 = k * (3 * k + 1) / 2;
    if (p1 >= prec && p2 >= prec) break;
    Rational sign(k % 2 == 0 ? 1 : -1);
    if (p1 < prec) terms[p1] += sign;
    if (p2 < prec) terms[p2] += sign;
  }
  return QExpansion(ExponentSupport::integers(), std::move(terms),
                    to_rational(prec));
}

long long ceil_to_ll(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return to_long_long(q);
}

}  // namespace

Rational EtaQuotientSpec::leading_exponent() const {
  Rational sum(0);
  for (const auto& [d, r] : factors) sum += to_rational(d * r) / to_rational(24);
  sum.canonicalize();
  return sum;
}

std::string EtaQuotientSpec::descriptor() const {
  std::ostringstream out;
  out << "eta[";
  bool first = true;
  for (const auto& [d, r] : factors) {
    if (!first) out << ",";
    out << d << "^" << r;
    first = false;
  }
  out << "]";
  return out.str();
}

QExpansion eta_quotient(const EtaQuotientSpec& spec, const Rational& prec) {
  if (spec.factors.empty()) throw ConfigError("empty eta quotient");
  for (const auto& [d, r] : spec.factors) {
    if (d <= 0) throw ConfigError("eta dilation must be positive");
    if (r == 0) throw ConfigError("zero eta power");
  }

  static std::map<std::string, QExpansion> memo;
  std::string key = spec.descriptor() + "@" + rational_to_string(prec);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  Rational lead = spec.leading_exponent();
  // Tail product needs prec - lead integral q-units beyond the constant term.
  long long tail_prec = ceil_to_ll(prec - lead);
  if (tail_prec < 1) tail_prec = 1;

  QExpansion product = QExpansion::constant(Rational(1));
  for (const auto& [d, r] : spec.factors) {
    long long base_prec = (tail_prec + d - 1) / d + 1;
    QExpansion phi = dilate(euler_phi(base_prec), to_rational(d));
    product = mul(product, power(phi, r, to_rational(tail_prec + 1)));
  }
  product = mul(product, QExpansion::monomial(Rational(1), lead));
  QExpansion result = product.truncated(prec);

  std::lock_guard<std::mutex> lock(cache_mutex);
  memo.emplace(key, result);
  return result;
}

Rational bernoulli_number(long n) {
  if (n < 0) throw ConfigError("negative Bernoulli index");
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(cache_mutex);
  while (static_cast<long>(table.size()) <= n) {
    long m = static_cast<long>(table.size());
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    Rational sum(0);
    Integer binom;
    for (long j = 0; j < m; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                   static_cast<unsigned long>(j));
      sum += Rational(binom) * table[j];
    }
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                 static_cast<unsigned long>(m));
    table.push_back(-sum / Rational(binom));
  }
  return table[n];
}

QExpansion eisenstein(long weight, const Rational& prec) {
  if (weight < 2 || weight % 2 != 0)
    throw ConfigError("Eisenstein weight must be even and >= 2");

  static std::map<std::string, QExpansion> memo;
  std::ostringstream key;
  key << "E" << weight << "@" << rational_to_string(prec);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = memo.find(key.str());
    if (it != memo.end()) return it->second;
  }

  long long n_max = ceil_to_ll(prec) - 1;
  Rational factor = Rational(-2 * weight) / bernoulli_number(weight);
  std::map<long long, Rational> terms;
  terms[0] = Rational(1);
  // sigma_{k-1} by divisor sieve.
  std::vector<Integer> sigma(n_max >= 0 ? n_max + 1 : 1, Integer(0));
  for (long long d = 1; d <= n_max; ++d) {
    Integer dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(weight - 1));
    for (long long n = d; n <= n_max; n += d) sigma[n] += dk;
  }
  for (long long n = 1; n <= n_max; ++n) {
    Rational c = factor * Rational(sigma[n]);
    if (c != 0) terms[n] = c;
  }
  QExpansion result(ExponentSupport::integers(), std::move(terms), prec);

  std::lock_guard<std::mutex> lock(cache_mutex);
  memo.emplace(key.str(), result);
  return result;
}

QExpansion e2_hat(long level, const Rational& prec) {
  if (level < 2) throw UnsupportedLevel("e2_hat needs level >= 2");
  QExpansion e2 = eisenstein(2, prec);
  QExpansion dilated = dilate(eisenstein(2, prec / level + 1), Rational(level));
  QExpansion diff = sub(e2, scalar_mul(Rational(level), dilated));
  return scalar_mul(Rational(1) / Rational(1 - level), diff).truncated(prec);
}

QExpansion theta_series(const Rational& prec) {
  long long n_max = ceil_to_ll(prec) - 1;
  std::map<long long, Rational> terms;
  terms[0] = Rational(1);
  for (long long n = 1; n * n <= n_max; ++n) terms[n * n] = Rational(2);
  return QExpansion(
      ExponentSupport::residue_classes(1, 4, {0, 1}), std::move(terms), prec);
}

QExpansion delta_series(const Rational& prec) {
  return eta_quotient(EtaQuotientSpec{{{1, 24}}}, prec);
}

QExpansion j_function(const Rational& prec) {
  QExpansion e4 = eisenstein(4, prec + 2);
  QExpansion num = power(e4, 3, prec + 2);
  return mul(num, invert(delta_series(prec + 2))).truncated(prec);
}

QExpansion level_hauptmodul(long level, const Rational& prec) {
  switch (level) {
    case 2:
    case 3:
    case 5:
    case 7:
    case 13:
      break;
    default:
      throw UnsupportedLevel("no shipped Hauptmodul for level " +
                             std::to_string(level));
  }
  long long r = 24 / (level - 1);
  return eta_quotient(EtaQuotientSpec{{{1, r}, {level, -r}}}, prec);
}

}  // namespace modgrid
