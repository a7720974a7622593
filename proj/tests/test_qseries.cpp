#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "modgrid/errors.hpp"
#include "modgrid/qexpansion.hpp"
#include "modgrid/rational.hpp"
#include "modgrid/serialize.hpp"
#include "modgrid/support.hpp"

using namespace modgrid;

namespace {

// Deterministic random series source. Exponents are drawn from the chosen
// support so construction never trips the support check.
struct SeriesGen {
  std::mt19937_64 rng{0x5eed5eed1234ULL};

  long long pick(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
  }

  Rational rational() {
    Rational r = to_rational(pick(-99, 99)) / to_rational(pick(1, 9));
    return r;
  }

  ExponentSupport support() {
    long long den = pick(1, 4);
    if (pick(0, 3) == 0) {
      long long modulus = pick(2, 5);
      std::set<long long> residues;
      long long count = pick(1, modulus - 1);
      while ((long long)residues.size() < count)
        residues.insert(pick(0, modulus - 1));
      return ExponentSupport::residue_classes(den, modulus,
                                              std::move(residues));
    }
    return ExponentSupport::lattice(den);
  }

  QExpansion series(bool allow_unbounded = true) {
    ExponentSupport sup = support();
    std::map<long long, Rational> terms;
    long long count = pick(0, 8);
    for (long long i = 0; i < count; ++i) {
      long long base = pick(-10, 15);
      // Snap the key onto the support: keys are residues mod modulus.
      long long r = ((base % sup.modulus()) + sup.modulus()) % sup.modulus();
      long long offset = *sup.residues().begin() - r;
      terms[base + offset] = rational();
    }
    PrecBound prec;
    if (!allow_unbounded || pick(0, 2) != 0)
      prec = PrecBound(to_rational(pick(10, 30)) / to_rational(sup.den()));
    return QExpansion(sup, std::move(terms), prec);
  }
};

}  // namespace

TEST_CASE("ring laws, Leibniz rule, and dilation on random series") {
  SeriesGen gen;
  const Rational half = Rational(1) / Rational(2);
  const std::vector<Rational> factors = {Rational(1), Rational(2), Rational(3),
                                         half, Rational(3) / Rational(2)};
  for (int iter = 0; iter < 1000; ++iter) {
    QExpansion a = gen.series();
    QExpansion b = gen.series();
    QExpansion c = gen.series();

    CHECK(identical(add(a, b), add(b, a)));
    CHECK(identical(add(add(a, b), c), add(a, add(b, c))));
    CHECK(identical(mul(a, b), mul(b, a)));
    CHECK(identical(mul(mul(a, b), c), mul(a, mul(b, c))));
    CHECK(identical(mul(a, add(b, c)), add(mul(a, b), mul(a, c))));
    CHECK(identical(sub(a, b), add(a, negate(b))));
    CHECK(identical(derive(mul(a, b)),
                    add(mul(derive(a), b), mul(a, derive(b)))));

    const Rational& r = factors[iter % factors.size()];
    CHECK(identical(dilate(mul(a, b), r), mul(dilate(a, r), dilate(b, r))));
    CHECK(identical(dilate(add(a, b), r), add(dilate(a, r), dilate(b, r))));
    CHECK(identical(derive(dilate(a, r)), scalar_mul(r, dilate(derive(a), r))));
    CHECK(identical(dilate(dilate(a, r), Rational(1) / r), a));
  }
}

TEST_CASE("additive and multiplicative identities") {
  SeriesGen gen;
  QExpansion one = QExpansion::constant(1);
  for (int iter = 0; iter < 200; ++iter) {
    QExpansion a = gen.series();
    CHECK(identical(add(a, QExpansion()), a.truncated(a.prec())));
    CHECK(agree_below_common_prec(mul(a, one), a));
    CHECK(add(a, negate(a)).is_zero());
  }
}

TEST_CASE("inversion is a two-sided inverse below the common precision") {
  SeriesGen gen;
  QExpansion one = QExpansion::constant(1);
  int done = 0;
  while (done < 200) {
    QExpansion a = gen.series();
    if (a.is_zero()) continue;
    ++done;
    QExpansion inv = invert(a);
    CHECK(agree_below_common_prec(mul(a, inv), one));
    CHECK(agree_below_common_prec(mul(inv, a), one));
  }
  CHECK_THROWS_AS(invert(QExpansion()), ZeroSeries);
}

TEST_CASE("monomials invert exactly") {
  QExpansion m = QExpansion::monomial(Rational(3) / Rational(7),
                                      Rational(-5) / Rational(2));
  QExpansion inv = invert(m);
  CHECK(!inv.prec());
  CHECK(identical(mul(m, inv), QExpansion::constant(1)));
}

TEST_CASE("integer powers agree with repeated multiplication") {
  SeriesGen gen;
  for (int iter = 0; iter < 100; ++iter) {
    QExpansion a = gen.series();
    CHECK(identical(power(a, 1), a));
    CHECK(identical(power(a, 3), mul(mul(a, a), a)));
    if (!a.is_zero()) {
      CHECK(agree_below_common_prec(power(a, 0), QExpansion::constant(1)));
      CHECK(agree_below_common_prec(mul(power(a, -2), mul(a, a)),
                                    QExpansion::constant(1)));
    }
  }
}

TEST_CASE("precision propagation") {
  QExpansion a(ExponentSupport::integers(), {{-2, Rational(1)}, {3, Rational(5)}},
               PrecBound(Rational(7)));
  QExpansion b(ExponentSupport::integers(), {{1, Rational(2)}},
               PrecBound(Rational(4)));

  CHECK(*add(a, b).prec() == Rational(4));
  // mul: min over operands of (own precision + the other factor's lead).
  CHECK(*mul(a, b).prec() == Rational(2));
  CHECK(*dilate(a, Rational(3)).prec() == Rational(21));
  CHECK(*derive(a).prec() == Rational(7));
}

TEST_CASE("coefficient access is checked against the precision bound") {
  QExpansion a(ExponentSupport::integers(), {{0, Rational(4)}},
               PrecBound(Rational(5)));
  CHECK(a.coefficient(Rational(0)) == 4);
  CHECK(a.coefficient(Rational(4)) == 0);
  CHECK_THROWS_AS(a.coefficient(Rational(5)), BeyondPrecision);
  CHECK_THROWS_AS(a.coefficient(Rational(9)), BeyondPrecision);
  QExpansion exact = QExpansion::constant(3);
  CHECK(exact.coefficient(Rational(1000000)) == 0);
}

TEST_CASE("truncation lowers the bound and drops unknown terms") {
  QExpansion a(ExponentSupport::integers(),
               {{-1, Rational(1)}, {2, Rational(3)}, {6, Rational(9)}},
               PrecBound(Rational(10)));
  QExpansion t = a.truncated(PrecBound(Rational(3)));
  CHECK(*t.prec() == Rational(3));
  CHECK(t.term_count() == 2);
  CHECK(t.coefficient(Rational(2)) == 3);
  // Truncating to a larger bound must not pretend to know more.
  CHECK(*a.truncated(PrecBound(Rational(99))).prec() == Rational(10));
}

TEST_CASE("leading data and pole order") {
  QExpansion a(ExponentSupport::lattice(2),
               {{-3, Rational(5)}, {4, Rational(1)}}, std::nullopt);
  CHECK(*a.leading_exponent() == Rational(-3) / Rational(2));
  CHECK(a.leading_coefficient() == 5);
  CHECK(a.pole_order() == Rational(3) / Rational(2));
  CHECK(QExpansion::constant(2).pole_order() == 0);
  CHECK_THROWS_AS(QExpansion().leading_coefficient(), ZeroSeries);
}

TEST_CASE("support construction canonicalizes") {
  CHECK(ExponentSupport::residue_classes(2, 8, {0, 4}) ==
        ExponentSupport::residue_classes(1, 2, {0}));
  CHECK(ExponentSupport::residue_classes(1, 3, {0, 1, 2}) ==
        ExponentSupport::integers());
  ExponentSupport plus = ExponentSupport::residue_classes(1, 4, {0, 1});
  CHECK(plus.contains(Rational(4)));
  CHECK(plus.contains(Rational(-3)));
  CHECK(!plus.contains(Rational(2)));
  CHECK(!plus.contains(Rational(1) / Rational(2)));
  CHECK(plus.negated() == ExponentSupport::residue_classes(1, 4, {0, 3}));
  CHECK(plus.dilated(Rational(4)) ==
        ExponentSupport::residue_classes(1, 16, {0, 4}));
}

TEST_CASE("support algebra matches term placement") {
  ExponentSupport a = ExponentSupport::residue_classes(1, 4, {1});
  ExponentSupport b = ExponentSupport::residue_classes(1, 4, {2});
  ExponentSupport s = sumset(a, b);
  CHECK(s.contains(Rational(3)));
  CHECK(s.contains(Rational(7)));
  ExponentSupport u = unite(a, b);
  CHECK(u.contains(Rational(1)));
  CHECK(u.contains(Rational(2)));
  CHECK(!u.contains(Rational(0)));
}

TEST_CASE("construction rejects off-support terms") {
  ExponentSupport plus = ExponentSupport::residue_classes(1, 4, {0, 1});
  CHECK_THROWS_AS(
      QExpansion(plus, {{2, Rational(1)}}, std::nullopt),
      IncompatibleSupport);
  QExpansion ok(plus, {{4, Rational(1)}}, std::nullopt);
  CHECK_THROWS_AS(ok.with_support(ExponentSupport::residue_classes(1, 4, {1})),
                  IncompatibleSupport);
}

TEST_CASE("serialization round trip is bit exact") {
  SeriesGen gen;
  for (int iter = 0; iter < 200; ++iter) {
    QExpansion a = gen.series();
    QExpansion back = qexpansion_from_json(to_json(a));
    // Support metadata is not serialized (families re-attach it from the
    // registry); terms, lattice density, and precision must survive.
    CHECK(identical(a, back));
    CHECK(a.den() == back.den());
  }
  QExpansion exact = QExpansion::monomial(Rational(-7) / Rational(3),
                                          Rational(5) / Rational(4));
  CHECK(to_json(exact)["prec"] == "inf");
  CHECK(identical(qexpansion_from_json(to_json(exact)), exact));
}

TEST_CASE("precision strings") {
  CHECK(prec_to_string(std::nullopt) == "inf");
  CHECK(prec_to_string(PrecBound(Rational(7) / Rational(2))) == "7/2");
  CHECK(!prec_from_string("inf"));
  CHECK(*prec_from_string("7/2") == Rational(7) / Rational(2));
}
