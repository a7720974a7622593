#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <tuple>
#include <vector>

#include "modgrid/errors.hpp"
#include "modgrid/genfun.hpp"
#include "modgrid/generators.hpp"
#include "modgrid/grid.hpp"
#include "modgrid/spaces.hpp"

using namespace modgrid;

namespace {

Rational C(const QExpansion& f, long long e) {
  return f.coefficient(to_rational(e));
}

using Tensor = std::tuple<Rational, long long, long long>;

std::vector<Tensor> sorted_numerator(const GridGeneratingExpression& expr) {
  std::vector<Tensor> out = expr.numerator;
  std::sort(out.begin(), out.end(), [](const Tensor& a, const Tensor& b) {
    return std::tie(std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<1>(b), std::get<2>(b));
  });
  return out;
}

}  // namespace

TEST_CASE("hauptmodul labels resolve to the advertised expansions") {
  QExpansion j4z = resolve_hauptmodul("j4z", Rational(5));
  CHECK(C(j4z, -4) == 1);
  CHECK(C(j4z, 0) == 744);
  CHECK(C(j4z, 4) == 196884);
  CHECK(j4z.support().contains(Rational(8)));
  CHECK(!j4z.support().contains(Rational(2)));

  QExpansion jm744 = resolve_hauptmodul("j-744", Rational(3));
  CHECK(C(jm744, -1) == 1);
  CHECK(C(jm744, 0) == 0);
  CHECK(C(jm744, 1) == 196884);

  CHECK(agree_below_common_prec(resolve_hauptmodul("hauptmodul-5", Rational(4)),
                                level_hauptmodul(5, Rational(4))));
  CHECK_THROWS_AS(resolve_hauptmodul("nonsense", Rational(3)), ConfigError);
}

TEST_CASE("bivariate window extraction") {
  ModularGrid grid = build_grid(space_config("kohnen-half"), 8, 8, Rational(12));
  BivariateWindow F = build_F_window(grid, 0, 8, Rational(9));
  CHECK(F.p_lo == 0);
  CHECK(F.p_hi == 8);
  // Rows are exactly the family members, truncated to the window depth.
  for (const auto& [m, row] : F.rows) {
    CHECK(identical(row, grid.f_family.members.at(m)
                             .truncated(PrecBound(Rational(9)))));
  }
  CHECK(F.rows.count(3) == 1);
  CHECK(F.rows.count(2) == 0);

  CHECK_THROWS_AS(build_F_window(grid, 0, 9, Rational(9)), WindowExceedsGrid);
  CHECK_THROWS_AS(build_F_window(grid, 0, 8, Rational(20)), WindowExceedsGrid);
}

TEST_CASE("half-integral generating expression") {
  bool verified = false;
  GridGeneratingExpression expr = derive_generating_expression(
      space_config("kohnen-half"), 8, 8, &verified);
  CHECK(verified);
  CHECK(expr.hauptmodul == "j4z");
  std::vector<Tensor> expected = {{Rational(1), 0, 4}, {Rational(1), 3, 1}};
  CHECK(sorted_numerator(expr) == expected);

  nlohmann::ordered_json j = genfun_to_json(expr);
  CHECK(j["hauptmodul"] == "j4z");
  CHECK(j["numerator"].dump() == "[[1,0,4],[1,3,1]]");
  CHECK(!genfun_to_pretty(expr).empty());
}

TEST_CASE("level-one generating expression") {
  bool verified = false;
  GridGeneratingExpression expr = derive_generating_expression(
      space_config("sl2z-k0"), 8, 8, &verified);
  CHECK(verified);
  CHECK(expr.hauptmodul == "j-744");
  std::vector<Tensor> expected = {{Rational(1), 0, 1}};
  CHECK(sorted_numerator(expr) == expected);
}

TEST_CASE("level-two and level-three generating expressions") {
  for (const char* id : {"gamma0-2-k0", "gamma0-3-k0"}) {
    CAPTURE(id);
    bool verified = false;
    GridGeneratingExpression expr =
        derive_generating_expression(space_config(id), 6, 6, &verified);
    CHECK(verified);
    CHECK(expr.hauptmodul == space_config(id).kit.genfun_hauptmodul_label);
    std::vector<Tensor> expected = {{Rational(1), 0, 1}};
    CHECK(sorted_numerator(expr) == expected);
  }
}

TEST_CASE("two-sided verification rejects a perturbed numerator") {
  ModularGrid grid = build_grid(space_config("kohnen-half"), 8, 8, Rational(12));
  bool verified = false;
  GridGeneratingExpression expr = derive_generating_expression(
      space_config("kohnen-half"), 6, 6, &verified);
  REQUIRE(verified);
  CHECK(verify_two_sided(expr, grid, 6, 6));

  GridGeneratingExpression scaled = expr;
  std::get<0>(scaled.numerator[0]) = Rational(2);
  CHECK(!verify_two_sided(scaled, grid, 6, 6));

  // Swapping a tensor to a different valid member pair fails verification;
  // an index outside the family is rejected up front.
  GridGeneratingExpression swapped = expr;
  std::get<2>(swapped.numerator[0]) = 5;
  CHECK(!verify_two_sided(swapped, grid, 6, 6));
  GridGeneratingExpression offgrid = expr;
  std::get<2>(offgrid.numerator[0]) = 7;
  CHECK_THROWS_AS(verify_two_sided(offgrid, grid, 6, 6), IndexMismatch);
}
