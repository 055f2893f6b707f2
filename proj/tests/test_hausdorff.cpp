#include "doctest.h"

#include "crossplace/errors.hpp"
#include "crossplace/hausdorff.hpp"

using namespace crossplace;

TEST_CASE("dimension functions") {
  CHECK(f_volume(DimensionFunction::power(Rational(1, 2)), Rational(1, 4)) == doctest::Approx(0.5));
  CHECK(f_volume(DimensionFunction::power(Rational(1)), Rational(3, 7)) == doctest::Approx(3.0 / 7.0));
  for (const auto& r : {Rational(1, 1000), Rational(1, 2), Rational(1)}) {
    CHECK(f_volume(DimensionFunction::power(Rational(0)), r) == 1.0);
  }
  const auto g = DimensionFunction::power_log(Rational(1), Rational(2));
  CHECK(g(0.01) < g(0.02));
  CHECK(DimensionFunction::power(Rational(2)).doubling_constant() == doctest::Approx(4.0));
  CHECK_THROWS(DimensionFunction::power(Rational(-1)));
  CHECK_THROWS(DimensionFunction::table({{0.1, 0.5}, {0.2, 0.4}}));
}

TEST_CASE("cover sums") {
  const auto psi = ApproxFunction::power_law(Rational(3));
  const auto r = cover_sum(2, 4, psi, DimensionFunction::power(Rational(1)));
  REQUIRE(r.partial_exact.has_value());
  CHECK(*r.partial_exact == Rational(2) * (Rational(1, 4) + Rational(1, 9) + Rational(1, 16)));
  CHECK(r.partial == doctest::Approx(r.partial_exact->to_double()));
  CHECK(r.has_tail_bound);
  CHECK(r.rho == doctest::Approx(1.0 / 8.0));

  const auto edge = cover_sum(10, 100, ApproxFunction::power_law(Rational(4)), DimensionFunction::power(Rational(1, 2)));
  CHECK(edge.divergent);
  CHECK_FALSE(edge.total().has_value());

  const auto f = DimensionFunction::power(Rational(4, 5));
  double previous = 1e300;
  for (std::int64_t N : {10, 100, 1000, 10000}) {
    const auto c = cover_sum(N, 10 * N, psi, f);
    REQUIRE(c.total().has_value());
    CHECK(*c.total() < previous);
    previous = *c.total();
  }
}

TEST_CASE("Jarnik-Besicovitch exponent") {
  CHECK(jb_exponent(Rational(2)) == Rational(1));
  CHECK(jb_exponent(Rational(4)) == Rational(1, 2));
  CHECK(jb_exponent(Rational(5, 2)) == Rational(4, 5));
  CHECK_THROWS_AS(jb_exponent(Rational(3, 2)), InvalidArgument);
}

TEST_CASE("box counting: full-measure case") {
  const auto spec = SourceSpec::make(Ball::full_padic(Place::prime(5)), Place::prime(3));
  const auto r = box_count(Rational(2), spec, default_box_levels(spec.target));
  CHECK(r.fit.slope == doctest::Approx(1.0).epsilon(0.15));
  std::size_t used = 0;
  for (const auto& s : r.scales) used += s.used;
  CHECK(used >= 3);
  CHECK(r.target_dim == doctest::Approx(1.0));
}

TEST_CASE("box counting: degenerate windows") {
  const auto spec = SourceSpec::make(Ball::full_padic(Place::prime(5)), Place::prime(3));
  CHECK_THROWS_AS(box_count(Rational(3), spec, {1, 2}), DegenerateWindow);
}
