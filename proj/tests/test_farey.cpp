#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "crossplace/errors.hpp"
#include "crossplace/farey.hpp"

using namespace crossplace;

namespace {
const Place p3 = Place::prime(3);
const Place p5 = Place::prime(5);

SourceSpec arc_spec(Rational left, Rational length, const Place& target = p3) {
  return SourceSpec::make(Ball::arc(left, length), target);
}
}  // namespace

TEST_CASE("fractions at one level") {
  const auto half = arc_spec(0, Rational(1, 2));
  const auto f = fractions_at_level(half, 5);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == Rational(1, 5));
  CHECK(f[1] == Rational(2, 5));

  const auto ball = SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3);
  const auto g = fractions_at_level(ball, 7);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == Rational(5, 7));
  CHECK(fractions_at_level(ball, 9).empty());
  CHECK(numerators_at_level(half, 1) == std::vector<std::int64_t>{1});
}

TEST_CASE("restricted totient small values") {
  CHECK(restricted_totient(arc_spec(0, Rational(1, 2)), 5) == 2);
  CHECK(restricted_totient(SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3), 3) == 0);
  CHECK(restricted_totient(arc_spec(0, 1), 12) == 4);
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(360) == 96);
  CHECK(distinct_primes(360) == std::vector<std::uint64_t>{2, 3, 5});
}

TEST_CASE("restricted totient matches a gcd loop") {
  std::vector<SourceSpec> specs{
      arc_spec(0, Rational(1, 2)),
      arc_spec(Rational(1, 3), Rational(1, 7)),
      arc_spec(Rational(5, 6), Rational(1, 3)),
      SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3),
      SourceSpec::make(Ball::padic(p5, Rational(2, 3), 2), p3),
      SourceSpec::make(Ball::padic(Place::prime(2), Rational(1), 3), Place::infinity()),
      SourceSpec::make(Ball::padic(Place::prime(7), Rational(-1, 2), 1), p5),
  };
  for (const auto& spec : specs) {
    for (std::int64_t n = 1; n <= 300; ++n) {
      const auto expected = oracle::phi_b(spec, n);
      REQUIRE(restricted_totient(spec, n) == expected);
      REQUIRE(restricted_totient_enumerated(spec, n) == expected);
    }
  }
}

TEST_CASE("totient table running sums") {
  const auto full = totient_table(arc_spec(0, 1), 4);
  CHECK(full.restricted_sum == 4);
  REQUIRE(full.rows.size() == 4);
  CHECK(full.rows[2].phi_b == 2);  // n = 3 is reported but not summed
  CHECK(full.rows[2].running_sum == 2);

  // n = 1..5 contribute 1, 0, -, 1, 2 for the half-open arc [0, 1/2)
  const auto half = totient_table(arc_spec(0, Rational(1, 2)), 5);
  CHECK(half.rows.size() == 5);
  CHECK(half.restricted_sum == 4);

  const auto spec = SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3);
  const auto t = totient_table(spec, 10);
  std::uint64_t enumerated = 0;
  for (std::int64_t n = 1; n <= 10; ++n) {
    if (!spec.excludes(n)) enumerated += fractions_at_level(spec, n).size();
  }
  CHECK(t.restricted_sum == enumerated);
}

TEST_CASE("parallel and serial tables agree") {
  const auto spec = SourceSpec::make(Ball::padic(Place::prime(7), Rational(3), 1), p3);
  const auto a = totient_table(spec, 20000, 1);
  const auto b = totient_table(spec, 20000, 4);
  CHECK(a.restricted_sum == b.restricted_sum);
  CHECK(a.rows.back().running_sum == b.rows.back().running_sum);
}

TEST_CASE("filter flag") {
  const auto on = SourceSpec::make(Ball::full_arc(), p3, true);
  const auto off = SourceSpec::make(Ball::full_padic(p5), Place::infinity(), false);
  CHECK(on.excludes(9));
  CHECK_FALSE(off.excludes(9));
  CHECK_FALSE(SourceSpec::make(Ball::full_arc(), p3, false).excludes(9));
}

TEST_CASE("equidistribution ratios") {
  const auto full = equidistribution_ratio(arc_spec(0, 1), 100, 120);
  for (const auto& pt : full) CHECK(pt.ratio == Rational(1));
  const auto half = equidistribution_ratio(arc_spec(0, Rational(1, 2)), 1000, 1000);
  REQUIRE(half.size() == 1);
  CHECK(std::abs(half[0].ratio.to_double() - 0.5) < 0.05);
  const auto two = equidistribution_ratio(SourceSpec::make(Ball::padic(Place::prime(2), Rational(0), 1), p3), 1001, 1001);
  CHECK(two[0].ratio == Rational(oracle::phi_b(SourceSpec::make(Ball::padic(Place::prime(2), Rational(0), 1), p3), 1001),
                                 euler_phi(1001)));
}
