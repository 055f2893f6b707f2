#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "crossplace/errors.hpp"
#include "crossplace/padic.hpp"

using namespace crossplace;

namespace {
const Place p3 = Place::prime(3);
const Place p5 = Place::prime(5);
const Place p7 = Place::prime(7);
}  // namespace

TEST_CASE("valuation and norm on small rationals") {
  CHECK(valuation(Rational(50, 3), p5) == 2);
  CHECK(valuation(Rational(3, 10), p5) == -1);
  CHECK(valuation(Rational(7, 4), p5) == 0);
  CHECK(norm(Rational(50, 3), p5) == Rational(1, 25));
  CHECK(norm(Rational(0), p7) == Rational(0));
  CHECK(norm(Rational(-7, 2), Place::infinity()) == Rational(7, 2));
  CHECK_THROWS_AS(valuation(Rational(0), p5), InfiniteValuation);
  CHECK_FALSE(try_valuation(Rational(0), p5).has_value());
}

TEST_CASE("ultrametric inequality against the naive valuation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-5000, 5000), den(1, 3000);
  for (int i = 0; i < 2000; ++i) {
    const Rational x(num(rng), den(rng));
    const Rational y(num(rng), den(rng));
    if (x.is_zero() || y.is_zero() || (x + y).is_zero()) continue;
    for (const auto& p : {Place::prime(2), p3, p5}) {
      const auto vx = valuation(x, p), vy = valuation(y, p), vs = valuation(x + y, p);
      REQUIRE(vx == oracle::vq(x, p.p()));
      CHECK(vs >= std::min(vx, vy));
      if (vx != vy) CHECK(vs == std::min(vx, vy));
    }
  }
}

TEST_CASE("product formula") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> num(1, 100000), den(1, 100000);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (int i = 0; i < 300; ++i) {
    // smooth numbers so the finite product covers every prime
    std::int64_t a = 1, b = 1;
    for (int j = 0; j < 4; ++j) {
      a *= static_cast<std::int64_t>(primes[num(rng) % 15]);
      b *= static_cast<std::int64_t>(primes[den(rng) % 15]);
    }
    const Rational x(a, b);
    Rational prod = norm(x, Place::infinity());
    for (auto p : primes) prod = prod * norm(x, Place::prime(p));
    CHECK(prod == Rational(1));
  }
}

TEST_CASE("ball membership") {
  const Ball b = Ball::padic(p5, Rational(0), 1);
  CHECK(b.contains(Rational(5, 7)));
  CHECK_FALSE(b.contains(Rational(1, 7)));
  CHECK_FALSE(b.contains(Rational(1, 5)));
  CHECK(b.contains(Rational(0)));
  CHECK_FALSE(Ball::arc(Rational(0), Rational(1, 2)).contains(Rational(3, 5)));
  CHECK(Ball::arc(Rational(0), Rational(1, 2)).contains(Rational(1)));
  CHECK(Ball::arc(Rational(3, 4), Rational(1, 2)).contains(Rational(1, 8)));
  CHECK(b.measure() == Rational(1, 5));
  CHECK(Ball::arc(Rational(1, 3), Rational(1, 6)).measure() == Rational(1, 6));
  CHECK_THROWS_AS(Ball::padic(p5, Rational(0), -1), InvalidArgument);
  CHECK_THROWS_AS(Ball::arc(Rational(0), Rational(0)), InvalidArgument);
}

TEST_CASE("ball parsing round trips") {
  const Ball b = Ball::parse_padic("p5:3/7:k2");
  CHECK(b.as_padic().place == p5);
  CHECK(b.as_padic().k == 2);
  CHECK(Ball::parse_padic(b.to_string()) == b);
  const Ball a = Ball::parse_arc("1/3:1/2");
  CHECK(a.as_arc().left == Rational(1, 3));
  CHECK(a.as_arc().length == Rational(1, 2));
  CHECK_THROWS(Ball::parse_padic("p4:0:k1"));
  CHECK_THROWS(Ball::parse_padic("p5:0"));
}

TEST_CASE("ball intersections") {
  const auto r = ball_intersect(Ball::padic(p3, Rational(0), 1), Ball::padic(p3, Rational(3), 2));
  CHECK_FALSE(r.disjoint);
  REQUIRE(r.smaller.has_value());
  CHECK(r.smaller->as_padic().k == 2);
  CHECK(r.measure == Rational(1, 9));
  CHECK(ball_intersect(Ball::padic(p3, Rational(0), 1), Ball::padic(p3, Rational(1), 1)).disjoint);
  const Ball same = Ball::padic(p7, Rational(2), 3);
  CHECK(ball_intersect(same, same).measure == Rational(1, 343));
  CHECK_THROWS_AS(ball_intersect(same, Ball::padic(p3, Rational(0), 1)), UnsupportedCombination);
  CHECK_THROWS_AS(ball_intersect(same, Ball::full_arc()), UnsupportedCombination);
}

TEST_CASE("balls are nested or disjoint") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> center(-60, 60), k(0, 4);
  for (int i = 0; i < 500; ++i) {
    const Ball b1 = Ball::padic(p3, Rational(center(rng)), k(rng));
    const Ball b2 = Ball::padic(p3, Rational(center(rng)), k(rng));
    const auto r = ball_intersect(b1, b2);
    // integers are dense enough: every ball with k <= 4 has members in [0, 81)
    std::int64_t both = 0, only1 = 0, only2 = 0;
    for (std::int64_t x = 0; x < 81; ++x) {
      const bool in1 = oracle::in_ball(b1, x, 1), in2 = oracle::in_ball(b2, x, 1);
      both += in1 && in2;
      only1 += in1 && !in2;
      only2 += in2 && !in1;
    }
    if (r.disjoint) {
      CHECK(both == 0);
      CHECK(r.measure == Rational(0));
    } else {
      CHECK((only1 == 0 || only2 == 0));
      CHECK(Rational(both, 81) == r.measure);
    }
  }
}

TEST_CASE("p-adic samples and distance valuations") {
  const auto half = PAdicSample::from_rational(Rational(1, 2), p3, 10);
  CHECK(half.precision() == 10);
  CHECK((half.residue() * 2) % half.modulus() == 1);
  const auto dv = sample_distance_valuation(half, 2, 1);
  CHECK(dv.at_least);
  CHECK(dv.value == 10);

  const auto zero = PAdicSample::from_residue(p3, 5, 0);
  CHECK(sample_distance_valuation(zero, 1, 1) == DistanceValuation{0, false});
  CHECK(sample_distance_valuation(zero, 2, 9) == DistanceValuation{2, false});
  CHECK_THROWS(sample_distance_valuation(zero, 3, 1));
  CHECK_THROWS(PAdicSample::from_residue(p3, 0, 0));

  const auto big = PAdicSample::from_rational(Rational(-2, 7), p5, 40);
  CHECK((big.residue() * 7 + 2) % big.modulus() == 0);
}
