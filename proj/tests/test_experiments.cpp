#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "crossplace/approx_engine.hpp"
#include "crossplace/errors.hpp"
#include "crossplace/experiments.hpp"

using namespace crossplace;

namespace {
const Place p3 = Place::prime(3);
const Place p5 = Place::prime(5);

TrialConfig config(SourceSpec spec, std::int64_t tau, std::vector<std::int64_t> grid, std::int64_t samples) {
  TrialConfig c{std::move(spec), ApproxFunction::power_law(Rational(tau)), samples, std::move(grid)};
  c.seed = 7;
  return c;
}
}  // namespace

TEST_CASE("counter RNG is deterministic per stream") {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  CounterRng u(1, 0);
  for (int i = 0; i < 1000; ++i) CHECK(u.uniform(7) < 7);
}

TEST_CASE("sampled targets") {
  CounterRng rng(9, 0);
  const auto real = sample_target(Place::infinity(), 10, rng);
  const auto& q = std::get<Rational>(real);
  CHECK(q >= Rational(0));
  CHECK(q < Rational(1));
  CHECK(1024 % q.den() == 0);
  const auto padic = sample_target(p3, 12, rng);
  CHECK(std::get<PAdicSample>(padic).precision() == 12);
  std::int64_t seen = 0;
  for_each_residue(p3, 4, [&](const PAdicSample& s) {
    CHECK(s.residue() == seen);
    ++seen;
  });
  CHECK(seen == 81);
}

TEST_CASE("exhaustive moments equal the exact moments") {
  const auto spec = SourceSpec::make(Ball::full_arc(), p3);
  const auto psi = ApproxFunction::power_law(Rational(1));
  const auto L = required_precision(psi, spec, 50);
  CHECK(L <= 6);
  const auto e = exhaustive_moments(50, psi, spec, L);
  CHECK(e.mean_closed == m1_exact(50, psi, spec));
  CHECK(e.mean_sq_closed == m2sq_exact(50, psi, spec));
  CHECK(e.closed_counts.size() == static_cast<std::size_t>(std::pow(3, L)));

  const auto ball = SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3);
  const auto f = exhaustive_moments(12, ApproxFunction::power_law(Rational(2)), ball, 5, 3);
  const auto [mean, mean_sq] = oracle::exhaustive_moments(3, 5, 12, 2, ball);
  CHECK(f.mean_closed == mean);
  CHECK(f.mean_sq_closed == mean_sq);
}

TEST_CASE("trial validation") {
  auto c = config(SourceSpec::make(Ball::full_arc(), p3), 2, {100, 10}, 10);
  c.precision = 10;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.n_grid = {10, 100};
  c.sample_count = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.sample_count = 10;
  CHECK_NOTHROW(c.validate());
  c.precision = 6;
  c.mode = SamplingMode::Auto;
  CHECK(c.exhaustive());
  c.mode = SamplingMode::Sampled;
  CHECK_FALSE(c.exhaustive());
}

TEST_CASE("dichotomy runs are reproducible") {
  auto c = config(SourceSpec::make(Ball::full_arc(), p3), 2, {50, 200, 800}, 60);
  c.precision = recommended_precision(c.psi, c.spec, 800);
  c.mode = SamplingMode::Sampled;
  const auto a = run_dichotomy(c);
  c.workers = 3;
  const auto b = run_dichotomy(c);
  CHECK(a.counts == b.counts);
  CHECK(a.rows.size() == 3);
  CHECK(a.samples == 60);
  // sampled means are monotone in N since counts only accumulate
  CHECK(a.rows[0].mean <= a.rows[1].mean);
  CHECK(a.rows[1].mean <= a.rows[2].mean);
}

TEST_CASE("exhaustive dichotomy mean is exact") {
  auto c = config(SourceSpec::make(Ball::full_arc(), p3), 1, {10, 30, 50}, 1);
  c.precision = 6;
  c.mode = SamplingMode::Exhaustive;
  const auto r = run_dichotomy(c);
  CHECK(r.exhaustive);
  CHECK(r.samples == 729);
  const auto e = exhaustive_moments(50, c.psi, c.spec, 6);
  REQUIRE(r.rows[2].exact_mean.has_value());
  CHECK(*r.rows[2].exact_mean == e.mean_strict);
}

TEST_CASE("Paley-Zygmund on all residues") {
  auto c = config(SourceSpec::make(Ball::full_arc(), p3), 2, {2}, 1);
  c.precision = 4;
  const auto r = run_paley_zygmund(c, {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)});
  CHECK(r.all_hold);
  CHECK(r.moments.M2sq == Rational(4, 3));
  CHECK(r.rows[0].empirical == Rational(1));
  CHECK(r.rows.back().predicted == Rational(0));
}

TEST_CASE("translate partitions") {
  CHECK(check_translate_partition(2, 1, 3, 1));
  CHECK(check_translate_partition(5, 3, 7, 2));
  CHECK(check_translate_partition(7, 0, 5, 3));
  CHECK_THROWS(check_translate_partition(3, 1, 3, 1));
}

TEST_CASE("reduction to a centered ball") {
  const Ball b = Ball::padic(p3, Rational(1, 4), 0);
  CHECK(reduction_transform(Rational(1, 3), b).translated == Rational(1, 12));
  const Ball c = Ball::padic(p5, Rational(0), 2);
  const auto r = reduction_transform(Rational(2, 7), c);
  CHECK(r.translated == Rational(2, 7));
  CHECK(r.scaled == Rational(2, 175));
}

TEST_CASE("translated counts agree") {
  const auto psi = ApproxFunction::power_law(Rational(2));
  for (const auto& x : {Rational(1, 3), Rational(2, 7), Rational(5, 11), Rational(3, 17)}) {
    const Ball b = Ball::padic(p5, Rational(2, 3), 1);
    const auto [lhs, rhs] = translated_counts(x, b, 40, psi);
    CHECK(lhs == rhs);
  }
}
