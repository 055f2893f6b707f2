#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "crossplace/approx_engine.hpp"
#include "crossplace/errors.hpp"

using namespace crossplace;

namespace {
const Place p2 = Place::prime(2);
const Place p3 = Place::prime(3);
const Place p5 = Place::prime(5);
const Place p7 = Place::prime(7);

ApproxFunction pw(std::int64_t tau) { return ApproxFunction::power_law(Rational(tau)); }
SourceSpec full_arc(const Place& target) { return SourceSpec::make(Ball::full_arc(), target); }
}  // namespace

TEST_CASE("approximation functions") {
  const auto f = ApproxFunction::parse("pow:5/2");
  CHECK(f.family() == ApproxFamily::PowerLaw);
  CHECK(f.exponent() == Rational(5, 2));
  CHECK(ApproxFunction::parse(f.to_string()) == f);
  CHECK(pw(2).exact_value(3) == Rational(1, 9));
  CHECK_FALSE(f.exact_value(2).has_value());
  CHECK(pw(2).compare(2, Rational(1, 4)) == 0);
  CHECK(pw(2).compare(2, Rational(1, 5)) > 0);
  CHECK(pw(2).compare(2, Rational(1, 3)) < 0);
  // 2^(-5/2) = 0.17677...
  CHECK(f.compare(2, Rational(17677, 100000)) > 0);
  CHECK(f.compare(2, Rational(17678, 100000)) < 0);
  CHECK_THROWS(ApproxFunction::power_law(Rational(0)));
  CHECK_THROWS(ApproxFunction::power_log(Rational(-2)));
  CHECK_THROWS(ApproxFunction::parse("exp:2"));
  CHECK_THROWS(ApproxFunction::table({Rational(1, 2), Rational(3, 4)}));
  const auto t = ApproxFunction::table({Rational(1), Rational(1, 3), Rational(1, 10)});
  CHECK(t.domain_limit() == 3);
  CHECK(t.exact_value(2) == Rational(1, 3));
  CHECK_THROWS(t.value(4));
}

TEST_CASE("psi star") {
  CHECK(psi_star(pw(2), 2, p3) == Rational(1, 9));
  CHECK(psi_star(pw(2), 5, p5) == Rational(1, 25));
  CHECK(psi_star(pw(3), 3, p2) == Rational(1, 32));
  CHECK(pw(2).closed_exponent(5, 5) == 2);
  CHECK(pw(2).open_exponent(5, 5) == 3);
  CHECK(pw(2).open_exponent(2, 3) == 2);
  for (std::int64_t tau = 1; tau <= 4; ++tau) {
    for (std::int64_t n = 1; n <= 200; ++n) {
      for (auto p : {2u, 3u, 7u}) REQUIRE(psi_star(pw(tau), n, Place::prime(p)) == oracle::psi_star(tau, n, p));
    }
  }
  // 2^-3/2 lies strictly between powers of 3
  const auto r = ApproxFunction::power_law(Rational(3, 2));
  CHECK(psi_star(r, 2, p3) == Rational(1, 3));
}

TEST_CASE("Psi partial sums") {
  CHECK(big_psi(pw(2), 3) == Rational(11, 6));
  CHECK(big_psi(pw(2), 1) == Rational(1));
  CHECK(big_psi(pw(3), 4) == Rational(205, 144));
  CHECK(big_psi_value(pw(2), 3) == doctest::Approx(11.0 / 6.0));
  CHECK_THROWS_AS(big_psi(ApproxFunction::power_law(Rational(3, 2)), 2), InvalidFunction);
}

TEST_CASE("delta counts: frozen cases") {
  const auto z5 = SourceSpec::make(Ball::full_padic(p5), p3);
  const auto zero = PAdicSample::from_residue(p3, 20, 0);
  const auto r = delta_N(zero, 100, pw(3), z5);
  CHECK(r.strict_count == 0);

  const auto half = PAdicSample::from_rational(Rational(1, 2), p3, 20);
  const auto h = delta_N(half, 2, pw(1), full_arc(p3));
  CHECK(h.strict_count >= 1);
  bool found = false;
  for (const auto& rec : h.records) found = found || (rec.n == 2 && rec.a == 1 && rec.strict);
  CHECK(found);
}

TEST_CASE("delta counts agree with a double loop") {
  std::mt19937_64 rng(2024);
  const std::vector<SourceSpec> padic_specs{
      full_arc(p3),
      SourceSpec::make(Ball::arc(Rational(1, 5), Rational(1, 2)), p3),
      SourceSpec::make(Ball::padic(p5, Rational(0), 1), p3),
      SourceSpec::make(Ball::padic(p2, Rational(1, 3), 2), p5),
      SourceSpec::make(Ball::padic(p7, Rational(2), 1), p5),
  };
  for (int i = 0; i < 40; ++i) {
    const auto& spec = padic_specs[i % padic_specs.size()];
    const std::int64_t tau = 1 + i % 3;
    const std::int64_t N = 30 + 7 * i;
    const auto psi = pw(tau);
    const std::int64_t L = recommended_precision(psi, spec, N);
    const auto p = spec.target.p();
    mpz_class P = 1;
    for (std::int64_t j = 0; j < L; ++j) P *= static_cast<unsigned long>(p);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    const mpz_class res = gr.get_z_range(P);
    const auto alpha = PAdicSample::from_residue(spec.target, L, res);
    const auto got = delta_N(alpha, N, psi, spec);
    const auto want = oracle::delta_padic(res, p, L, N, tau, spec);
    REQUIRE(got.strict_count == want.strict);
    REQUIRE(got.closed_count == want.closed);
  }
  const std::vector<SourceSpec> real_specs{
      SourceSpec::make(Ball::full_padic(p5), Place::infinity()),
      SourceSpec::make(Ball::padic(p3, Rational(1), 1), Place::infinity()),
  };
  for (int i = 0; i < 20; ++i) {
    const auto& spec = real_specs[i % real_specs.size()];
    const std::int64_t tau = 2 + i % 2;
    const Rational alpha(static_cast<std::int64_t>(rng() % 1'000'000), 1'000'000);
    const auto got = delta_N(alpha, 150, pw(tau), spec);
    const auto want = oracle::delta_real(alpha, 150, tau, spec);
    REQUIRE(got.strict_count == want.strict);
    REQUIRE(got.closed_count == want.closed);
  }
}

TEST_CASE("delta counts on exact boundaries") {
  // alpha = 1/4 + 1/16 sits at distance exactly psi(4) = 1/16 from 1/4
  const auto spec = SourceSpec::make(Ball::full_padic(p5), Place::infinity());
  const auto r = delta_N(Rational(5, 16), 4, pw(2), spec);
  const auto want = oracle::delta_real(Rational(5, 16), 4, 2, spec);
  CHECK(r.strict_count == want.strict);
  CHECK(r.closed_count == want.closed);
  CHECK(r.boundary() >= 1);
}

TEST_CASE("delta counter preconditions") {
  const auto psi = pw(2);
  CHECK_THROWS_AS(DeltaCounter(psi, SourceSpec::make(Ball::full_arc(), p3, false), 10), UnsupportedCombination);
  const DeltaCounter c(psi, full_arc(p3), 100);
  CHECK_THROWS_AS(c.count(PAdicSample::from_residue(p3, 2, 1), 100), PrecisionInsufficient);
  try {
    c.count(PAdicSample::from_residue(p3, 2, 1), 100);
  } catch (const PrecisionInsufficient& e) {
    CHECK(e.available() == 2);
    CHECK(e.required() > 2);
    CHECK(e.offending_n() >= 1);
  }
  CHECK_THROWS_AS(c.count(Rational(1, 2), 10), UnsupportedCombination);
  CHECK_THROWS_AS(c.count(PAdicSample::from_residue(p5, 4, 1), 10), UnsupportedCombination);
  const std::int64_t grid[] = {10, 50, 100};
  const auto alpha = PAdicSample::from_residue(p3, recommended_precision(psi, full_arc(p3), 100), 17);
  const auto prefixes = c.count_prefixes(alpha, grid);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(prefixes[i].first == c.count(alpha, grid[i]).strict_count);
    CHECK(prefixes[i].second == c.count(alpha, grid[i]).closed_count);
  }
}

TEST_CASE("first moment") {
  CHECK(m1_exact(4, pw(2), full_arc(p3)) == Rational(32, 27));
  CHECK(m1_exact(1, pw(2), full_arc(p3)) == Rational(1));
  const auto empty = SourceSpec::make(Ball::arc(Rational(1, 3), Rational(1, 100)), p3);
  CHECK(m1_exact(5, pw(2), empty) == Rational(0));
  CHECK(m1_via_integral(5, pw(2), empty) == Rational(0));
  for (auto p : {3u, 5u, 7u}) {
    for (std::int64_t tau : {2, 3}) {
      const auto spec = SourceSpec::make(Ball::padic(p2, Rational(1), 2), Place::prime(p));
      CHECK(m1_exact(120, pw(tau), spec) == m1_via_integral(120, pw(tau), spec));
    }
  }
  CHECK_THROWS_AS(m1_via_integral(20000, pw(2), full_arc(p3)), BudgetExceeded);
}

TEST_CASE("second moment") {
  CHECK(m2sq_exact(2, pw(2), full_arc(p3)) == Rational(4, 3));
  CHECK(m2sq_lemma_form(2, pw(2), full_arc(p3)) == Rational(10, 9));
  CHECK(m2sq_exact(1, pw(2), full_arc(p3)) == Rational(1));
  CHECK_THROWS_AS(m2sq_exact(301, pw(2), full_arc(p3)), BudgetExceeded);

  const std::vector<SourceSpec> specs{
      full_arc(p3),
      SourceSpec::make(Ball::arc(Rational(1, 4), Rational(1, 2)), p3),
      SourceSpec::make(Ball::padic(p5, Rational(1), 1), p3),
      SourceSpec::make(Ball::padic(p2, Rational(0), 1), p5),
  };
  for (const auto& spec : specs) {
    for (std::int64_t tau : {1, 2}) {
      for (std::int64_t N : {1, 4, 9, 14}) {
        const auto psi = pw(tau);
        const auto exact = m2sq_exact(N, psi, spec);
        REQUIRE(exact == m2sq_naive(N, psi, spec));
        const auto L = std::max<std::int64_t>(1, recommended_precision(psi, spec, N) - 2);
        if (std::pow(static_cast<double>(spec.target.p()), static_cast<double>(L)) > 3e4) continue;
        const auto [mean, mean_sq] = oracle::exhaustive_moments(spec.target.p(), L, N, tau, spec);
        CHECK(mean == m1_exact(N, psi, spec));
        CHECK(mean_sq == exact);
      }
    }
  }
}

TEST_CASE("moment report") {
  const auto r = moment_report(4, pw(2), full_arc(p3));
  CHECK(r.M1 == Rational(32, 27));
  REQUIRE(r.Psi.has_value());
  CHECK(*r.Psi == Rational(25, 12));
  CHECK(r.M2sq >= r.M1 * r.M1);
  CHECK(r.c1 == doctest::Approx(r.M1.to_double() / std::sqrt(r.M2sq.to_double())));
}

TEST_CASE("pair counts") {
  const auto r = pair_count(2, 3, pw(2), p5);
  CHECK(r.count == 0);
  CHECK(r.coincident == 1);  // 2/2 = 3/3
  CHECK(r.within_bound);
  CHECK(pair_count(1, 1, pw(2), p3).count == 0);
  // 1/2 = 2/4 and 2/2 = 4/4 are the same point and are reported separately
  const auto c = pair_count(2, 4, pw(2), p5);
  CHECK(c.coincident == 2);
  // p^t > n forces a = b on the diagonal
  CHECK(pair_count(4, 4, pw(2), p5).count == 0);
  CHECK_THROWS(pair_count(3, 4, pw(2), p3));
  for (std::int64_t n = 1; n <= 40; ++n) {
    for (std::int64_t m = 1; m <= 40; ++m) {
      if (n % 3 == 0 || m % 3 == 0) continue;
      std::int64_t brute = 0, same = 0;
      const auto t = std::max(oracle::psi_star(2, n, 3), oracle::psi_star(2, m, 3));
      for (std::int64_t a = 1; a <= n; ++a) {
        for (std::int64_t b = 1; b <= m; ++b) {
          if (n == m && a == b) continue;
          const Rational d = Rational(a, n) - Rational(b, m);
          if (d.is_zero()) {
            ++same;
          } else if (oracle::pow_q(3, -oracle::vq(d, 3)) < t) {
            ++brute;
          }
        }
      }
      const auto r = pair_count(n, m, pw(2), p3);
      REQUIRE(r.count == brute);
      REQUIRE(r.coincident == same);
    }
  }
}

TEST_CASE("Paley-Zygmund arithmetic") {
  MomentReport r;
  r.M1 = Rational(1, 2);
  r.M2sq = Rational(1);
  r.c1 = 0.5;
  CHECK(paley_zygmund_prediction(r, 0.1) == doctest::Approx(0.16));
  CHECK(paley_zygmund_prediction(r, 0.5) == 0.0);
  CHECK_THROWS(paley_zygmund_prediction(r, 0.6));
  CHECK(paley_zygmund_exact(r, Rational(1, 2)) == Rational(1, 16));
  CHECK(paley_zygmund_exact(r, Rational(1)) == Rational(0));
}

TEST_CASE("precision requirements") {
  const auto spec = full_arc(p3);
  // open exponent of psi(8) = 1/64 at p = 3 is 4
  CHECK(required_precision(pw(2), spec, 8) == 4);
  CHECK(recommended_precision(pw(2), spec, 8) >= required_precision(pw(2), spec, 8));
  const auto L = required_precision(pw(2), spec, 50);
  CHECK_NOTHROW(delta_N(PAdicSample::from_residue(p3, L, 5), 50, pw(2), spec));
  CHECK_THROWS_AS(delta_N(PAdicSample::from_residue(p3, L - 1, 5), 50, pw(2), spec), PrecisionInsufficient);
}
