#include "crossplace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crossplace/arith.hpp"
#include "crossplace/errors.hpp"
#include "fit.hpp"
#include "parallel.hpp"

namespace crossplace {

using arith::i64;
using arith::u64;
using detail::parallel_for;

namespace {

u64 splitmix(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

u64 residue_space(const Place& target, i64 precision) {
  return arith::checked_pow(target.p(), static_cast<u64>(precision));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(splitmix(seed) ^ splitmix(~stream)) {}

std::uint64_t CounterRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  u64 z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::uniform(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform bound must be >= 1");
  const u64 limit = ~u64{0} - (~u64{0} % bound);
  u64 x = next();
  while (x >= limit) x = next();
  return x % bound;
}

// ---------------------------------------------------------------------------

void TrialConfig::validate() const {
  if (sample_count < 1) throw InvalidArgument("sample_count must be >= 1");
  if (n_grid.empty()) throw InvalidArgument("N grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw InvalidArgument("N grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("N grid must be strictly increasing");
  }
  if (precision < 1) throw InvalidArgument("precision must be >= 1");
  if (!target().is_prime() && precision > 62) throw InvalidArgument("dyadic resolution must be <= 62");
  if (mode == SamplingMode::Exhaustive && !target().is_prime()) {
    throw UnsupportedCombination("exhaustive mode needs a prime target");
  }
}

bool TrialConfig::exhaustive() const {
  if (!target().is_prime() || mode == SamplingMode::Sampled) return false;
  if (mode == SamplingMode::Exhaustive) return true;
  try {
    return residue_space(target(), precision) <= kExhaustiveLimit;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

TargetPoint sample_target(const Place& target, std::int64_t precision, CounterRng& rng) {
  if (precision < 1) throw InvalidArgument("sample precision must be >= 1");
  if (target.is_prime()) {
    std::vector<u64> digits(static_cast<std::size_t>(precision));
    for (auto& d : digits) d = rng.uniform(target.p());
    return PAdicSample(target, std::move(digits));
  }
  if (precision > 62) throw InvalidArgument("dyadic resolution must be <= 62");
  const u64 scale = u64{1} << precision;
  return Rational(mpz_class(static_cast<unsigned long>(rng.uniform(scale))),
                  mpz_class(static_cast<unsigned long>(scale)));
}

void for_each_residue(const Place& target, std::int64_t precision, const std::function<void(const PAdicSample&)>& fn) {
  const u64 total = residue_space(target, precision);
  if (total > kExhaustiveLimit) throw BudgetExceeded("residue space " + std::to_string(total) + " is too large to enumerate");
  for (u64 r = 0; r < total; ++r) {
    fn(PAdicSample::from_residue(target, precision, mpz_class(static_cast<unsigned long>(r))));
  }
}

ExhaustiveMoments exhaustive_moments(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                                     std::int64_t precision, unsigned workers) {
  const u64 total = residue_space(spec.target, precision);
  if (total > kExhaustiveLimit) throw BudgetExceeded("residue space " + std::to_string(total) + " is too large to enumerate");
  const DeltaCounter counter(psi, spec, N);
  std::vector<i64> closed(total), strict(total);
  parallel_for(total, workers, [&](std::size_t r) {
    const auto alpha = PAdicSample::from_residue(spec.target, precision, mpz_class(static_cast<unsigned long>(r)));
    const auto res = counter.count(alpha, N, false);
    closed[r] = res.closed_count;
    strict[r] = res.strict_count;
  });
  mpz_class sum = 0, sum_sq = 0, sum_strict = 0;
  for (u64 r = 0; r < total; ++r) {
    sum += static_cast<long>(closed[r]);
    sum_sq += mpz_class(static_cast<long>(closed[r])) * closed[r];
    sum_strict += static_cast<long>(strict[r]);
  }
  const mpz_class den(static_cast<unsigned long>(total));
  return {N, precision, Rational(sum, den), Rational(sum_sq, den), Rational(sum_strict, den), std::move(closed)};
}

std::string to_string(Verdict v) {
  return v == Verdict::GrowthConsistent ? "growth-consistent" : "saturation-consistent";
}

// ---------------------------------------------------------------------------

DichotomyReport run_dichotomy(const TrialConfig& config) {
  config.validate();
  DichotomyReport report;
  report.exhaustive = config.exhaustive();
  const i64 top = config.n_grid.back();
  const DeltaCounter counter(config.psi, config.spec, top);
  const u64 samples = report.exhaustive ? residue_space(config.target(), config.precision)
                                        : static_cast<u64>(config.sample_count);
  report.samples = static_cast<i64>(samples);
  report.counts.resize(samples);
  parallel_for(samples, config.workers, [&](std::size_t i) {
    TargetPoint alpha = [&]() -> TargetPoint {
      if (report.exhaustive) {
        return PAdicSample::from_residue(config.target(), config.precision, mpz_class(static_cast<unsigned long>(i)));
      }
      CounterRng rng(config.seed, i);
      return sample_target(config.target(), config.precision, rng);
    }();
    report.counts[i] = counter.count_prefixes(alpha, config.n_grid);
  });

  const auto count = static_cast<double>(samples);
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    DichotomyRow row;
    row.N = config.n_grid[g];
    double sum = 0, sum_sq = 0, sum_closed = 0;
    std::array<i64, 3> tails{};
    mpz_class exact = 0;
    for (const auto& per_sample : report.counts) {
      const auto [s, c] = per_sample[g];
      sum += static_cast<double>(s);
      sum_sq += static_cast<double>(s) * static_cast<double>(s);
      sum_closed += static_cast<double>(c);
      exact += static_cast<long>(s);
      for (std::size_t k = 0; k < kTailLevels.size(); ++k) {
        if (s >= kTailLevels[k]) ++tails[k];
      }
    }
    row.mean = sum / count;
    row.mean_closed = sum_closed / count;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - count * row.mean * row.mean) / (count - 1)) : 0.0;
    row.std_error = std::sqrt(var / count);
    for (std::size_t k = 0; k < kTailLevels.size(); ++k) row.tail_fraction[k] = static_cast<double>(tails[k]) / count;
    try {
      row.Psi = big_psi(config.psi, row.N);
    } catch (const InvalidFunction&) {
      row.Psi.reset();
    }
    row.Psi_value = big_psi_value(config.psi, row.N);
    if (report.exhaustive) row.exact_mean = Rational(exact, mpz_class(static_cast<unsigned long>(samples)));
    report.rows.push_back(row);
  }

  std::vector<double> x, y;
  double num = 0, den = 0;
  for (const auto& r : report.rows) {
    x.push_back(std::log(static_cast<double>(r.N)));
    y.push_back(r.mean);
    num += r.mean * r.Psi_value;
    den += r.Psi_value * r.Psi_value;
  }
  const auto fit = detail::fit_line(x, y);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.r_squared = fit.r_squared;
  report.fitted_c = den > 0 ? num / den : 0.0;

  // Growth needs a clean positive trend, a visible rise and tracking of Psi on the upper grid.
  bool tracks = report.fitted_c > 0;
  for (std::size_t g = report.rows.size() / 2; g < report.rows.size(); ++g) {
    const double predicted = report.fitted_c * report.rows[g].Psi_value;
    const double mean = report.rows[g].mean;
    if (mean < 0.1 * predicted || mean > 10.0 * predicted) tracks = false;
  }
  const double rise = report.rows.back().mean - report.rows.front().mean;
  const bool growth = report.rows.size() >= 2 && fit.slope > 0 && fit.r_squared >= 0.9 && rise >= 0.5 && tracks;
  report.verdict = growth ? Verdict::GrowthConsistent : Verdict::SaturationConsistent;
  return report;
}

PaleyZygmundReport run_paley_zygmund(const TrialConfig& config, const std::vector<Rational>& lambdas,
                                     const MomentOptions& opts) {
  config.validate();
  if (!config.target().is_prime()) throw UnsupportedCombination("Paley-Zygmund check needs a prime target");
  const i64 N = config.n_grid.back();
  PaleyZygmundReport out;
  out.precision = config.precision;
  out.moments = moment_report(N, config.psi, config.spec, opts);
  const auto ex = exhaustive_moments(N, config.psi, config.spec, config.precision, config.workers);
  if (!(ex.mean_closed == out.moments.M1)) {
    throw IdentityFailure("exhaustive mean " + ex.mean_closed.to_string() + " differs from M1 " +
                          out.moments.M1.to_string());
  }
  if (!(ex.mean_sq_closed == out.moments.M2sq)) {
    throw IdentityFailure("exhaustive mean square " + ex.mean_sq_closed.to_string() + " differs from M2^2 " +
                          out.moments.M2sq.to_string());
  }
  const mpz_class total(static_cast<unsigned long>(ex.closed_counts.size()));
  out.all_hold = true;
  for (const auto& lambda : lambdas) {
    PaleyZygmundRow row;
    row.lambda = lambda;
    row.c2 = lambda.to_double() * out.moments.c1;
    row.predicted = paley_zygmund_exact(out.moments, lambda);
    const Rational threshold = lambda * out.moments.M1;  // c2 * M2
    long hits = 0;
    for (i64 c : ex.closed_counts) {
      if (Rational(c) >= threshold) ++hits;
    }
    row.empirical = Rational(mpz_class(hits), total);
    row.holds = row.empirical >= row.predicted;
    out.all_hold = out.all_hold && row.holds;
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool check_translate_partition(std::uint64_t p1, std::int64_t k, std::uint64_t p2, std::int64_t l) {
  if (!arith::is_prime(p1) || !arith::is_prime(p2) || p1 == p2) {
    throw InvalidArgument("translate partition needs two distinct primes");
  }
  if (k < 0 || l < 0) throw InvalidArgument("translate partition needs k, l >= 0");
  const u64 m = arith::checked_pow(p2, static_cast<u64>(l));
  if (m > kExhaustiveLimit) throw BudgetExceeded("p2^l exceeds the exhaustive limit");
  const u64 shift = arith::powmod(p1, static_cast<u64>(k), m);
  std::vector<bool> seen(m, false);
  for (u64 z = 0; z < m; ++z) {
    const u64 r = arith::mulmod(z, shift, m);
    if (seen[r]) return false;
    seen[r] = true;
  }
  return true;
}

ReductionResult reduction_transform(const Rational& x, const Ball& source) {
  if (!source.is_padic()) throw UnsupportedCombination("reduction transform needs a p-adic source ball");
  const auto& b = source.as_padic();
  const Rational translated = x - b.center;
  return {translated, translated / Rational::power(static_cast<i64>(b.place.p()), b.k)};
}

std::pair<std::int64_t, std::int64_t> translated_counts(const Rational& x, const Ball& source, std::int64_t N,
                                                        const ApproxFunction& psi) {
  if (!source.is_padic()) throw UnsupportedCombination("translated counts need a p-adic source ball");
  if (N < 1) throw InvalidArgument("translated counts need N >= 1");
  const auto& b = source.as_padic();
  const i64 s = to_int64(b.center.den());
  const Ball centered = Ball::padic(b.place, Rational(0), b.k);
  const u64 p = b.place.p();

  auto window = [](const Rational& point, i64 d, double radius) {
    const double c = point.to_double() * static_cast<double>(d);
    const double w = radius * static_cast<double>(d);
    return std::pair{static_cast<i64>(std::floor(c - w)) - 1, static_cast<i64>(std::ceil(c + w)) + 1};
  };

  // Fractions q = c/d in B; q - r/s has denominator dividing lcm(d, s), so d <= s N.
  i64 lhs = 0;
  for (i64 d = 1; d <= s * N; ++d) {
    if (d % static_cast<i64>(p) == 0) continue;
    const double radius = psi.value(std::max<i64>(1, (d + s - 1) / s));
    const auto [lo, hi] = window(x, d, radius);
    for (i64 c = lo; c <= hi; ++c) {
      if (std::gcd(c, d) != 1) continue;
      const Rational q(c, d);
      if (!source.contains(q)) continue;
      const Rational u = q - b.center;
      if (u.den() > N) continue;
      const i64 m = to_int64(u.den());
      if (psi.compare(m, (x - q).abs()) > 0) ++lhs;
    }
  }
  // Fractions u = c/m in the centered ball with m <= N.
  const Rational shifted = x - b.center;
  i64 rhs = 0;
  for (i64 m = 1; m <= N; ++m) {
    if (m % static_cast<i64>(p) == 0) continue;
    const auto [lo, hi] = window(shifted, m, psi.value(m));
    for (i64 c = lo; c <= hi; ++c) {
      if (std::gcd(c, m) != 1) continue;
      const Rational u(c, m);
      if (!centered.contains(u)) continue;
      if (psi.compare(m, (shifted - u).abs()) > 0) ++rhs;
    }
  }
  return {lhs, rhs};
}

}  // namespace crossplace
