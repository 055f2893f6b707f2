#include "crossplace/hausdorff.hpp"

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

namespace {

constexpr int kProbeDepth = 60;

// Floor of v in double, trusted only when v is away from an integer.
std::optional<i64> safe_floor(long double v) {
  const long double f = std::floor(v);
  if (v - f < 1e-9L || f + 1 - v < 1e-9L) return std::nullopt;
  return static_cast<i64>(f);
}

}  // namespace

DimensionFunction::DimensionFunction(DimensionFamily family, Rational s, Rational sigma,
                                     std::vector<std::pair<double, double>> knots)
    : family_(family), s_(std::move(s)), sigma_(std::move(sigma)), knots_(std::move(knots)) {
  double prev = -1;
  for (int j = kProbeDepth; j >= 0; --j) {
    const double v = (*this)(std::ldexp(1.0, -j));
    if (v < prev) throw InvalidFunction("dimension function decreases near r=2^-" + std::to_string(j));
    prev = v;
  }
  for (int j = 1; j <= kProbeDepth; ++j) {
    const double x = std::ldexp(1.0, -j);
    const double fx = (*this)(x);
    if (fx > 0) doubling_ = std::max(doubling_, (*this)(2 * x) / fx);
  }
}

DimensionFunction DimensionFunction::power(const Rational& s) {
  if (s.sign() < 0) throw InvalidFunction("dimension exponent must be >= 0");
  return DimensionFunction(DimensionFamily::Power, s, Rational(0), {});
}

DimensionFunction DimensionFunction::power_log(const Rational& s, const Rational& sigma) {
  if (s.sign() <= 0) throw InvalidFunction("power-log dimension function needs s > 0");
  return DimensionFunction(DimensionFamily::PowerLog, s, sigma, {});
}

DimensionFunction DimensionFunction::table(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw InvalidFunction("empty dimension-function table");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].first <= 0 || knots[i].second < 0) throw InvalidFunction("table knots need r > 0, f >= 0");
    if (i > 0 && (knots[i].first <= knots[i - 1].first || knots[i].second < knots[i - 1].second)) {
      throw InvalidFunction("table knots must increase in r and not decrease in f");
    }
  }
  return DimensionFunction(DimensionFamily::Table, Rational(0), Rational(0), std::move(knots));
}

double DimensionFunction::operator()(double r) const {
  if (r <= 0) return family_ == DimensionFamily::Power && s_.is_zero() ? 1.0 : 0.0;
  switch (family_) {
    case DimensionFamily::Power:
      return s_.is_zero() ? 1.0 : std::pow(r, s_.to_double());
    case DimensionFamily::PowerLog:
      return std::pow(r, s_.to_double()) * std::pow(1.0 + std::fabs(std::log(r)), -sigma_.to_double());
    case DimensionFamily::Table: {
      const auto it = std::lower_bound(knots_.begin(), knots_.end(), r,
                                       [](const auto& k, double v) { return k.first < v; });
      if (it == knots_.end()) return knots_.back().second;
      const double x0 = it == knots_.begin() ? 0.0 : std::prev(it)->first;
      const double y0 = it == knots_.begin() ? 0.0 : std::prev(it)->second;
      return y0 + (it->second - y0) * (r - x0) / (it->first - x0);
    }
  }
  return 0;
}

double f_volume(const DimensionFunction& f, const Rational& r) {
  if (r.sign() <= 0) throw InvalidArgument("f-volume needs a positive radius");
  return f(r.to_double());
}

// ---------------------------------------------------------------------------

std::optional<double> CoverSumReport::total() const {
  if (!has_tail_bound || divergent || !tail_bound) return std::nullopt;
  return partial + *tail_bound;
}

CoverSumReport cover_sum(std::int64_t N, std::int64_t N_max, const ApproxFunction& psi, const DimensionFunction& f) {
  if (N < 1 || N > N_max) throw InvalidArgument("cover sum needs 1 <= N <= N_max");
  CoverSumReport r;
  r.N = N;
  r.N_max = N_max;
  r.rho = psi.value(N);
  const bool power_pair = psi.family() == ApproxFamily::PowerLaw && f.family() == DimensionFamily::Power;
  const bool exact = f.family() == DimensionFamily::Power && f.exponent().is_integer() &&
                     (psi.family() == ApproxFamily::Table ||
                      (psi.family() == ApproxFamily::PowerLaw && psi.exponent().is_integer()));
  long double partial = 0;
  Rational partial_exact(0);
  const i64 s_int = exact ? to_int64(f.exponent().num()) : 0;
  for (i64 n = N; n <= N_max; ++n) {
    long double term;
    if (f.family() == DimensionFamily::Power) {
      term = f.exponent().is_zero() ? 1.0L : std::exp(f.exponent().to_long_double() * psi.log_value(n));
    } else {
      term = f(psi.value(n));
    }
    partial += 2.0L * static_cast<long double>(n) * term;
    if (exact) {
      const Rational v = *psi.exact_value(n);
      Rational pw(1);
      for (i64 i = 0; i < s_int; ++i) pw *= v;
      partial_exact += Rational(2 * n) * pw;
    }
  }
  r.partial = static_cast<double>(partial);
  if (exact) r.partial_exact = partial_exact;
  if (power_pair) {
    r.has_tail_bound = true;
    const long double e = f.exponent().to_long_double() * psi.exponent().to_long_double();
    if (f.exponent() * psi.exponent() <= Rational(2)) {
      r.divergent = true;
    } else {
      // sum_{n > M} 2 n^(1-e) <= integral_M^inf 2 x^(1-e) dx
      r.tail_bound = static_cast<double>(2.0L * std::pow(static_cast<long double>(N_max), 2.0L - e) / (e - 2.0L));
    }
  }
  return r;
}

Rational jb_exponent(const Rational& tau) {
  if (tau < Rational(2)) {
    throw InvalidArgument("Jarnik-Besicovitch exponent needs tau >= 2 (got " + tau.to_string() + ")");
  }
  return Rational(2) / tau;
}

// ---------------------------------------------------------------------------
// Box counting

std::vector<std::int64_t> default_box_levels(const Place& target) {
  std::vector<i64> out;
  const i64 lo = target.is_prime() ? 4 : 6;
  const i64 hi = target.is_prime() ? 10 : 18;
  for (i64 l = lo; l <= hi; ++l) out.push_back(l);
  return out;
}

namespace {

struct Fractions {
  // numerators per denominator, for n in [1, max_n]
  std::vector<std::vector<i64>> numerators;
};

Fractions collect_fractions(const SourceSpec& spec, i64 max_n, unsigned workers) {
  Fractions f;
  f.numerators.resize(static_cast<std::size_t>(max_n) + 1);
  detail::parallel_for(static_cast<std::size_t>(max_n), workers, [&](std::size_t i) {
    const auto n = static_cast<i64>(i) + 1;
    f.numerators[n] = numerators_at_level(spec, n);
  });
  return f;
}

// Lowest box index meeting the open interval (c - r, c + r) at scale 1/M:
// floor(M (c - r)), decided exactly.
i64 lowest_box(const ApproxFunction& psi, i64 a, i64 n, u64 M) {
  const long double est = (static_cast<long double>(a) / n - std::exp(psi.log_value(n))) * M;
  if (const auto f = safe_floor(est)) return *f;
  // i <= M (c - r)  <=>  psi(n) <= c - i / M
  const Rational c(a, n);
  const Rational m(mpz_class(static_cast<unsigned long>(M)), mpz_class(1));
  auto fits = [&](i64 i) { return psi.compare(n, c - Rational(i) / m) <= 0; };
  auto i = static_cast<i64>(std::floor(est));
  while (fits(i + 1)) ++i;
  while (!fits(i)) --i;
  return i;
}

// Highest box index meeting (c - r, c + r): ceil(M (c + r)) - 1, decided exactly.
i64 highest_box(const ApproxFunction& psi, i64 a, i64 n, u64 M) {
  const long double est = (static_cast<long double>(a) / n + std::exp(psi.log_value(n))) * M;
  if (const auto f = safe_floor(est)) return *f;  // non-integer: ceil - 1 = floor
  // k >= M (c + r)  <=>  psi(n) <= k / M - c
  const Rational c(a, n);
  const Rational m(mpz_class(static_cast<unsigned long>(M)), mpz_class(1));
  auto covers = [&](i64 k) { return psi.compare(n, Rational(k) / m - c) <= 0; };
  auto k = static_cast<i64>(std::ceil(est));
  while (covers(k - 1)) --k;
  while (!covers(k)) ++k;
  return k - 1;
}

void count_real_scale(BoxScale& scale, const ApproxFunction& psi, const Fractions& fr) {
  const u64 M = u64{1} << scale.level;
  scale.boxes = M;
  std::vector<char> hit(M, 0);
  for (i64 n = scale.h0; n <= scale.h; ++n) {
    for (i64 a : fr.numerators[n]) {
      const i64 lo = lowest_box(psi, a, n, M);
      const i64 hi = highest_box(psi, a, n, M);
      if (hi - lo + 1 >= static_cast<i64>(M)) {
        std::fill(hit.begin(), hit.end(), 1);
        continue;
      }
      for (i64 i = lo; i <= hi; ++i) hit[arith::mod(i, M)] = 1;
    }
  }
  scale.count = static_cast<u64>(std::count(hit.begin(), hit.end(), 1));
}

void count_padic_scale(BoxScale& scale, const Fractions& fr, u64 p,
                       const std::vector<i64>& open_exp) {
  const u64 M = arith::checked_pow(p, static_cast<u64>(scale.level));
  scale.boxes = M;
  std::vector<char> hit(M, 0);
  for (i64 n = scale.h0; n <= scale.h; ++n) {
    if (fr.numerators[n].empty()) continue;
    const u64 inv = *arith::invmod(static_cast<u64>(n) % M, M);
    const i64 s = std::max<i64>(open_exp[n], 0);
    for (i64 a : fr.numerators[n]) {
      const u64 r = arith::mulmod(arith::mod(a, M), inv, M);
      if (s >= scale.level) {
        hit[r] = 1;
        continue;
      }
      // the ball {v(x - a/n) >= s} is the union of the depth-l cylinders over r mod p^s
      const u64 step = arith::checked_pow(p, static_cast<u64>(s));
      for (u64 x = r % step; x < M; x += step) hit[x] = 1;
    }
  }
  scale.count = static_cast<u64>(std::count(hit.begin(), hit.end(), 1));
}

}  // namespace

BoxCountReport box_count(const Rational& tau, const SourceSpec& spec, const std::vector<std::int64_t>& levels,
                         const BoxWindow& window, unsigned workers) {
  BoxCountReport report;
  report.tau = tau;
  report.target_dim = jb_exponent(tau).to_double();
  if (levels.empty()) throw DegenerateWindow("no box-count levels given");
  const auto psi = ApproxFunction::power_law(tau);
  const bool prime = spec.target.is_prime();
  const double base = prime ? static_cast<double>(spec.target.p()) : 2.0;
  const double t = tau.to_double();

  i64 max_h = 1;
  for (i64 level : levels) {
    if (level < 1) throw InvalidArgument("box-count levels must be >= 1");
    if (!prime && level > 30) throw BudgetExceeded("dyadic level above 30 needs too many boxes");
    BoxScale s;
    s.level = level;
    s.radius = std::pow(base, -static_cast<double>(level));
    if (window.fixed) {
      s.h0 = window.fixed->first;
      s.h = window.fixed->second;
    } else {
      s.h0 = std::max<i64>(1, static_cast<i64>(std::floor(window.lower_factor * std::pow(s.radius, -1.0 / t))));
      s.h = static_cast<i64>(std::ceil(window.upper_factor * std::pow(s.radius, -window.upper_power / t)));
    }
    if (s.h0 < 1 || s.h < s.h0) throw InvalidArgument("box-count height window must satisfy 1 <= H0 <= H");
    max_h = std::max(max_h, s.h);
    report.scales.push_back(s);
  }
  if (max_h > 200'000) throw BudgetExceeded("height window up to " + std::to_string(max_h) + " is too large");

  const Fractions fr = collect_fractions(spec, max_h, workers);
  std::vector<i64> open_exp;
  if (prime) {
    open_exp.assign(static_cast<std::size_t>(max_h) + 1, 0);
    for (i64 n = 1; n <= max_h; ++n) {
      if (!fr.numerators[n].empty()) open_exp[n] = psi.open_exponent(n, spec.target.p());
    }
  }
  detail::parallel_for(report.scales.size(), workers, [&](std::size_t i) {
    if (prime) {
      count_padic_scale(report.scales[i], fr, spec.target.p(), open_exp);
    } else {
      count_real_scale(report.scales[i], psi, fr);
    }
  });

  // Regression window: drop sparse scales and saturated ones (unless every scale saturates).
  const bool all_saturated = std::all_of(report.scales.begin(), report.scales.end(),
                                         [](const BoxScale& s) { return s.count == s.boxes; });
  std::vector<double> x, y;
  for (auto& s : report.scales) {
    s.used = s.count >= kSparseBoxes && (all_saturated || s.count < s.boxes);
    if (!s.used) continue;
    x.push_back(static_cast<double>(s.level) * std::log(base));
    y.push_back(std::log(static_cast<double>(s.count)));
  }
  if (x.size() < 3) {
    throw DegenerateWindow("only " + std::to_string(x.size()) + " usable box-count scales (need 3)");
  }
  const auto fit = detail::fit_line(x, y);
  report.fit = {fit.slope, fit.intercept, fit.residual, fit.r_squared};
  return report;
}

}  // namespace crossplace
