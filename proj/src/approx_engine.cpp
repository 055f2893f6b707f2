#include "crossplace/approx_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "crossplace/arith.hpp"
#include "crossplace/errors.hpp"

namespace crossplace {

using arith::i64;
using arith::u64;

namespace {

void require_prime_target(const SourceSpec& spec, const char* what) {
  if (!spec.target.is_prime()) throw UnsupportedCombination(std::string(what) + " needs a prime target place");
}

std::optional<u64> try_pow(u64 p, i64 e) {
  try {
    return arith::checked_pow(p, static_cast<u64>(e));
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

std::vector<u64> power_table(u64 p, i64 top) {
  std::vector<u64> pw(static_cast<std::size_t>(top) + 1, 1);
  for (i64 e = 1; e <= top; ++e) pw[e] = arith::checked_pow(p, static_cast<u64>(e));
  return pw;
}

i64 mpz_valuation_p(mpz_class m, u64 p) {
  const mpz_class pz(static_cast<unsigned long>(p));
  i64 v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), pz.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), pz.get_mpz_t());
    ++v;
  }
  return v;
}

// sum_t weight[t] * p^-t, exactly.
Rational weighted_power_sum(const std::map<i64, mpz_class>& weight, u64 p) {
  Rational total(0);
  for (const auto& [t, w] : weight) {
    if (w == 0) continue;
    total += Rational(w, mpz_class(1)) * Rational::power(static_cast<i64>(p), -t);
  }
  return total;
}

// Fractions of F_n^B for n <= N with their capped closed exponents and
// p-adic centers a * n^-1 modulo p^depth.
struct CenteredFraction {
  i64 t;
  u64 center;
};

std::vector<CenteredFraction> centered_fractions(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                                                 i64 extra_depth, i64& top_level) {
  const u64 p = spec.target.p();
  const PadicThresholds th(psi, p, N);
  top_level = 0;
  for (i64 n = 1; n <= N; ++n) {
    if (!spec.excludes(n)) top_level = std::max(top_level, std::max<i64>(th.closed(n), 0));
  }
  const u64 modulus = arith::checked_pow(p, static_cast<u64>(top_level + extra_depth));
  std::vector<CenteredFraction> out;
  for (i64 n = 1; n <= N; ++n) {
    const auto numerators = numerators_at_level(spec, n);
    if (numerators.empty()) continue;
    const u64 inv = *arith::invmod(static_cast<u64>(n) % modulus, modulus);
    const i64 t = std::max<i64>(th.closed(n), 0);
    for (i64 a : numerators) out.push_back({t, arith::mulmod(arith::mod(a, modulus), inv, modulus)});
  }
  return out;
}

void check_pair_guard(std::int64_t N, const MomentOptions& opts) {
  if (N > opts.pair_guard) {
    throw BudgetExceeded("second moment at N=" + std::to_string(N) + " exceeds the pair-enumeration guard " +
                         std::to_string(opts.pair_guard));
  }
}

// Ordered pairs (i, j) contribute p^-max(t_i, t_j) when their centers agree
// modulo p^(min(t_i, t_j) + offset). offset 0 is the true ball intersection.
Rational m2_bucketed(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec, i64 offset) {
  const u64 p = spec.target.p();
  i64 top = 0;
  const auto fracs = centered_fractions(N, psi, spec, offset, top);
  const auto pw = power_table(p, top + offset);
  std::map<i64, std::unordered_map<u64, i64>> buckets;
  for (const auto& f : fracs) ++buckets[f.t][f.center % pw[f.t + offset]];
  std::map<i64, mpz_class> weight;
  for (const auto& f : fracs) {
    i64 acc = 1;
    for (const auto& [level, bucket] : buckets) {
      if (level > f.t) break;
      const auto it = bucket.find(f.center % pw[level + offset]);
      const i64 hits = it == bucket.end() ? 0 : it->second;
      acc += level < f.t ? 2 * hits : hits - 1;
    }
    weight[f.t] += static_cast<long>(acc);
  }
  return weighted_power_sum(weight, p);
}

}  // namespace

// ---------------------------------------------------------------------------

Rational psi_star(const ApproxFunction& psi, std::int64_t n, const Place& p) {
  if (!p.is_prime()) throw InvalidArgument("psi_star needs a prime place");
  return Rational::power(static_cast<i64>(p.p()), -psi.closed_exponent(n, p.p()));
}

Rational big_psi(const ApproxFunction& psi, std::int64_t N) {
  if (N < 1) throw InvalidArgument("big_psi needs N >= 1");
  Rational total(0);
  for (i64 n = 1; n <= N; ++n) {
    const auto v = psi.exact_value(n);
    if (!v) throw InvalidFunction("psi(" + std::to_string(n) + ") is irrational; Psi has no exact value");
    total += Rational(n) * *v;
  }
  return total;
}

double big_psi_value(const ApproxFunction& psi, std::int64_t N) {
  if (N < 1) throw InvalidArgument("big_psi needs N >= 1");
  long double total = 0;
  for (i64 n = 1; n <= N; ++n) total += static_cast<long double>(n) * std::exp(psi.log_value(n));
  return static_cast<double>(total);
}

namespace {

i64 last_counted(const SourceSpec& spec, std::int64_t N) {
  i64 n = N;
  while (n > 1 && spec.excludes(n)) --n;
  return n;
}

}  // namespace

std::int64_t required_precision(const ApproxFunction& psi, const SourceSpec& spec, std::int64_t N) {
  require_prime_target(spec, "required_precision");
  return std::max<i64>(1, psi.open_exponent(last_counted(spec, N), spec.target.p()));
}

std::int64_t recommended_precision(const ApproxFunction& psi, const SourceSpec& spec, std::int64_t N) {
  require_prime_target(spec, "recommended_precision");
  return std::max<i64>(psi.closed_exponent(last_counted(spec, N), spec.target.p()), 0) + 3;
}

PadicThresholds::PadicThresholds(const ApproxFunction& psi, std::uint64_t p, std::int64_t max_n) : p_(p) {
  if (max_n < 1) throw InvalidArgument("threshold table needs N >= 1");
  closed_.assign(static_cast<std::size_t>(max_n) + 1, 0);
  open_.assign(static_cast<std::size_t>(max_n) + 1, 0);
  for (i64 n = 1; n <= max_n; ++n) {
    const i64 t = psi.closed_exponent(n, p);
    closed_[n] = t;
    open_[n] = psi.compare(n, Rational::power(static_cast<i64>(p), -t)) == 0 ? t + 1 : t;
  }
}

// ---------------------------------------------------------------------------
// DeltaCounter

DeltaCounter::DeltaCounter(ApproxFunction psi, SourceSpec spec, std::int64_t max_n)
    : psi_(std::move(psi)), spec_(std::move(spec)), max_n_(max_n), member_(spec_.ball) {
  if (max_n < 1) throw InvalidArgument("delta_N needs N >= 1");
  if (spec_.target.is_prime()) {
    if (!spec_.coprimality_filter) {
      throw UnsupportedCombination("a prime target requires the coprimality filter on denominators");
    }
    thresholds_.emplace(psi_, spec_.target.p(), max_n);
  }
}

void DeltaCounter::scan(const TargetPoint& alpha, std::int64_t N, const Visit& visit) const {
  if (N < 1 || N > max_n_) throw InvalidArgument("N outside the counter's range");
  if (const auto* s = std::get_if<PAdicSample>(&alpha)) {
    if (!spec_.target.is_prime() || s->place() != spec_.target) {
      throw UnsupportedCombination("sample place " + s->place().to_string() + " does not match target " +
                                   spec_.target.to_string());
    }
    scan_padic(*s, N, visit);
  } else {
    if (spec_.target.is_prime()) throw UnsupportedCombination("real target point given for a prime target");
    scan_real(std::get<Rational>(alpha), N, visit);
  }
}

void DeltaCounter::scan_padic(const PAdicSample& alpha, std::int64_t N, const Visit& visit) const {
  const u64 p = spec_.target.p();
  const i64 L = alpha.precision();
  const auto& th = *thresholds_;
  if (const auto P = try_pow(p, L)) {
    const auto pw = power_table(p, L);
    const u64 ar = alpha.residue_u64();
    for (i64 n = 1; n <= N; ++n) {
      if (spec_.excludes(n)) continue;
      const i64 s = std::max<i64>(th.open(n), 0);
      if (s > L) throw PrecisionInsufficient(n, s, L);
      const u64 M = pw[std::max<i64>(th.closed(n), 0)];
      const u64 rn = arith::mulmod(static_cast<u64>(n) % *P, ar, *P);
      const u64 base = rn % M;
      for (u64 a = base == 0 ? M : base; a <= static_cast<u64>(n); a += M) {
        const auto ai = static_cast<i64>(a);
        if (std::gcd(ai, n) != 1 || !member_.contains(ai, n)) continue;
        const u64 diff = (rn + *P - a % *P) % *P;
        const DistanceValuation dv = diff == 0 ? DistanceValuation{L, true}
                                               : DistanceValuation{arith::valuation(static_cast<i64>(diff), p), false};
        visit(n, ai, dv.value >= s, dv);
      }
    }
    return;
  }
  const mpz_class P = alpha.modulus();
  const mpz_class ar = alpha.residue();
  const mpz_class pz(static_cast<unsigned long>(p));
  for (i64 n = 1; n <= N; ++n) {
    if (spec_.excludes(n)) continue;
    const i64 s = std::max<i64>(th.open(n), 0);
    if (s > L) throw PrecisionInsufficient(n, s, L);
    mpz_class M;
    mpz_pow_ui(M.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(std::max<i64>(th.closed(n), 0)));
    mpz_class rn = mpz_class(static_cast<long>(n)) * ar;
    mpz_fdiv_r(rn.get_mpz_t(), rn.get_mpz_t(), P.get_mpz_t());
    mpz_class base;
    mpz_fdiv_r(base.get_mpz_t(), rn.get_mpz_t(), M.get_mpz_t());
    const mpz_class nz(static_cast<long>(n));
    if (M > nz && (base == 0 || base > nz)) continue;
    const i64 step = M > nz ? n + 1 : to_int64(M);
    for (i64 a = base == 0 ? step : to_int64(base); a <= n; a += step) {
      if (std::gcd(a, n) != 1 || !member_.contains(a, n)) continue;
      mpz_class diff = rn - a;
      mpz_fdiv_r(diff.get_mpz_t(), diff.get_mpz_t(), P.get_mpz_t());
      const DistanceValuation dv = diff == 0 ? DistanceValuation{L, true} : DistanceValuation{mpz_valuation_p(diff, p), false};
      visit(n, a, dv.value >= s, dv);
    }
  }
}

void DeltaCounter::scan_real(const Rational& alpha, std::int64_t N, const Visit& visit) const {
  if (alpha < Rational(0) || alpha >= Rational(1)) throw InvalidArgument("real target point must lie in [0,1)");
  const double x = alpha.to_double();
  for (i64 n = 1; n <= N; ++n) {
    const double w = static_cast<double>(n) * psi_.value(n);
    const double center = x * static_cast<double>(n);
    i64 lo = static_cast<i64>(std::floor(center - w)) - 1;
    i64 hi = static_cast<i64>(std::ceil(center + w)) + 1;
    if (hi - lo + 1 >= n) {
      lo = 1;
      hi = n;
    }
    for (i64 k = lo; k <= hi; ++k) {
      const i64 a = static_cast<i64>(arith::mod(k - 1, static_cast<u64>(n))) + 1;
      if (std::gcd(a, n) != 1 || !member_.contains(a, n)) continue;
      const Rational d = (alpha - Rational(a, n)).frac();
      const Rational gap = std::min(d, Rational(1) - d);
      const int c = psi_.compare(n, gap);
      if (c >= 0) visit(n, a, c > 0, gap);
    }
  }
}

DeltaResult DeltaCounter::count(const TargetPoint& alpha, std::int64_t N, bool keep_records) const {
  DeltaResult out;
  scan(alpha, N, [&](i64 n, i64 a, bool strict, const std::variant<DistanceValuation, Rational>& d) {
    ++out.closed_count;
    if (strict) ++out.strict_count;
    if (keep_records) out.records.push_back({n, a, d, psi_.value(std::max(a, n)), strict});
  });
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> DeltaCounter::count_prefixes(
    const TargetPoint& alpha, std::span<const std::int64_t> grid) const {
  if (grid.empty()) return {};
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("N grid must be increasing");
  const i64 top = grid.back();
  std::vector<i64> strict(static_cast<std::size_t>(top) + 1, 0), closed(static_cast<std::size_t>(top) + 1, 0);
  scan(alpha, top, [&](i64 n, i64, bool is_strict, const auto&) {
    ++closed[n];
    if (is_strict) ++strict[n];
  });
  std::vector<std::pair<i64, i64>> out;
  i64 s = 0, c = 0, n = 0;
  for (i64 g : grid) {
    while (n < g) {
      ++n;
      s += strict[n];
      c += closed[n];
    }
    out.emplace_back(s, c);
  }
  return out;
}

DeltaResult delta_N(const TargetPoint& alpha, std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec) {
  return DeltaCounter(psi, spec, N).count(alpha, N);
}

// ---------------------------------------------------------------------------
// Moments

Rational m1_exact(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec) {
  require_prime_target(spec, "m1_exact");
  if (N < 1) throw InvalidArgument("m1_exact needs N >= 1");
  const u64 p = spec.target.p();
  std::map<i64, mpz_class> weight;
  for (i64 n = 1; n <= N; ++n) {
    if (spec.excludes(n)) continue;
    const i64 phi_b = restricted_totient(spec, n);
    if (phi_b == 0) continue;
    weight[std::max<i64>(psi.closed_exponent(n, p), 0)] += static_cast<long>(phi_b);
  }
  return weighted_power_sum(weight, p);
}

Rational m1_via_integral(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                         const MomentOptions& opts) {
  require_prime_target(spec, "m1_via_integral");
  if (N < 1) throw InvalidArgument("m1_via_integral needs N >= 1");
  if (N > opts.integral_guard) {
    throw BudgetExceeded("fraction enumeration at N=" + std::to_string(N) + " exceeds the guard " +
                         std::to_string(opts.integral_guard));
  }
  const auto p = static_cast<i64>(spec.target.p());
  Rational total(0);
  for (i64 n = 1; n <= N; ++n) {
    const auto numerators = numerators_at_level(spec, n);
    if (numerators.empty()) continue;
    // radius psi(n) closed ball = {v >= k} with k the least exponent whose sphere fits inside
    i64 k = 0;
    while (!psi.at_least(n, Rational::power(p, -k))) ++k;
    for (i64 a : numerators) total += Ball::padic(spec.target, Rational(a, n), k).measure();
  }
  return total;
}

Rational m2sq_exact(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec, const MomentOptions& opts) {
  require_prime_target(spec, "m2sq_exact");
  check_pair_guard(N, opts);
  return m2_bucketed(N, psi, spec, 0);
}

Rational m2sq_lemma_form(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                         const MomentOptions& opts) {
  require_prime_target(spec, "m2sq_lemma_form");
  check_pair_guard(N, opts);
  return m2_bucketed(N, psi, spec, 1);
}

Rational m2sq_naive(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec, const MomentOptions& opts) {
  require_prime_target(spec, "m2sq_naive");
  check_pair_guard(N, opts);
  const u64 p = spec.target.p();
  i64 top = 0;
  const auto fracs = centered_fractions(N, psi, spec, 0, top);
  const auto pw = power_table(p, top);
  std::map<i64, mpz_class> weight;
  for (std::size_t i = 0; i < fracs.size(); ++i) {
    weight[fracs[i].t] += 1;
    for (std::size_t j = i + 1; j < fracs.size(); ++j) {
      const u64 m = pw[std::min(fracs[i].t, fracs[j].t)];
      if (fracs[i].center % m == fracs[j].center % m) weight[std::max(fracs[i].t, fracs[j].t)] += 2;
    }
  }
  return weighted_power_sum(weight, p);
}

MomentReport moment_report(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                           const MomentOptions& opts) {
  MomentReport r;
  r.N = N;
  r.M2sq = m2sq_exact(N, psi, spec, opts);  // guards first
  try {
    r.Psi = big_psi(psi, N);
  } catch (const InvalidFunction&) {
    r.Psi.reset();
  }
  r.Psi_value = big_psi_value(psi, N);
  r.M1 = m1_exact(N, psi, spec);
  r.c1 = r.M2sq.is_zero() ? 0.0 : r.M1.to_double() / std::sqrt(r.M2sq.to_double());
  return r;
}

PairCountReport pair_count(std::int64_t n, std::int64_t m, const ApproxFunction& psi, const Place& place) {
  if (!place.is_prime()) throw InvalidArgument("pair_count needs a prime place");
  const u64 p = place.p();
  if (n < 1 || m < 1) throw InvalidArgument("pair_count needs n, m >= 1");
  if (static_cast<u64>(n) % p == 0 || static_cast<u64>(m) % p == 0) {
    throw InvalidArgument("pair_count needs p not dividing n and m");
  }
  const i64 tn = psi.closed_exponent(n, p);
  const i64 tm = psi.closed_exponent(m, p);
  const i64 need = std::min(tn, tm) + 1;  // |a/n - b/m| < p^-min(t) <=> v(am - bn) >= min(t) + 1
  const auto modulus = need <= 0 ? std::optional<u64>(1) : try_pow(p, need);
  PairCountReport r;
  r.n = n;
  r.m = m;
  for (i64 a = 1; a <= n; ++a) {
    for (i64 b = 1; b <= m; ++b) {
      const i64 diff = a * m - b * n;
      if (diff == 0) {  // same point; for n == m this is a == b
        if (n != m) ++r.coincident;
        continue;
      }
      const bool close = modulus ? arith::mod(diff, *modulus) == 0 : diff == 0;
      if (close) ++r.count;
    }
  }
  r.bound = Rational(4 * n * m) * Rational::power(static_cast<i64>(p), -std::min(tn, tm));
  r.within_bound = Rational(r.count) <= r.bound;
  if (n == m) {
    r.diagonal_bound = Rational(n * n) * Rational::power(static_cast<i64>(p), -tn);
    r.within_diagonal_bound = Rational(r.count) <= *r.diagonal_bound;
  }
  return r;
}

double paley_zygmund_prediction(const MomentReport& report, double c2) {
  if (c2 < 0 || c2 > report.c1) throw InvalidArgument("Paley-Zygmund needs 0 <= c2 <= c1");
  const double d = report.c1 - c2;
  return d * d;
}

Rational paley_zygmund_exact(const MomentReport& report, const Rational& lambda) {
  if (lambda < Rational(0) || lambda > Rational(1)) throw InvalidArgument("Paley-Zygmund needs 0 <= lambda <= 1");
  if (report.M2sq.is_zero()) return Rational(0);
  const Rational d = Rational(1) - lambda;
  return d * d * report.M1 * report.M1 / report.M2sq;
}

}  // namespace crossplace
