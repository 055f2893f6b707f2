#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "crossplace/approx_function.hpp"
#include "crossplace/farey.hpp"
#include "crossplace/padic.hpp"
#include "crossplace/rational.hpp"

namespace crossplace {

/// psi*(n) = p^-t with psi(n)/p < p^-t <= psi(n).
Rational psi_star(const ApproxFunction& psi, std::int64_t n, const Place& p);

/// Psi(N) = sum_{n <= N} n psi(n). Throws InvalidFunction when some psi(n) is irrational.
Rational big_psi(const ApproxFunction& psi, std::int64_t N);
double big_psi_value(const ApproxFunction& psi, std::int64_t N);

/// Least L resolving every strict threshold up to N: max over n <= N (not
/// filtered) of the open exponent s(n).
std::int64_t required_precision(const ApproxFunction& psi, const SourceSpec& spec, std::int64_t N);
/// t(N) + 3: two guard digits beyond the closed threshold.
std::int64_t recommended_precision(const ApproxFunction& psi, const SourceSpec& spec, std::int64_t N);

/// Per-n closed and open exponents at a prime, tabulated once.
class PadicThresholds {
 public:
  PadicThresholds(const ApproxFunction& psi, std::uint64_t p, std::int64_t max_n);

  std::int64_t max_n() const { return static_cast<std::int64_t>(closed_.size()) - 1; }
  std::int64_t closed(std::int64_t n) const { return closed_[static_cast<std::size_t>(n)]; }
  std::int64_t open(std::int64_t n) const { return open_[static_cast<std::size_t>(n)]; }
  std::uint64_t p() const { return p_; }

 private:
  std::uint64_t p_;
  std::vector<std::int64_t> closed_, open_;
};

using TargetPoint = std::variant<PAdicSample, Rational>;

struct SolutionRecord {
  std::int64_t n = 0;
  std::int64_t a = 0;
  // p-adic target: valuation of n*alpha - a; real target: circle distance |alpha - a/n|.
  std::variant<DistanceValuation, Rational> distance;
  double threshold = 0;  // psi(max(a, n))
  bool strict = false;   // distance < psi; otherwise only distance <= psi
};

struct DeltaResult {
  std::int64_t strict_count = 0;
  std::int64_t closed_count = 0;
  std::vector<SolutionRecord> records;

  std::int64_t boundary() const { return closed_count - strict_count; }
};

/// Counts pairs (a, n) with a/n in F_n^B, n <= N, solving the approximation
/// inequality at the target place, under both the strict and the closed
/// convention.
class DeltaCounter {
 public:
  DeltaCounter(ApproxFunction psi, SourceSpec spec, std::int64_t max_n);

  DeltaResult count(const TargetPoint& alpha, std::int64_t N, bool keep_records = true) const;
  /// (strict, closed) counts at each N of an increasing grid, in one pass.
  std::vector<std::pair<std::int64_t, std::int64_t>> count_prefixes(const TargetPoint& alpha,
                                                                    std::span<const std::int64_t> grid) const;

  const SourceSpec& spec() const { return spec_; }
  const ApproxFunction& psi() const { return psi_; }
  const std::optional<PadicThresholds>& thresholds() const { return thresholds_; }

 private:
  using Visit = std::function<void(std::int64_t n, std::int64_t a, bool strict,
                                   const std::variant<DistanceValuation, Rational>& d)>;
  void scan(const TargetPoint& alpha, std::int64_t N, const Visit& visit) const;
  void scan_padic(const PAdicSample& alpha, std::int64_t N, const Visit& visit) const;
  void scan_real(const Rational& alpha, std::int64_t N, const Visit& visit) const;

  ApproxFunction psi_;
  SourceSpec spec_;
  std::int64_t max_n_;
  SourceMembership member_;
  std::optional<PadicThresholds> thresholds_;
};

DeltaResult delta_N(const TargetPoint& alpha, std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec);

struct MomentOptions {
  std::int64_t integral_guard = 10'000;
  std::int64_t pair_guard = 300;
};

/// sum' phi^B(n) psi*(n) over n <= N, with each ball measure capped at 1.
Rational m1_exact(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec);
/// Sum of the Haar measures of the closed balls B(a/n, psi(n)) over every enumerated fraction.
Rational m1_via_integral(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                         const MomentOptions& opts = {});
/// Integral of the squared closed counter: sum over ordered pairs of the
/// measure of the intersection of their balls. Bucketed by threshold level.
Rational m2sq_exact(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                    const MomentOptions& opts = {});
/// Same quantity by the O(F^2) pair loop.
Rational m2sq_naive(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                    const MomentOptions& opts = {});
/// Off-diagonal pairs counted only when the centers are strictly closer than
/// the larger radius.
Rational m2sq_lemma_form(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                         const MomentOptions& opts = {});

struct MomentReport {
  std::int64_t N = 0;
  std::optional<Rational> Psi;
  double Psi_value = 0;
  Rational M1;
  Rational M2sq;
  double c1 = 0;  // M1 / sqrt(M2sq)
};

MomentReport moment_report(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                           const MomentOptions& opts = {});

struct PairCountReport {
  std::int64_t n = 0, m = 0;
  std::int64_t count = 0;       // pairs of distinct points
  std::int64_t coincident = 0;  // pairs with a/n == b/m, left out of count
  Rational bound;  // 4 n m max(psi*(n), psi*(m))
  bool within_bound = false;
  std::optional<Rational> diagonal_bound;  // n^2 psi*(n) when m == n
  bool within_diagonal_bound = true;
};

/// Pairs (a, b) in [1,n] x [1,m] with 0 < |a/n - b/m|_p < max(psi*(n), psi*(m)).
PairCountReport pair_count(std::int64_t n, std::int64_t m, const ApproxFunction& psi, const Place& p);

/// (c1 - c2)^2 for 0 <= c2 <= c1.
double paley_zygmund_prediction(const MomentReport& report, double c2);
/// With c2 = lambda c1: (1 - lambda)^2 M1^2 / M2sq, exactly.
Rational paley_zygmund_exact(const MomentReport& report, const Rational& lambda);

}  // namespace crossplace
