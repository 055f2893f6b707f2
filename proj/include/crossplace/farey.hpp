#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "crossplace/padic.hpp"
#include "crossplace/place.hpp"
#include "crossplace/rational.hpp"

namespace crossplace {

/// Where approximating fractions come from (the source ball) and where the
/// approximation is measured (the target place).
struct SourceSpec {
  Ball ball;
  Place target;
  bool coprimality_filter = true;  // drop n divisible by the target prime

  /// Validates that the ball's place differs from the target.
  static SourceSpec make(const Ball& ball, const Place& target, bool coprimality_filter = true);

  /// True when the target filter removes denominator n.
  bool excludes(std::int64_t n) const;
};

/// Integer-only membership test for a/n in a ball, with the ball constants
/// pre-reduced so the hot loops stay in machine arithmetic.
class SourceMembership {
 public:
  explicit SourceMembership(const Ball& ball);

  /// For 1 <= a <= n: the coset [a/n] lies in the arc, or a/n lies in the p-adic ball.
  bool contains(std::int64_t a, std::int64_t n) const;

  /// #{1 <= a <= n : gcd(a, n) = 1, a/n in ball} via Moebius inclusion-exclusion
  /// over the distinct primes of n (CRT-partitioned for p-adic balls).
  std::int64_t count_coprime(std::int64_t n, std::span<const std::uint64_t> primes_of_n) const;

 private:
  bool padic_;
  // arc [ln/ld, ln/ld + mn/md)
  std::int64_t ln_ = 0, ld_ = 1, mn_ = 1, md_ = 1;
  // p-adic ball: a/n in ball iff p does not divide n and a == n * residue (mod modulus)
  std::uint64_t p_ = 0, modulus_ = 1, residue_ = 0;
};

/// Distinct primes of n by trial division.
std::vector<std::uint64_t> distinct_primes(std::uint64_t n);

std::int64_t euler_phi(std::int64_t n);

/// Sorted numerators a in [1, n] with gcd(a, n) = 1, a/n in the source ball
/// and (under the filter) target prime not dividing n. Trial enumeration.
std::vector<std::int64_t> numerators_at_level(const SourceSpec& spec, std::int64_t n);
std::vector<Rational> fractions_at_level(const SourceSpec& spec, std::int64_t n);

/// phi^B(n), without the target filter. Counting formula.
std::int64_t restricted_totient(const SourceSpec& spec, std::int64_t n);
/// Same quantity by trial enumeration over a in [1, n].
std::int64_t restricted_totient_enumerated(const SourceSpec& spec, std::int64_t n);

struct TotientRow {
  std::int64_t n;
  std::int64_t phi;
  std::int64_t phi_b;
  std::uint64_t running_sum;  // sum of phi_b(m) over m <= n not removed by the target filter
};

struct TotientTable {
  std::int64_t max_n = 0;
  std::vector<TotientRow> rows;
  std::uint64_t restricted_sum = 0;

  /// Least N0 such that restricted_sum(N) >= C * N^2 for every N in [N0, max_n].
  std::optional<std::int64_t> empirical_n0(double c) const;
  /// min and max of restricted_sum(N) / N^2 over N in [from, max_n].
  std::pair<double, double> ratio_band(std::int64_t from) const;
};

/// Segment size of the totient sieve.
inline constexpr std::int64_t kSieveBlock = std::int64_t{1} << 20;

/// Streams rows for 1..N in blocks of kSieveBlock. Memory stays flat in N.
void for_each_totient_block(const SourceSpec& spec, std::int64_t max_n, unsigned workers,
                            const std::function<void(std::span<const TotientRow>)>& sink);

TotientTable totient_table(const SourceSpec& spec, std::int64_t max_n, unsigned workers = 1);

struct EquidistributionPoint {
  std::int64_t n;
  Rational ratio;  // phi^B(n) / phi(n)
};

std::vector<EquidistributionPoint> equidistribution_ratio(const SourceSpec& spec, std::int64_t n_lo,
                                                          std::int64_t n_hi);

}  // namespace crossplace
