#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crossplace/approx_engine.hpp"

namespace crossplace {

/// SplitMix64 keyed by (seed, stream): every sample index gets an independent,
/// reproducible stream regardless of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on [0, bound) by rejection; bound >= 1.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

enum class SamplingMode { Auto, Sampled, Exhaustive };

/// Residue spaces up to this size are enumerated instead of sampled.
inline constexpr std::uint64_t kExhaustiveLimit = 1'000'000;

struct TrialConfig {
  SourceSpec spec;
  ApproxFunction psi;
  std::int64_t sample_count = 1;
  std::vector<std::int64_t> n_grid;
  std::uint64_t seed = 0;
  std::int64_t precision = 0;  // digits L (prime target) or dyadic resolution R (real target)
  SamplingMode mode = SamplingMode::Auto;
  unsigned workers = 1;

  const Place& target() const { return spec.target; }
  void validate() const;
  /// True when the run enumerates every residue modulo p^L.
  bool exhaustive() const;
};

/// Prime target: L uniform digits. Real target: u / 2^R with u uniform.
TargetPoint sample_target(const Place& target, std::int64_t precision, CounterRng& rng);

/// Every residue class modulo p^L, in increasing order.
void for_each_residue(const Place& target, std::int64_t precision, const std::function<void(const PAdicSample&)>& fn);

struct ExhaustiveMoments {
  std::int64_t N = 0;
  std::int64_t precision = 0;
  Rational mean_closed;     // average of the closed counter over all residues
  Rational mean_sq_closed;  // average of its square
  Rational mean_strict;
  std::vector<std::int64_t> closed_counts;  // indexed by residue
};

ExhaustiveMoments exhaustive_moments(std::int64_t N, const ApproxFunction& psi, const SourceSpec& spec,
                                     std::int64_t precision, unsigned workers = 1);

enum class Verdict { GrowthConsistent, SaturationConsistent };
std::string to_string(Verdict v);

inline constexpr std::array<std::int64_t, 3> kTailLevels{1, 3, 10};

struct DichotomyRow {
  std::int64_t N = 0;
  double mean = 0;          // strict counter
  double mean_closed = 0;
  double std_error = 0;
  std::array<double, 3> tail_fraction{};  // fraction with count >= kTailLevels[i]
  std::optional<Rational> Psi;
  double Psi_value = 0;
  std::optional<Rational> exact_mean;  // exhaustive mode only
};

struct DichotomyReport {
  std::vector<DichotomyRow> rows;
  Verdict verdict = Verdict::SaturationConsistent;
  double slope = 0;  // mean count against ln N
  double intercept = 0;
  double r_squared = 0;
  double fitted_c = 0;  // mean ~ c * Psi(N), least squares through the origin
  bool exhaustive = false;
  std::int64_t samples = 0;
  // per sample, per grid point: (strict, closed)
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> counts;
};

DichotomyReport run_dichotomy(const TrialConfig& config);

struct PaleyZygmundRow {
  Rational lambda;   // c2 = lambda * c1
  double c2 = 0;
  Rational predicted;  // (c1 - c2)^2
  Rational empirical;  // measure of {closed count >= c2 * M2} = {count >= lambda * M1}
  bool holds = false;
};

struct PaleyZygmundReport {
  MomentReport moments;
  std::int64_t precision = 0;
  std::vector<PaleyZygmundRow> rows;
  bool all_hold = false;
};

/// Exhaustive over residues mod p^L at N = n_grid.back(). Checks the moment
/// identities against the enumeration before comparing; a mismatch throws
/// IdentityFailure.
PaleyZygmundReport run_paley_zygmund(const TrialConfig& config, const std::vector<Rational>& lambdas,
                                     const MomentOptions& opts = {});

/// z p1^k mod p2^l over z in [0, p2^l) is a permutation.
bool check_translate_partition(std::uint64_t p1, std::int64_t k, std::uint64_t p2, std::int64_t l);

struct ReductionResult {
  Rational translated;  // x - r/s
  Rational scaled;      // (x - r/s) / p^k
};

ReductionResult reduction_transform(const Rational& x, const Ball& source);

/// Brute-force counts on the real line for the source ball B(r/s, p^-k) and
/// its translate centered at 0: pairs q in B with height of q - r/s at most N,
/// versus u in the centered ball with height at most N, both with
/// |point - fraction| < psi(den(u)).
std::pair<std::int64_t, std::int64_t> translated_counts(const Rational& x, const Ball& source, std::int64_t N,
                                                        const ApproxFunction& psi);

}  // namespace crossplace
