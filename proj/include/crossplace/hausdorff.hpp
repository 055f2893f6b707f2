#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "crossplace/approx_function.hpp"
#include "crossplace/farey.hpp"
#include "crossplace/rational.hpp"

namespace crossplace {

enum class DimensionFamily { Power, PowerLog, Table };

/// Gauge f(r) for f-volumes of balls (radius convention).
///
///   power(s): r^s
///   power_log(s, sigma): r^s (1 + |ln r|)^(-sigma)
///   table: piecewise linear through increasing (r, f) knots, f(0) = 0,
///          constant past the last knot
class DimensionFunction {
 public:
  static DimensionFunction power(const Rational& s);
  static DimensionFunction power_log(const Rational& s, const Rational& sigma);
  static DimensionFunction table(std::vector<std::pair<double, double>> knots);

  DimensionFamily family() const { return family_; }
  const Rational& exponent() const { return s_; }
  double operator()(double r) const;

  /// sup f(2x)/f(x) over x = 2^-j, j = 1..60.
  double doubling_constant() const { return doubling_; }

 private:
  DimensionFunction(DimensionFamily family, Rational s, Rational sigma, std::vector<std::pair<double, double>> knots);

  DimensionFamily family_;
  Rational s_, sigma_;
  std::vector<std::pair<double, double>> knots_;
  double doubling_ = 1;
};

double f_volume(const DimensionFunction& f, const Rational& r);

struct CoverSumReport {
  std::int64_t N = 0;
  std::int64_t N_max = 0;
  double rho = 0;  // psi(N)
  double partial = 0;  // sum_{N <= n <= N_max} 2 n f(psi(n))
  std::optional<Rational> partial_exact;
  std::optional<double> tail_bound;  // bound on sum_{n > N_max}
  bool divergent = false;
  bool has_tail_bound = false;

  /// partial + tail, or nullopt when no finite bound is known.
  std::optional<double> total() const;
};

CoverSumReport cover_sum(std::int64_t N, std::int64_t N_max, const ApproxFunction& psi, const DimensionFunction& f);

/// 2/tau; tau < 2 lies outside the Jarnik-Besicovitch range.
Rational jb_exponent(const Rational& tau);

struct BoxWindow {
  double lower_factor = 1.0;   // H0 = lower_factor * scale^(-1/tau)
  double upper_factor = 2.0;   // H  = upper_factor * scale^(-upper_power/tau)
  double upper_power = 1.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> fixed;  // overrides the per-scale window
};

struct BoxScale {
  std::int64_t level = 0;  // j (scale 2^-j) or l (scale p^-l)
  double radius = 0;
  std::int64_t h0 = 0, h = 0;
  std::uint64_t boxes = 0;  // total boxes at this scale
  std::uint64_t count = 0;  // boxes hit
  bool used = false;
};

struct LineFitResult {
  double slope = 0, intercept = 0, residual = 0, r_squared = 0;
};

struct BoxCountReport {
  Rational tau;
  std::vector<BoxScale> scales;
  LineFitResult fit;
  double target_dim = 0;
};

/// Minimum hit boxes for a scale to enter the regression.
inline constexpr std::uint64_t kSparseBoxes = 32;

/// Default levels: dyadic 6..18 for a real target, p-adic 4..10 for a prime target.
std::vector<std::int64_t> default_box_levels(const Place& target);

/// Counts boxes (real target: [i 2^-j, (i+1) 2^-j) on the circle; prime
/// target: residue classes mod p^l) meeting some ball B(a/n, n^-tau) with a/n
/// in F_n^B and H0 <= n <= H. Hit detection is exact.
BoxCountReport box_count(const Rational& tau, const SourceSpec& spec, const std::vector<std::int64_t>& levels,
                         const BoxWindow& window = {}, unsigned workers = 1);

}  // namespace crossplace
