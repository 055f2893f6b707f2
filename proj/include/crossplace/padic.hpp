#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crossplace/place.hpp"
#include "crossplace/rational.hpp"

namespace crossplace {

/// v_p(x) for nonzero x; throws InfiniteValuation for x = 0.
std::int64_t valuation(const Rational& x, const Place& p);

/// v_p(x), or nullopt for x = 0.
std::optional<std::int64_t> try_valuation(const Rational& x, const Place& p);

/// |x|_p = p^{-v_p(x)} exactly (0 for x = 0); |x| at the archimedean place.
Rational norm(const Rational& x, const Place& place);

struct PadicBallData {
  Place place;
  Rational center;
  std::int64_t k;
  friend bool operator==(const PadicBallData&, const PadicBallData&) = default;
};

struct ArcData {
  Rational left;
  Rational length;
  friend bool operator==(const ArcData&, const ArcData&) = default;
};

/// A closed p-adic ball {x in Z_p : v_p(x - center) >= k}, or a half-open
/// arc [left, left + length) of R/Z (wrap-around allowed).
class Ball {
 public:
  static Ball padic(const Place& place, const Rational& center, std::int64_t k);
  static Ball arc(const Rational& left, const Rational& length);
  static Ball full_padic(const Place& place) { return padic(place, Rational(0), 0); }
  static Ball full_arc() { return arc(Rational(0), Rational(1)); }

  /// "p5:0/1:k1" for p-adic balls, "<left>:<length>" for arcs.
  static Ball parse_padic(std::string_view text);
  static Ball parse_arc(std::string_view text);
  std::string to_string() const;

  bool is_padic() const { return std::holds_alternative<PadicBallData>(data_); }
  bool is_arc() const { return std::holds_alternative<ArcData>(data_); }
  const PadicBallData& as_padic() const { return std::get<PadicBallData>(data_); }
  const ArcData& as_arc() const { return std::get<ArcData>(data_); }

  /// The place the ball lives in: its prime, or infinity for arcs.
  Place place() const;

  /// Haar measure: p^{-k} or the arc length.
  Rational measure() const;
  bool is_full() const;

  bool contains(const Rational& q) const;

  friend bool operator==(const Ball&, const Ball&) = default;

 private:
  explicit Ball(std::variant<PadicBallData, ArcData> data) : data_(std::move(data)) {}
  std::variant<PadicBallData, ArcData> data_;
};

struct BallIntersection {
  bool disjoint;
  std::optional<Ball> smaller;  // the ball of larger k when nested
  Rational measure;
};

/// Ultrametric balls over one prime are either disjoint or nested.
/// Throws UnsupportedCombination for arcs or mismatched primes.
BallIntersection ball_intersect(const Ball& b1, const Ball& b2);

/// A point of Z_p known modulo p^L through its first L base-p digits
/// (least significant first).
class PAdicSample {
 public:
  PAdicSample(const Place& place, std::vector<std::uint64_t> digits);

  static PAdicSample from_residue(const Place& place, std::int64_t precision, const mpz_class& residue);
  /// Digit expansion of q in Z_p; requires p not dividing den(q).
  static PAdicSample from_rational(const Rational& q, const Place& place, std::int64_t precision);

  const Place& place() const { return place_; }
  std::int64_t precision() const { return static_cast<std::int64_t>(digits_.size()); }
  const std::vector<std::uint64_t>& digits() const { return digits_; }

  mpz_class modulus() const;
  mpz_class residue() const;
  /// Residue as a machine word; throws BudgetExceeded when p^L >= 2^62.
  std::uint64_t residue_u64() const;

  friend bool operator==(const PAdicSample&, const PAdicSample&) = default;

 private:
  Place place_;
  std::vector<std::uint64_t> digits_;
};

/// v_p(n*alpha - a) as far as the digits resolve it.
struct DistanceValuation {
  std::int64_t value;
  bool at_least;  // true: only v >= value (= L) is known

  friend bool operator==(const DistanceValuation&, const DistanceValuation&) = default;
};

/// Requires n >= 1 with p not dividing n.
DistanceValuation sample_distance_valuation(const PAdicSample& alpha, std::int64_t n, std::int64_t a);

}  // namespace crossplace
