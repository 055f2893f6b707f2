#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace crossplace {

/// A place of Q: a certified prime p, or the archimedean place.
class Place {
 public:
  /// Throws InvalidArgument unless p passes a deterministic primality test.
  static Place prime(std::uint64_t p);
  static Place infinity() { return Place(0); }

  /// "p3", "p5", ... or "inf".
  static Place parse(std::string_view text);

  bool is_prime() const { return p_ != 0; }
  bool is_archimedean() const { return p_ == 0; }
  /// The prime; 0 for the archimedean place.
  std::uint64_t p() const { return p_; }

  std::string to_string() const;

  friend bool operator==(const Place&, const Place&) = default;

 private:
  explicit Place(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

}  // namespace crossplace
