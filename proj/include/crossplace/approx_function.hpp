#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossplace/rational.hpp"

namespace crossplace {

enum class ApproxFamily { PowerLaw, PowerLog, Table };

/// Empirical regularity: for each tested s, psi(s n) > c psi(n) held for all
/// n up to the probe bound with c the reported constant.
struct RegularityCertificate {
  std::int64_t probe_bound = 0;
  std::vector<std::pair<std::int64_t, double>> constants;  // (s, c)
};

/// A monotone decreasing approximation function psi on the positive integers.
///
///   power_law(tau): psi(h) = h^(-tau), tau > 0 rational
///   power_log(sigma): psi(h) = h^(-2) (1 + ln h)^(-sigma), sigma > -2
///   table: psi(h) = values[h - 1], positive and non-increasing
///
/// Every comparison against a rational is decided exactly: power laws reduce
/// to integer inequalities, tables are rational, and power-log comparisons
/// (irrational for h >= 2) are decided in extended precision and refused
/// when the margin is too thin to trust.
class ApproxFunction {
 public:
  static ApproxFunction power_law(const Rational& tau);
  static ApproxFunction power_log(const Rational& sigma);
  static ApproxFunction table(std::vector<Rational> values);
  static ApproxFunction load_table(const std::filesystem::path& csv);

  /// "pow:<tau>" | "powlog:<sigma>" | "table:<path>"
  static ApproxFunction parse(std::string_view text);
  std::string to_string() const;

  ApproxFamily family() const { return family_; }
  /// tau for power laws, sigma for power-log; zero for tables.
  const Rational& exponent() const { return exponent_; }
  const std::vector<Rational>& table_values() const { return table_; }
  /// Largest h with psi(h) defined (tables) or INT64_MAX.
  std::int64_t domain_limit() const;

  double value(std::int64_t h) const;
  long double log_value(std::int64_t h) const;
  std::optional<Rational> exact_value(std::int64_t h) const;

  /// Sign of psi(h) - x, decided exactly.
  int compare(std::int64_t h, const Rational& x) const;
  bool exceeds(std::int64_t h, const Rational& x) const { return compare(h, x) > 0; }
  bool at_least(std::int64_t h, const Rational& x) const { return compare(h, x) >= 0; }

  /// t with p^-t <= psi(h) < p^(-t+1); psi*(h) = p^-t.
  std::int64_t closed_exponent(std::int64_t h, std::uint64_t p) const;
  /// Least s with p^-s < psi(h): the open ball of radius psi(h) is {v >= s}.
  std::int64_t open_exponent(std::int64_t h, std::uint64_t p) const;

  RegularityCertificate certify_regularity(std::span<const std::int64_t> s_values,
                                           std::int64_t probe_bound) const;
  ApproxFunction with_certificate(RegularityCertificate cert) const;
  const std::optional<RegularityCertificate>& regularity() const { return regularity_; }

  friend bool operator==(const ApproxFunction& a, const ApproxFunction& b) {
    return a.family_ == b.family_ && a.exponent_ == b.exponent_ && a.table_ == b.table_;
  }

 private:
  ApproxFunction(ApproxFamily family, Rational exponent, std::vector<Rational> table)
      : family_(family), exponent_(std::move(exponent)), table_(std::move(table)) {}

  void check_domain(std::int64_t h) const;

  ApproxFamily family_;
  Rational exponent_;
  std::vector<Rational> table_;
  std::string table_source_;
  std::optional<RegularityCertificate> regularity_;
};

}  // namespace crossplace
