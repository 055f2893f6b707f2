#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crossplace {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// v_p(0) = +infinity; raised wherever a finite valuation is requested.
class InfiniteValuation : public Error {
 public:
  InfiniteValuation() : Error("valuation of zero is infinite") {}
};

class UnsupportedCombination : public Error {
 public:
  using Error::Error;
};

class InvalidFunction : public Error {
 public:
  using Error::Error;
};

// A computation would exceed an enumeration or memory guard.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The p-adic digit budget cannot resolve every threshold up to N.
class PrecisionInsufficient : public Error {
 public:
  PrecisionInsufficient(std::int64_t offending_n, std::int64_t required, std::int64_t available)
      : Error("precision insufficient: n=" + std::to_string(offending_n) + " needs " +
              std::to_string(required) + " digits, have " + std::to_string(available)),
        offending_n_(offending_n),
        required_(required),
        available_(available) {}

  std::int64_t offending_n() const noexcept { return offending_n_; }
  std::int64_t required() const noexcept { return required_; }
  std::int64_t available() const noexcept { return available_; }

 private:
  std::int64_t offending_n_;
  std::int64_t required_;
  std::int64_t available_;
};

// Two independent computations of the same exact quantity disagreed.
class IdentityFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

}  // namespace crossplace
