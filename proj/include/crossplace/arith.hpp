#pragma once

// Small 64-bit integer helpers shared by the enumeration kernels.

#include <cstdint>
#include <numeric>
#include <optional>

#include "crossplace/errors.hpp"

namespace crossplace::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Non-negative residue of a mod m for signed a.
inline u64 mod(i64 a, u64 m) {
  const i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
inline std::optional<u64> invmod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  i128 res = old_s % static_cast<i128>(m);
  if (res < 0) res += m;
  return static_cast<u64>(res);
}

/// b^e, throwing BudgetExceeded when the result would pass `limit`.
inline u64 checked_pow(u64 base, u64 exp, u64 limit = (u64{1} << 62)) {
  u64 result = 1;
  for (u64 i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) {
      throw BudgetExceeded("power " + std::to_string(base) + "^" + std::to_string(exp) +
                           " exceeds 64-bit budget");
    }
    result *= base;
  }
  return result;
}

/// Exponent of p in |x| for x != 0.
inline i64 valuation(i64 x, u64 p) {
  if (x == 0) throw InfiniteValuation();
  u64 m = x < 0 ? static_cast<u64>(0) - static_cast<u64>(x) : static_cast<u64>(x);
  i64 v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

/// floor(a / b) for b > 0.
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

bool is_prime(u64 n);

}  // namespace crossplace::arith
