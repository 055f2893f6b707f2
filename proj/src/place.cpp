#include "crossplace/place.hpp"

#include <charconv>

#include "crossplace/arith.hpp"
#include "crossplace/errors.hpp"

namespace crossplace {

namespace arith {

// Deterministic Miller-Rabin; these bases are exact for all 64-bit n.
bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace arith

Place Place::prime(std::uint64_t p) {
  if (!arith::is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  return Place(p);
}

Place Place::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "oo") return infinity();
  if (text.size() < 2 || text.front() != 'p') {
    throw InvalidArgument("place must be 'inf' or 'p<prime>', got '" + std::string(text) + "'");
  }
  std::uint64_t p = 0;
  const auto* first = text.data() + 1;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc() || ptr != last) {
    throw InvalidArgument("malformed place '" + std::string(text) + "'");
  }
  return prime(p);
}

std::string Place::to_string() const { return is_prime() ? "p" + std::to_string(p_) : "inf"; }

}  // namespace crossplace
