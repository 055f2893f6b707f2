#include "crossplace/farey.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "crossplace/arith.hpp"
#include "crossplace/errors.hpp"

namespace crossplace {

using arith::i128;
using arith::i64;
using arith::u64;

namespace {

i64 small_int(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p() || abs(z) > mpz_class(std::int64_t{1} << 31)) {
    throw BudgetExceeded(std::string(what) + " " + z.get_str() + " is too large for the enumeration kernels");
  }
  return static_cast<i64>(z.get_si());
}

i128 ceil_div(i128 num, i128 den) {
  // den > 0, num >= 0
  return (num + den - 1) / den;
}

// #{0 <= a <= x : gcd(a, n) = 1} by inclusion-exclusion over squarefree divisors.
i64 coprime_prefix(i64 x, std::span<const u64> primes) {
  if (x < 0) return 0;
  i64 total = 0;
  const std::size_t subsets = std::size_t{1} << primes.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    i64 d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        d *= static_cast<i64>(primes[i]);
        ++bits;
      }
    }
    const i64 term = x / d + 1;
    total += (bits & 1) ? -term : term;
  }
  return total;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

SourceSpec SourceSpec::make(const Ball& ball, const Place& target, bool coprimality_filter) {
  if (ball.place() == target) {
    throw InvalidArgument("source ball and target must be distinct places (both " + target.to_string() + ")");
  }
  return SourceSpec{ball, target, coprimality_filter};
}

bool SourceSpec::excludes(std::int64_t n) const {
  return coprimality_filter && target.is_prime() && static_cast<u64>(n) % target.p() == 0;
}

SourceMembership::SourceMembership(const Ball& ball) : padic_(ball.is_padic()) {
  if (!padic_) {
    const auto& a = ball.as_arc();
    ln_ = small_int(a.left.num(), "arc numerator");
    ld_ = small_int(a.left.den(), "arc denominator");
    mn_ = small_int(a.length.num(), "arc numerator");
    md_ = small_int(a.length.den(), "arc denominator");
    return;
  }
  const auto& b = ball.as_padic();
  p_ = b.place.p();
  modulus_ = arith::checked_pow(p_, static_cast<u64>(b.k));
  const mpz_class m(static_cast<unsigned long>(modulus_));
  mpz_class inv;
  const mpz_class s = b.center.den();
  if (mpz_invert(inv.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t()) == 0 && modulus_ != 1) {
    throw InvalidArgument("ball center denominator not invertible");
  }
  mpz_class r = b.center.num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  residue_ = modulus_ == 1 ? 0 : r.get_ui();
}

bool SourceMembership::contains(std::int64_t a, std::int64_t n) const {
  if (!padic_) {
    const i128 ap = a % n;
    const i128 span = static_cast<i128>(n) * ld_;
    i128 x = (ap * ld_ - static_cast<i128>(ln_) * n) % span;
    if (x < 0) x += span;
    return x * md_ < static_cast<i128>(mn_) * n * ld_;
  }
  if (static_cast<u64>(n) % p_ == 0) return false;
  if (modulus_ == 1) return true;
  const u64 target = arith::mulmod(static_cast<u64>(n) % modulus_, residue_, modulus_);
  return arith::mod(a, modulus_) == target;
}

std::int64_t SourceMembership::count_coprime(std::int64_t n, std::span<const std::uint64_t> primes) const {
  if (!padic_) {
    const i128 lo = ceil_div(static_cast<i128>(n) * ln_, ld_);
    const i128 hi_excl =
        ceil_div(static_cast<i128>(n) * (static_cast<i128>(ln_) * md_ + static_cast<i128>(mn_) * ld_),
                 static_cast<i128>(ld_) * md_);
    return coprime_prefix(static_cast<i64>(hi_excl - 1), primes) -
           coprime_prefix(static_cast<i64>(lo - 1), primes);
  }
  if (static_cast<u64>(n) % p_ == 0) return 0;
  const u64 m = modulus_;
  const u64 target = arith::mulmod(static_cast<u64>(n) % m, residue_, m);
  i64 total = 0;
  const std::size_t subsets = std::size_t{1} << primes.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    u64 d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        d *= primes[i];
        ++bits;
      }
    }
    // j in [1, n/d] with d*j == target (mod m)
    const i64 upper = n / static_cast<i64>(d);
    const u64 c = m == 1 ? 0 : arith::mulmod(target, *arith::invmod(d % m, m), m);
    const i64 mm = static_cast<i64>(m);
    const i64 ci = static_cast<i64>(c);
    const i64 count = arith::floor_div(upper - ci, mm) - arith::floor_div(-ci, mm);
    total += (bits & 1) ? -count : count;
  }
  return total;
}

std::vector<std::uint64_t> distinct_primes(std::uint64_t n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw InvalidArgument("euler_phi needs n >= 1");
  i64 result = n;
  for (u64 p : distinct_primes(static_cast<u64>(n))) result -= result / static_cast<i64>(p);
  return result;
}

std::vector<std::int64_t> numerators_at_level(const SourceSpec& spec, std::int64_t n) {
  if (n < 1) throw InvalidArgument("fraction level n must be >= 1");
  std::vector<i64> out;
  if (spec.excludes(n)) return out;
  const SourceMembership member(spec.ball);
  for (i64 a = 1; a <= n; ++a) {
    if (std::gcd(a, n) == 1 && member.contains(a, n)) out.push_back(a);
  }
  return out;
}

std::vector<Rational> fractions_at_level(const SourceSpec& spec, std::int64_t n) {
  std::vector<Rational> out;
  for (i64 a : numerators_at_level(spec, n)) out.emplace_back(a, n);
  return out;
}

std::int64_t restricted_totient(const SourceSpec& spec, std::int64_t n) {
  if (n < 1) throw InvalidArgument("restricted_totient needs n >= 1");
  const auto primes = distinct_primes(static_cast<u64>(n));
  return SourceMembership(spec.ball).count_coprime(n, primes);
}

std::int64_t restricted_totient_enumerated(const SourceSpec& spec, std::int64_t n) {
  if (n < 1) throw InvalidArgument("restricted_totient needs n >= 1");
  const SourceMembership member(spec.ball);
  i64 count = 0;
  for (i64 a = 1; a <= n; ++a) {
    if (std::gcd(a, n) == 1 && member.contains(a, n)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Segmented sieve

namespace {

void fill_block(i64 lo, i64 hi, const std::vector<u64>& primes, const SourceMembership& member,
                std::vector<TotientRow>& rows) {
  const auto len = static_cast<std::size_t>(hi - lo);
  std::vector<u64> rem(len);
  std::vector<std::uint32_t> count(len, 0);
  for (std::size_t i = 0; i < len; ++i) rem[i] = static_cast<u64>(lo) + i;
  for (u64 p : primes) {
    if (p * p > static_cast<u64>(hi - 1)) break;
    u64 first = ((static_cast<u64>(lo) + p - 1) / p) * p;
    for (u64 m = first; m < static_cast<u64>(hi); m += p) {
      const std::size_t i = m - static_cast<u64>(lo);
      ++count[i];
      while (rem[i] % p == 0) rem[i] /= p;
    }
  }
  std::vector<std::size_t> offset(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) offset[i + 1] = offset[i] + count[i] + (rem[i] > 1 ? 1 : 0);
  std::vector<u64> flat(offset[len]);
  std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
  for (u64 p : primes) {
    if (p * p > static_cast<u64>(hi - 1)) break;
    u64 first = ((static_cast<u64>(lo) + p - 1) / p) * p;
    for (u64 m = first; m < static_cast<u64>(hi); m += p) flat[cursor[m - static_cast<u64>(lo)]++] = p;
  }
  rows.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (rem[i] > 1) flat[cursor[i]++] = rem[i];
    const i64 n = lo + static_cast<i64>(i);
    const std::span<const u64> ps(flat.data() + offset[i], offset[i + 1] - offset[i]);
    i64 phi = n;
    for (u64 p : ps) phi -= phi / static_cast<i64>(p);
    rows[i] = TotientRow{n, phi, member.count_coprime(n, ps), 0};
  }
}

}  // namespace

void for_each_totient_block(const SourceSpec& spec, std::int64_t max_n, unsigned workers,
                            const std::function<void(std::span<const TotientRow>)>& sink) {
  if (max_n < 1) throw InvalidArgument("totient table needs N >= 1");
  workers = std::max(1u, workers);
  const SourceMembership member(spec.ball);
  const auto primes = primes_up_to(isqrt(static_cast<u64>(max_n)) + 1);
  const i64 blocks = (max_n + kSieveBlock - 1) / kSieveBlock;
  std::uint64_t running = 0;
  std::vector<std::vector<TotientRow>> batch(workers);
  for (i64 first = 0; first < blocks; first += workers) {
    const i64 in_batch = std::min<i64>(workers, blocks - first);
    auto work = [&](i64 j) {
      const i64 lo = 1 + (first + j) * kSieveBlock;
      const i64 hi = std::min(max_n + 1, lo + kSieveBlock);
      fill_block(lo, hi, primes, member, batch[static_cast<std::size_t>(j)]);
    };
    if (in_batch == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      for (i64 j = 0; j < in_batch; ++j) threads.emplace_back(work, j);
    }
    for (i64 j = 0; j < in_batch; ++j) {
      auto& rows = batch[static_cast<std::size_t>(j)];
      for (auto& row : rows) {
        if (!spec.excludes(row.n)) {
          running += static_cast<std::uint64_t>(row.phi_b);
        }
        row.running_sum = running;
      }
      sink(rows);
    }
  }
}

TotientTable totient_table(const SourceSpec& spec, std::int64_t max_n, unsigned workers) {
  TotientTable table;
  table.max_n = max_n;
  table.rows.reserve(static_cast<std::size_t>(max_n));
  for_each_totient_block(spec, max_n, workers, [&](std::span<const TotientRow> rows) {
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  });
  table.restricted_sum = table.rows.empty() ? 0 : table.rows.back().running_sum;
  return table;
}

std::optional<std::int64_t> TotientTable::empirical_n0(double c) const {
  std::optional<i64> n0;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const double ratio = static_cast<double>(it->running_sum) / (static_cast<double>(it->n) * static_cast<double>(it->n));
    if (ratio < c) break;
    n0 = it->n;
  }
  return n0;
}

std::pair<double, double> TotientTable::ratio_band(std::int64_t from) const {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& row : rows) {
    if (row.n < from) continue;
    const double ratio = static_cast<double>(row.running_sum) / (static_cast<double>(row.n) * static_cast<double>(row.n));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

std::vector<EquidistributionPoint> equidistribution_ratio(const SourceSpec& spec, std::int64_t n_lo,
                                                          std::int64_t n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw InvalidArgument("equidistribution range must satisfy 1 <= lo <= hi");
  const SourceMembership member(spec.ball);
  std::vector<EquidistributionPoint> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (i64 n = n_lo; n <= n_hi; ++n) {
    const auto primes = distinct_primes(static_cast<u64>(n));
    i64 phi = n;
    for (u64 p : primes) phi -= phi / static_cast<i64>(p);
    out.push_back({n, Rational(member.count_coprime(n, primes), phi)});
  }
  return out;
}

}  // namespace crossplace
