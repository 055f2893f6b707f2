#pragma once

// Brute-force reference implementations. Everything here is deliberately
// naive and shares no code with the library beyond Rational and the ball and
// SourceSpec value types.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "crossplace/farey.hpp"
#include "crossplace/padic.hpp"
#include "crossplace/rational.hpp"

namespace oracle {

using crossplace::Ball;
using crossplace::Rational;
using crossplace::SourceSpec;

inline std::int64_t vz(mpz_class z, std::uint64_t p) {
  std::int64_t v = 0;
  const mpz_class pz(static_cast<unsigned long>(p));
  while (z % pz == 0) {
    z /= pz;
    ++v;
  }
  return v;
}

// Valuation of a nonzero rational.
inline std::int64_t vq(const Rational& x, std::uint64_t p) { return vz(x.num(), p) - vz(x.den(), p); }

inline Rational pow_q(std::uint64_t p, std::int64_t e) {
  Rational r(1);
  for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i) r = r * Rational(static_cast<std::int64_t>(p));
  return e < 0 ? Rational(1) / r : r;
}

inline bool in_ball(const Ball& b, std::int64_t a, std::int64_t n) {
  const Rational q(a, n);
  if (b.is_padic()) {
    const auto& d = b.as_padic();
    if (vz(q.den(), d.place.p()) > 0) return false;
    const Rational diff = q - d.center;
    return diff.is_zero() || vq(diff, d.place.p()) >= d.k;
  }
  const auto& arc = b.as_arc();
  Rational off = q - arc.left;
  while (off < Rational(0)) off = off + Rational(1);
  while (off >= Rational(1)) off = off - Rational(1);
  return off < arc.length;
}

inline bool excluded(const SourceSpec& spec, std::int64_t n) {
  return spec.coprimality_filter && spec.target.is_prime() && n % static_cast<std::int64_t>(spec.target.p()) == 0;
}

inline std::int64_t phi_b(const SourceSpec& spec, std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= n; ++a) {
    if (std::gcd(a, n) == 1 && in_ball(spec.ball, a, n)) ++c;
  }
  return c;
}

// psi(h) = h^-tau for an integer tau.
inline Rational psi_pow(std::int64_t tau, std::int64_t h) {
  Rational r(1);
  for (std::int64_t i = 0; i < tau; ++i) r = r / Rational(h);
  return r;
}

// The largest power p^-t not exceeding psi(n).
inline Rational psi_star(std::int64_t tau, std::int64_t n, std::uint64_t p) {
  Rational v(1);
  while (v > psi_pow(tau, n)) v = v / Rational(static_cast<std::int64_t>(p));
  return v;
}

struct Counts {
  std::int64_t strict = 0;
  std::int64_t closed = 0;
};

// p-adic target given by its residue modulo p^L.
inline Counts delta_padic(const mpz_class& residue, std::uint64_t p, std::int64_t L, std::int64_t N,
                          std::int64_t tau, const SourceSpec& spec) {
  mpz_class P = 1;
  for (std::int64_t i = 0; i < L; ++i) P *= static_cast<unsigned long>(p);
  Counts c;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (excluded(spec, n)) continue;
    for (std::int64_t a = 1; a <= n; ++a) {
      if (std::gcd(a, n) != 1 || !in_ball(spec.ball, a, n)) continue;
      mpz_class diff = mpz_class(static_cast<long>(n)) * residue - a;
      diff %= P;
      if (diff < 0) diff += P;
      const std::int64_t v = diff == 0 ? L : vz(diff, p);
      const Rational dist = pow_q(p, -v);
      const Rational bound = psi_pow(tau, n);
      if (dist <= bound) ++c.closed;
      if (dist < bound) ++c.strict;
    }
  }
  return c;
}

// Real target alpha in [0,1), distance on the circle.
inline Counts delta_real(const Rational& alpha, std::int64_t N, std::int64_t tau, const SourceSpec& spec) {
  Counts c;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (excluded(spec, n)) continue;
    for (std::int64_t a = 1; a <= n; ++a) {
      if (std::gcd(a, n) != 1 || !in_ball(spec.ball, a, n)) continue;
      Rational d = alpha - Rational(a, n);
      if (d < Rational(0)) d = -d;
      while (d > Rational(1)) d = d - Rational(1);
      if (Rational(1) - d < d) d = Rational(1) - d;
      const Rational bound = psi_pow(tau, n);
      if (d <= bound) ++c.closed;
      if (d < bound) ++c.strict;
    }
  }
  return c;
}

// Mean of the closed count and of its square over every residue mod p^L.
inline std::pair<Rational, Rational> exhaustive_moments(std::uint64_t p, std::int64_t L, std::int64_t N,
                                                        std::int64_t tau, const SourceSpec& spec) {
  std::int64_t P = 1;
  for (std::int64_t i = 0; i < L; ++i) P *= static_cast<std::int64_t>(p);
  std::int64_t s1 = 0, s2 = 0;
  for (std::int64_t r = 0; r < P; ++r) {
    const auto c = delta_padic(mpz_class(static_cast<long>(r)), p, L, N, tau, spec).closed;
    s1 += c;
    s2 += c * c;
  }
  return {Rational(s1, P), Rational(s2, P)};
}

}  // namespace oracle
