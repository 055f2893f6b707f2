#include "crossplace/padic.hpp"

#include <algorithm>

#include "crossplace/arith.hpp"
#include "crossplace/errors.hpp"

namespace crossplace {

namespace {

std::int64_t mpz_valuation(mpz_class m, std::uint64_t p) {
  const mpz_class pz(static_cast<unsigned long>(p));
  std::int64_t v = 0;
  if (p == 2) return static_cast<std::int64_t>(mpz_scan1(m.get_mpz_t(), 0));
  while (mpz_divisible_p(m.get_mpz_t(), pz.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), pz.get_mpz_t());
    ++v;
  }
  return v;
}

void require_prime(const Place& p, const char* what) {
  if (!p.is_prime()) throw InvalidArgument(std::string(what) + " requires a prime place");
}

}  // namespace

std::optional<std::int64_t> try_valuation(const Rational& x, const Place& p) {
  require_prime(p, "valuation");
  if (x.is_zero()) return std::nullopt;
  return mpz_valuation(abs(x.num()), p.p()) - mpz_valuation(x.den(), p.p());
}

std::int64_t valuation(const Rational& x, const Place& p) {
  const auto v = try_valuation(x, p);
  if (!v) throw InfiniteValuation();
  return *v;
}

Rational norm(const Rational& x, const Place& place) {
  if (place.is_archimedean()) return x.abs();
  const auto v = try_valuation(x, place);
  if (!v) return Rational(0);
  return Rational::power(static_cast<std::int64_t>(place.p()), -*v);
}

// ---------------------------------------------------------------------------
// Ball

Ball Ball::padic(const Place& place, const Rational& center, std::int64_t k) {
  require_prime(place, "p-adic ball");
  if (k < 0) throw InvalidArgument("ball exponent k must be >= 0");
  const mpz_class pz(static_cast<unsigned long>(place.p()));
  if (mpz_divisible_p(center.den().get_mpz_t(), pz.get_mpz_t())) {
    throw InvalidArgument("ball center " + center.to_string() + " is not in Z_" +
                          std::to_string(place.p()));
  }
  return Ball(PadicBallData{place, center, k});
}

Ball Ball::arc(const Rational& left, const Rational& length) {
  if (left < Rational(0) || left >= Rational(1)) throw InvalidArgument("arc left endpoint must lie in [0,1)");
  if (length <= Rational(0) || length > Rational(1)) throw InvalidArgument("arc length must lie in (0,1]");
  return Ball(ArcData{left, length});
}

Ball Ball::parse_padic(std::string_view text) {
  // p<prime>:<num>/<den>:k<exp>
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
    throw InvalidArgument("p-adic ball must look like p<prime>:<num>/<den>:k<exp>, got '" +
                          std::string(text) + "'");
  }
  const Place place = Place::parse(text.substr(0, c1));
  if (!place.is_prime()) throw InvalidArgument("p-adic ball needs a prime place");
  const Rational center = Rational::parse(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string_view kpart = text.substr(c2 + 1);
  if (kpart.size() < 2 || kpart.front() != 'k') {
    throw InvalidArgument("ball exponent must look like k<int>, got '" + std::string(kpart) + "'");
  }
  const Rational k = Rational::parse(kpart.substr(1));
  if (!k.is_integer()) throw InvalidArgument("ball exponent must be an integer");
  return padic(place, center, to_int64(k.num()));
}

Ball Ball::parse_arc(std::string_view text) {
  const auto c = text.find(':');
  if (c == std::string_view::npos) {
    throw InvalidArgument("arc must look like <left>:<length>, got '" + std::string(text) + "'");
  }
  return arc(Rational::parse(text.substr(0, c)), Rational::parse(text.substr(c + 1)));
}

std::string Ball::to_string() const {
  if (is_padic()) {
    const auto& b = as_padic();
    return b.place.to_string() + ":" + b.center.to_string() + ":k" + std::to_string(b.k);
  }
  const auto& a = as_arc();
  return a.left.to_string() + ":" + a.length.to_string();
}

Place Ball::place() const { return is_padic() ? as_padic().place : Place::infinity(); }

Rational Ball::measure() const {
  if (is_padic()) return Rational::power(static_cast<std::int64_t>(as_padic().place.p()), -as_padic().k);
  return as_arc().length;
}

bool Ball::is_full() const { return is_padic() ? as_padic().k == 0 : as_arc().length == Rational(1); }

bool Ball::contains(const Rational& q) const {
  if (is_arc()) {
    const auto& a = as_arc();
    const Rational offset = (q.frac() - a.left).frac();
    return offset < a.length;
  }
  const auto& b = as_padic();
  const mpz_class pz(static_cast<unsigned long>(b.place.p()));
  if (mpz_divisible_p(q.den().get_mpz_t(), pz.get_mpz_t())) return false;
  const auto v = try_valuation(q - b.center, b.place);
  return !v || *v >= b.k;
}

BallIntersection ball_intersect(const Ball& b1, const Ball& b2) {
  if (!b1.is_padic() || !b2.is_padic()) {
    throw UnsupportedCombination("ball_intersect supports p-adic balls only");
  }
  const auto& x = b1.as_padic();
  const auto& y = b2.as_padic();
  if (x.place != y.place) throw UnsupportedCombination("ball_intersect needs balls over one prime");
  const auto v = try_valuation(x.center - y.center, x.place);
  const bool nested = !v || *v >= std::min(x.k, y.k);
  if (!nested) return {true, std::nullopt, Rational(0)};
  const Ball& smaller = x.k >= y.k ? b1 : b2;
  return {false, smaller, smaller.measure()};
}

// ---------------------------------------------------------------------------
// PAdicSample

PAdicSample::PAdicSample(const Place& place, std::vector<std::uint64_t> digits)
    : place_(place), digits_(std::move(digits)) {
  require_prime(place_, "p-adic sample");
  if (digits_.empty()) throw InvalidArgument("p-adic sample needs precision L >= 1");
  for (auto d : digits_) {
    if (d >= place_.p()) throw InvalidArgument("p-adic digit out of range");
  }
}

PAdicSample PAdicSample::from_residue(const Place& place, std::int64_t precision, const mpz_class& residue) {
  require_prime(place, "p-adic sample");
  if (precision < 1) throw InvalidArgument("p-adic sample needs precision L >= 1");
  const mpz_class pz(static_cast<unsigned long>(place.p()));
  mpz_class r = residue;
  std::vector<std::uint64_t> digits;
  digits.reserve(static_cast<std::size_t>(precision));
  for (std::int64_t i = 0; i < precision; ++i) {
    mpz_class d;
    mpz_fdiv_qr(r.get_mpz_t(), d.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
    digits.push_back(d.get_ui());
  }
  return PAdicSample(place, std::move(digits));
}

PAdicSample PAdicSample::from_rational(const Rational& q, const Place& place, std::int64_t precision) {
  require_prime(place, "p-adic sample");
  if (precision < 1) throw InvalidArgument("p-adic sample needs precision L >= 1");
  mpz_class modulus;
  const mpz_class pz(static_cast<unsigned long>(place.p()));
  mpz_pow_ui(modulus.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(precision));
  mpz_class inv;
  const mpz_class den = q.den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    throw InvalidArgument(q.to_string() + " is not in Z_" + std::to_string(place.p()));
  }
  mpz_class r = q.num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return from_residue(place, precision, r);
}

mpz_class PAdicSample::modulus() const {
  mpz_class m;
  const mpz_class pz(static_cast<unsigned long>(place_.p()));
  mpz_pow_ui(m.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(digits_.size()));
  return m;
}

mpz_class PAdicSample::residue() const {
  mpz_class r = 0;
  const mpz_class pz(static_cast<unsigned long>(place_.p()));
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
    r = r * pz + static_cast<unsigned long>(*it);
  }
  return r;
}

std::uint64_t PAdicSample::residue_u64() const {
  const auto p = place_.p();
  (void)arith::checked_pow(p, digits_.size());
  std::uint64_t r = 0;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) r = r * p + *it;
  return r;
}

DistanceValuation sample_distance_valuation(const PAdicSample& alpha, std::int64_t n, std::int64_t a) {
  const auto p = alpha.place().p();
  if (n < 1) throw InvalidArgument("sample_distance_valuation needs n >= 1");
  if (static_cast<std::uint64_t>(n) % p == 0) {
    throw InvalidArgument("sample_distance_valuation needs p not dividing n");
  }
  const mpz_class modulus = alpha.modulus();
  mpz_class diff = mpz_class(static_cast<long>(n)) * alpha.residue() - mpz_class(static_cast<long>(a));
  mpz_fdiv_r(diff.get_mpz_t(), diff.get_mpz_t(), modulus.get_mpz_t());
  if (diff == 0) return {alpha.precision(), true};
  return {mpz_valuation(diff, p), false};
}

}  // namespace crossplace
