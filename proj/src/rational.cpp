#include "crossplace/rational.hpp"

#include <cmath>

#include "crossplace/errors.hpp"

namespace crossplace {

namespace {

static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 platform expected");

mpz_class mpz_from_int64(std::int64_t v) { return mpz_class(static_cast<long>(v)); }

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t value) : q_(mpz_from_int64(value)) {}

Rational::Rational(std::int64_t num, std::int64_t den)
    : Rational(mpz_from_int64(num), mpz_from_int64(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view t = text;
  bool negative = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  const auto slash = t.find('/');
  const std::string_view num_part = t.substr(0, slash);
  const std::string_view den_part = slash == std::string_view::npos ? "1" : t.substr(slash + 1);
  if (!all_digits(num_part) || !all_digits(den_part)) {
    throw InvalidArgument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num_part), 10);
  mpz_class d(std::string(den_part), 10);
  if (d == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return Rational(n, d);
}

Rational Rational::power(std::int64_t base, std::int64_t exponent) {
  if (base == 0 && exponent <= 0) throw InvalidArgument("0 to a non-positive power");
  mpz_class b = mpz_from_int64(base);
  mpz_class p;
  const auto e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), e);
  return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p, mpz_class(1));
}

mpz_class Rational::height() const {
  mpz_class a = ::abs(q_.get_num());
  return a > q_.get_den() ? a : mpz_class(q_.get_den());
}

long double Rational::to_long_double() const {
  // Split into integer and fractional parts to keep precision for large values.
  long exp_n = 0;
  long exp_d = 0;
  const double mn = mpz_get_d_2exp(&exp_n, q_.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&exp_d, q_.get_den_mpz_t());
  if (md == 0.0) return 0.0L;
  return std::ldexp(static_cast<long double>(mn) / static_cast<long double>(md),
                    static_cast<int>(exp_n - exp_d));
}

std::string Rational::to_string() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational Rational::floor_part() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return Rational(f, mpz_class(1));
}

Rational Rational::frac() const { return *this - floor_part(); }

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero rational");
  q_ /= o.q_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-q_)); }

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw BudgetExceeded("integer " + z.get_str() + " exceeds 64 bits");
  return static_cast<std::int64_t>(z.get_si());
}

}  // namespace crossplace
