#include "crossplace/approx_function.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "crossplace/errors.hpp"

namespace crossplace {

namespace {

// Natural log of a positive GMP integer without overflow.
long double mpz_log(const mpz_class& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

long double rational_log(const Rational& x) { return mpz_log(x.num()) - mpz_log(x.den()); }

mpz_class mpz_pow(const mpz_class& base, const mpz_class& exp) {
  if (!exp.fits_ulong_p()) throw BudgetExceeded("exponent too large for exact comparison");
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp.get_ui());
  return out;
}

// Relative log-margin below which the floating prefilter defers to exact math.
constexpr long double kPrefilterMargin = 1e-9L;
// Power-log comparisons closer than this are refused.
constexpr long double kPowerLogMargin = 1e-13L;

}  // namespace

ApproxFunction ApproxFunction::power_law(const Rational& tau) {
  if (tau.sign() <= 0) throw InvalidFunction("power law exponent must be positive");
  return ApproxFunction(ApproxFamily::PowerLaw, tau, {});
}

ApproxFunction ApproxFunction::power_log(const Rational& sigma) {
  if (sigma <= Rational(-2)) throw InvalidFunction("power-log needs sigma > -2 to stay decreasing");
  return ApproxFunction(ApproxFamily::PowerLog, sigma, {});
}

ApproxFunction ApproxFunction::table(std::vector<Rational> values) {
  if (values.empty()) throw InvalidFunction("empty psi table");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].sign() <= 0) {
      throw InvalidFunction("psi(" + std::to_string(i + 1) + ") is not a positive rational");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw InvalidFunction("psi table increases at n=" + std::to_string(i + 1));
    }
  }
  return ApproxFunction(ApproxFamily::Table, Rational(0), std::move(values));
}

ApproxFunction ApproxFunction::load_table(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw InvalidArgument("cannot open psi table " + csv.string());
  std::vector<Rational> values;
  std::string line;
  std::int64_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line == "n,psi") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("psi table line without comma: " + line);
    const Rational n = Rational::parse(line.substr(0, comma));
    if (!(n == Rational(expected))) {
      throw InvalidArgument("psi table rows must be n = 1, 2, ... consecutively");
    }
    values.push_back(Rational::parse(line.substr(comma + 1)));
    ++expected;
  }
  auto f = table(std::move(values));
  f.table_source_ = csv.string();
  return f;
}

ApproxFunction ApproxFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("psi must be pow:<tau>, powlog:<sigma> or table:<path>");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (kind == "pow") return power_law(Rational::parse(arg));
  if (kind == "powlog") return power_log(Rational::parse(arg));
  if (kind == "table") return load_table(std::filesystem::path(std::string(arg)));
  throw InvalidArgument("unknown psi family '" + std::string(kind) + "'");
}

std::string ApproxFunction::to_string() const {
  switch (family_) {
    case ApproxFamily::PowerLaw:
      return "pow:" + (exponent_.is_integer() ? exponent_.num().get_str() : exponent_.to_string());
    case ApproxFamily::PowerLog:
      return "powlog:" + (exponent_.is_integer() ? exponent_.num().get_str() : exponent_.to_string());
    case ApproxFamily::Table:
      return "table:" + (table_source_.empty() ? std::string("<inline>") : table_source_);
  }
  return {};
}

std::int64_t ApproxFunction::domain_limit() const {
  return family_ == ApproxFamily::Table ? static_cast<std::int64_t>(table_.size())
                                        : std::numeric_limits<std::int64_t>::max();
}

void ApproxFunction::check_domain(std::int64_t h) const {
  if (h < 1) throw InvalidFunction("psi is defined for h >= 1");
  if (h > domain_limit()) throw InvalidFunction("psi table undefined at h=" + std::to_string(h));
}

long double ApproxFunction::log_value(std::int64_t h) const {
  check_domain(h);
  const long double lh = std::log(static_cast<long double>(h));
  switch (family_) {
    case ApproxFamily::PowerLaw:
      return -exponent_.to_long_double() * lh;
    case ApproxFamily::PowerLog:
      return -2.0L * lh - exponent_.to_long_double() * std::log1p(lh);
    case ApproxFamily::Table:
      return rational_log(table_[static_cast<std::size_t>(h - 1)]);
  }
  return 0;
}

double ApproxFunction::value(std::int64_t h) const { return static_cast<double>(std::exp(log_value(h))); }

std::optional<Rational> ApproxFunction::exact_value(std::int64_t h) const {
  check_domain(h);
  if (h == 1 && family_ != ApproxFamily::Table) return Rational(1);
  switch (family_) {
    case ApproxFamily::PowerLaw:
      if (!exponent_.is_integer()) return std::nullopt;
      return Rational::power(h, -to_int64(exponent_.num()));
    case ApproxFamily::PowerLog:
      return std::nullopt;
    case ApproxFamily::Table:
      return table_[static_cast<std::size_t>(h - 1)];
  }
  return std::nullopt;
}

int ApproxFunction::compare(std::int64_t h, const Rational& x) const {
  check_domain(h);
  if (x.sign() <= 0) return 1;
  if (family_ == ApproxFamily::Table) {
    const auto& v = table_[static_cast<std::size_t>(h - 1)];
    return v < x ? -1 : (v == x ? 0 : 1);
  }
  if (h == 1) {
    const Rational one(1);
    return one < x ? -1 : (one == x ? 0 : 1);
  }
  const long double diff = log_value(h) - rational_log(x);
  const long double scale = std::max(1.0L, std::fabs(rational_log(x)));
  if (family_ == ApproxFamily::PowerLog) {
    if (std::fabs(diff) < kPowerLogMargin * scale) {
      throw InvalidFunction("power-log comparison at h=" + std::to_string(h) + " is below the decidable margin");
    }
    return diff > 0 ? 1 : -1;
  }
  if (std::fabs(diff) > kPrefilterMargin * scale) return diff > 0 ? 1 : -1;
  // h^(-u/v) vs a/b  <=>  b^v vs a^v h^u
  const mpz_class u = exponent_.num();
  const mpz_class v = exponent_.den();
  const mpz_class lhs = mpz_pow(x.den(), v);
  const mpz_class rhs = mpz_pow(x.num(), v) * mpz_pow(mpz_class(static_cast<long>(h)), u);
  return cmp(lhs, rhs) > 0 ? 1 : (cmp(lhs, rhs) == 0 ? 0 : -1);
}

std::int64_t ApproxFunction::closed_exponent(std::int64_t h, std::uint64_t p) const {
  const auto base = static_cast<std::int64_t>(p);
  const long double est = -log_value(h) / std::log(static_cast<long double>(p));
  auto t = static_cast<std::int64_t>(std::ceil(est - 1e-9L));
  // Establish p^-t <= psi(h) < p^(-t+1).
  while (!at_least(h, Rational::power(base, -t))) ++t;
  while (at_least(h, Rational::power(base, -(t - 1)))) --t;
  return t;
}

std::int64_t ApproxFunction::open_exponent(std::int64_t h, std::uint64_t p) const {
  const std::int64_t t = closed_exponent(h, p);
  return compare(h, Rational::power(static_cast<std::int64_t>(p), -t)) == 0 ? t + 1 : t;
}

RegularityCertificate ApproxFunction::certify_regularity(std::span<const std::int64_t> s_values,
                                                         std::int64_t probe_bound) const {
  RegularityCertificate cert;
  cert.probe_bound = probe_bound;
  for (std::int64_t s : s_values) {
    if (s < 2) throw InvalidArgument("regularity probe needs s >= 2");
    long double worst = std::numeric_limits<long double>::infinity();
    const std::int64_t upper = std::min(probe_bound, domain_limit() / s);
    for (std::int64_t n = 1; n <= upper; ++n) {
      worst = std::min(worst, std::exp(log_value(s * n) - log_value(n)));
    }
    if (!(worst > 0)) throw InvalidFunction("regularity fails for s=" + std::to_string(s));
    cert.constants.emplace_back(s, static_cast<double>(worst));
  }
  return cert;
}

ApproxFunction ApproxFunction::with_certificate(RegularityCertificate cert) const {
  ApproxFunction out = *this;
  out.regularity_ = std::move(cert);
  return out;
}

}  // namespace crossplace
