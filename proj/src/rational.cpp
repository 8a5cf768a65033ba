#include "galekit/rational.hpp"

#include <cmath>
#include <limits>

#include "galekit/errors.hpp"

namespace galekit {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

double log2_integer(const Integer& z) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return static_cast<double>(exponent) + std::log2(mantissa);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw DomainError("expected a rational of the form p/q, got '" + std::string(text) + "'");
  }
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) {
    throw DomainError("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(n, d);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  const double l = log2_approx(abs(value));
  if (l > 1000.0) return sgn(value) * std::numeric_limits<double>::infinity();
  if (l < -1000.0) return 0.0;
  return value.get_d();
}

double log2_approx(const Rational& value) {
  if (value <= 0) return -std::numeric_limits<double>::infinity();
  return log2_integer(value.get_num()) - log2_integer(value.get_den());
}

Rational pow2(std::int64_t exponent) {
  Integer one = 1;
  Integer p;
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Rational(Integer(1), p);
}

std::strong_ordering compare_with_power_of_two(const Rational& value, const Rational& exponent) {
  if (value < 0) {
    throw DomainError("compare_with_power_of_two: negative value");
  }
  if (value == 0) return std::strong_ordering::less;

  const double estimate = log2_approx(value) - exponent.get_d();
  const double scale = std::max(1.0, std::fabs(exponent.get_d()));
  if (estimate > 1e-9 * scale) return std::strong_ordering::greater;
  if (estimate < -1e-9 * scale) return std::strong_ordering::less;

  // value = a/b, exponent = p/q with q > 0: compare a^q with 2^p * b^q.
  const Integer& a = value.get_num();
  const Integer& b = value.get_den();
  const Integer& p = exponent.get_num();
  const Integer& q = exponent.get_den();
  if (!q.fits_ulong_p() || !p.fits_slong_p()) {
    throw DomainError("compare_with_power_of_two: exponent too large for exact comparison");
  }
  const unsigned long qq = q.get_ui();
  const long pp = p.get_si();
  Integer lhs;
  Integer rhs;
  mpz_pow_ui(lhs.get_mpz_t(), a.get_mpz_t(), qq);
  mpz_pow_ui(rhs.get_mpz_t(), b.get_mpz_t(), qq);
  if (pp >= 0) {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(pp));
  } else {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-pp));
  }
  const int c = cmp(lhs, rhs);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Integer ceil(const Rational& value) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

Integer floor(const Rational& value) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return r;
}

bool is_dyadic(const Rational& value) {
  const Integer& d = value.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

}  // namespace galekit
