#include "galekit/gale_value.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>

#include "galekit/errors.hpp"

namespace galekit {
namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t precision) { mpfr_init2(value_, precision); mpfr_set_zero(value_, 1); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

// Evaluates the sum and the sum of absolute values of its terms.
void evaluate(const std::map<Rational, Rational>& terms, mpfr_prec_t precision, Mpfr& sum,
              Mpfr& magnitude) {
  Mpfr term(precision);
  Mpfr power(precision);
  for (const auto& [exponent, coefficient] : terms) {
    mpfr_set_q(power.get(), exponent.get_mpq_t(), MPFR_RNDN);
    mpfr_exp2(power.get(), power.get(), MPFR_RNDN);
    mpfr_set_q(term.get(), coefficient.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term.get(), term.get(), power.get(), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    mpfr_abs(term.get(), term.get(), MPFR_RNDN);
    mpfr_add(magnitude.get(), magnitude.get(), term.get(), MPFR_RNDN);
  }
}

Rational fractional_part(const Rational& r, Integer& integer_part) {
  integer_part = floor(r);
  return r - Rational(integer_part);
}

Rational scale_by_power_of_two(const Rational& value, const Integer& exponent) {
  if (!exponent.fits_slong_p()) {
    throw DomainError("GaleValue: exponent out of range");
  }
  return value * pow2(exponent.get_si());
}

}  // namespace

GaleValue::GaleValue(const Rational& r) {
  if (r != 0) terms_.emplace(Rational(0), r);
}

GaleValue GaleValue::power_term(const Rational& coefficient, const Rational& exponent) {
  GaleValue v;
  Integer whole;
  const Rational frac = fractional_part(exponent, whole);
  v.add_term(scale_by_power_of_two(coefficient, whole), frac);
  return v;
}

void GaleValue::add_term(const Rational& coefficient, const Rational& fractional_exponent) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(fractional_exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

GaleValue& GaleValue::operator+=(const GaleValue& other) {
  for (const auto& [e, c] : other.terms_) add_term(c, e);
  return *this;
}

GaleValue& GaleValue::operator-=(const GaleValue& other) {
  for (const auto& [e, c] : other.terms_) add_term(Rational(-c), e);
  return *this;
}

GaleValue GaleValue::scaled(const Rational& factor) const {
  GaleValue v;
  if (factor == 0) return v;
  for (const auto& [e, c] : terms_) v.terms_.emplace(e, c * factor);
  return v;
}

GaleValue GaleValue::times_power_of_two(const Rational& exponent) const {
  GaleValue v;
  for (const auto& [e, c] : terms_) {
    Integer whole;
    const Rational frac = fractional_part(e + exponent, whole);
    v.add_term(scale_by_power_of_two(c, whole), frac);
  }
  return v;
}

GaleValue GaleValue::divided_by(const GaleValue& single_term) const {
  if (single_term.terms_.size() != 1) {
    throw DomainError("GaleValue::divided_by expects a nonzero single-term divisor");
  }
  const auto& [e, c] = *single_term.terms_.begin();
  return scaled(Rational(1) / c).times_power_of_two(-e);
}

bool GaleValue::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Rational GaleValue::as_rational() const {
  if (!is_rational()) throw DomainError("GaleValue is not rational: " + to_string());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

int GaleValue::sign() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1) return sgn(terms_.begin()->second);
  bool any_negative = false;
  bool any_positive = false;
  for (const auto& [e, c] : terms_) {
    (c < 0 ? any_negative : any_positive) = true;
  }
  if (!any_negative) return 1;
  if (!any_positive) return -1;
  if (terms_.size() == 2) {
    // c1 2^e1 + c2 2^e2 with c1 > 0 > c2: compare c1/|c2| with 2^(e2 - e1).
    auto first = terms_.begin();
    auto second = std::next(first);
    if (first->second < 0) std::swap(first, second);
    const Rational ratio = first->second / Rational(-second->second);
    const auto c = compare_with_power_of_two(ratio, second->first - first->first);
    return c == std::strong_ordering::greater ? 1 : (c == std::strong_ordering::less ? -1 : 0);
  }
  // Mixed signs: the sum is nonzero (linear independence), so enough
  // precision always resolves it.
  for (mpfr_prec_t precision : {512, 4096, 65536}) {
    Mpfr sum(precision);
    Mpfr magnitude(precision);
    evaluate(terms_, precision, sum, magnitude);
    Mpfr threshold(precision);
    mpfr_mul_2si(threshold.get(), magnitude.get(), -(precision - 32), MPFR_RNDN);
    Mpfr absolute(precision);
    mpfr_abs(absolute.get(), sum.get(), MPFR_RNDN);
    if (mpfr_cmp(absolute.get(), threshold.get()) > 0) return mpfr_sgn(sum.get()) > 0 ? 1 : -1;
  }
  throw InvariantViolation("GaleValue::sign could not resolve " + to_string());
}

std::strong_ordering operator<=>(const GaleValue& a, const GaleValue& b) {
  if (a == b) return std::strong_ordering::equal;
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double GaleValue::to_double() const {
  const double l = log2();
  if (std::isinf(l) && l < 0) return 0.0;
  return std::exp2(l);
}

double GaleValue::log2() const {
  if (terms_.empty()) return -std::numeric_limits<double>::infinity();
  if (terms_.size() == 1) {
    const auto& [e, c] = *terms_.begin();
    if (c < 0) return std::numeric_limits<double>::quiet_NaN();
    return log2_approx(c) + e.get_d();
  }
  const mpfr_prec_t precision = 256;
  Mpfr sum(precision);
  Mpfr magnitude(precision);
  evaluate(terms_, precision, sum, magnitude);
  if (mpfr_sgn(sum.get()) <= 0) return std::numeric_limits<double>::quiet_NaN();
  mpfr_log2(sum.get(), sum.get(), MPFR_RNDN);
  return mpfr_get_d(sum.get(), MPFR_RNDN);
}

std::string GaleValue::to_string() const {
  if (is_rational()) return format_rational(as_rational());
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += "+";
    out += format_rational(c);
    if (e != 0) out += "*2^(" + format_rational(e) + ")";
  }
  return out;
}

}  // namespace galekit
