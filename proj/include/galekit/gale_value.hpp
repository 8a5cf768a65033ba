#pragma once

#include <compare>
#include <map>
#include <string>

#include "galekit/rational.hpp"

namespace galekit {

// An exact nonnegative-or-signed real of the form  sum_r c_r * 2^r  with
// rational coefficients c_r and distinct rational exponents r in [0, 1).
//
// Values of s-gales are 2^((s-1)|w|) d(w), irrational whenever (s-1)|w| is not
// an integer. Because x^q - 2 is irreducible over Q, the numbers 2^(j/q),
// 0 <= j < q, are linearly independent, so equality of two GaleValues is
// decided exactly by comparing coefficients. Ordering is exact for single
// terms and falls back to a high-precision MPFR evaluation otherwise.
class GaleValue {
 public:
  GaleValue() = default;
  GaleValue(const Rational& r);  // NOLINT(google-explicit-constructor)
  GaleValue(long v) : GaleValue(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  // coefficient * 2^exponent
  static GaleValue power_term(const Rational& coefficient, const Rational& exponent);

  GaleValue& operator+=(const GaleValue& other);
  GaleValue& operator-=(const GaleValue& other);
  friend GaleValue operator+(GaleValue a, const GaleValue& b) { return a += b; }
  friend GaleValue operator-(GaleValue a, const GaleValue& b) { return a -= b; }

  GaleValue scaled(const Rational& factor) const;
  GaleValue times_power_of_two(const Rational& exponent) const;
  // Division by a single-term value (m * 2^e, m != 0).
  GaleValue divided_by(const GaleValue& single_term) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_single_term() const { return terms_.size() <= 1; }
  bool is_rational() const;
  Rational as_rational() const;  // requires is_rational()

  // -1, 0, +1. Exact whenever at most one term is present.
  int sign() const;

  friend bool operator==(const GaleValue& a, const GaleValue& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const GaleValue& a, const GaleValue& b);

  double to_double() const;
  // log2 of a positive value; -inf for zero.
  double log2() const;

  // "num/den" for rationals, otherwise "c*2^(p/q)" terms joined by '+'.
  std::string to_string() const;

  const std::map<Rational, Rational>& terms() const { return terms_; }

 private:
  void add_term(const Rational& coefficient, const Rational& fractional_exponent);

  std::map<Rational, Rational> terms_;  // fractional exponent -> nonzero coefficient
};

}  // namespace galekit
