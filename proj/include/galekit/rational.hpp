#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace galekit {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q" or a plain integer "p". Rejects floats and zero denominators.
Rational parse_rational(std::string_view text);

// "num/den" with the denominator always present (e.g. "3/1").
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

// log2 of a positive rational, accurate to about 1e-15 absolute even when
// numerator and denominator have thousands of bits.
double log2_approx(const Rational& value);

// 2^k for a (possibly negative) integer exponent.
Rational pow2(std::int64_t exponent);

// Exact three-way comparison of value against 2^exponent, where value >= 0
// and exponent is an arbitrary rational. A floating estimate decides the
// common case; ties and near-ties are settled with integer powers.
std::strong_ordering compare_with_power_of_two(const Rational& value,
                                               const Rational& exponent);

// ceil and floor of a rational as an Integer.
Integer ceil(const Rational& value);
Integer floor(const Rational& value);

// True when the denominator (in lowest terms) is a power of two.
bool is_dyadic(const Rational& value);

}  // namespace galekit
