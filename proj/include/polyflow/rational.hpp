// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace polyflow {

using Integer = mpz_class;
// mpq_class keeps values canonical (lowest terms, positive denominator)
// after every arithmetic operation.
using Rational = mpq_class;

/// Builds n/d in lowest terms. Throws std::domain_error when d == 0.
Rational make_rational(const Integer& n, const Integer& d = 1);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
Rational abs_of(const Rational& q);
Rational pow_of(const Rational& q, unsigned long e);
Integer pow_of(const Integer& z, unsigned long e);

/// "p" or "p/q".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Parses "p", "-p" or "p/q" (q > 0). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Nearest double; exponent range is clamped by the hardware.
double to_double(const Rational& q);

/// Decimal with the given number of significant digits (used only for
/// display shadows, never for decisions).
std::string to_decimal(double value, int significant = 15);

}  // namespace polyflow
