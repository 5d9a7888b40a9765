// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/field.hpp"

#include <optional>
#include <vector>

namespace polyflow {

struct PeriodicTail {
  std::size_t start = 0;   // index into digits where the period begins
  std::size_t period = 0;
};

/// Partial quotients a1, a2, ... of x = [0; a1, a2, ...].
struct ContinuedFraction {
  std::vector<Integer> digits;
  std::optional<PeriodicTail> periodic_tail;
  bool terminated = false;  // rational input whose expansion ended

  /// Largest digit present (0 when empty).
  Integer max_digit() const;
};

/// First n digits of x in (0, 1). Rational and quadratic inputs are expanded
/// exactly (quadratic ones detect their period); other inputs use certified
/// interval expansion with doubling precision. Throws std::invalid_argument
/// when x is outside (0, 1) or n < 1.
ContinuedFraction cf_digits(const FieldElement& x, std::size_t n);

/// Digit bound A of a purely or eventually periodic expansion, or nullopt if
/// no period was found within max_digits.
std::optional<Integer> periodic_digit_bound(const FieldElement& x, std::size_t max_digits = 512);

}  // namespace polyflow
