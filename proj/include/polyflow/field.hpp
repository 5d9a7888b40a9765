// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/rational.hpp"
#include "polyflow/tower.hpp"

#include <compare>
#include <string>
#include <vector>

namespace polyflow {

/// Exact element of a TowerSpec field.
///
/// Elements of the trivial tower Q combine freely with elements of any
/// tower; otherwise both operands must share a tower.
class FieldElement {
 public:
  FieldElement();
  FieldElement(const Rational& q);  // NOLINT: implicit over Q
  FieldElement(long q);             // NOLINT
  FieldElement(const TowerSpec& tower, const Rational& q);
  FieldElement(const TowerSpec& tower, std::vector<Rational> coords);

  static FieldElement generator(const TowerSpec& tower, std::size_t index);
  static FieldElement generator(const TowerSpec& tower, const std::string& name);

  const TowerSpec& tower() const { return tower_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Constant coordinate; throws std::domain_error unless is_rational().
  const Rational& rational_value() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  FieldElement& operator*=(const Rational& q);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  /// Multiplicative inverse; throws std::domain_error for zero.
  FieldElement inverse() const;

  /// Exact sign of the real embedding.
  int sign() const;

  /// Exact coordinate equality (the basis is linearly independent).
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b);

  /// Rational enclosure with generator enclosures of width 2^-bits.
  RationalInterval enclose(unsigned bits) const;
  double to_double() const;

  /// Re-expresses the element in a tower containing this tower's generators.
  FieldElement lift_to(const TowerSpec& tower) const;

 private:
  void coerce_pair(FieldElement& other);
  const TowerSpec& common_tower(const FieldElement& o) const;

  TowerSpec tower_;
  std::vector<Rational> coords_;
};

FieldElement abs(const FieldElement& x);
inline int sign(const FieldElement& x) { return x.sign(); }
FieldElement min(const FieldElement& a, const FieldElement& b);
FieldElement max(const FieldElement& a, const FieldElement& b);

/// Returns r with |x - r| < eps, certified by rational interval arithmetic.
Rational approx(const FieldElement& x, const Rational& eps);

Integer floor(const FieldElement& x);
/// floor(x + 1/2).
Integer nearest_integer(const FieldElement& x);
/// min over integers m of |x - m|.
FieldElement dist_nearest_int(const FieldElement& x);

/// Canonical text over generator names: terms in basis order joined with
/// " + " / " - ", e.g. "3 - 2*r*c + 1/2*c*c". Parses back through the net
/// expression grammar.
std::string to_string(const FieldElement& x);
std::string to_decimal(const FieldElement& x, int significant = 15);

}  // namespace polyflow
