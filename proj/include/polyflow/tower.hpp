// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyflow {

/// One adjoined radical: the positive real root of x^exponent - radicand.
struct Generator {
  std::string name;
  int exponent = 2;  // 2 or 3
  Integer radicand = 2;

  bool operator==(const Generator&) const = default;
};

class TowerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;
};

namespace detail {
struct TowerData;
}

/// Real multi-radical field Q(g1, ..., gk) with gi^ei = ri, ei in {2, 3}.
///
/// Elements are coordinate vectors over the monomial basis
/// g1^a1 ... gk^ak (0 <= ai < ei) in lexicographic exponent order, the first
/// generator being the most significant digit. The real embedding is fixed:
/// every generator is the positive real root.
///
/// Construction checks that the algebra is a field of the full degree. Since
/// all roots are positive reals, this holds iff no nontrivial basis monomial
/// is rational (Mordell's criterion), which is an exact integer test.
class TowerSpec {
 public:
  /// The trivial tower Q.
  TowerSpec();
  explicit TowerSpec(std::vector<Generator> generators);

  std::size_t degree() const;
  const std::vector<Generator>& generators() const;
  std::optional<std::size_t> generator_index(const std::string& name) const;

  /// Exponent vector of basis monomial m.
  const std::vector<int>& exponents(std::size_t m) const;
  /// Basis index of an exponent vector (each entry reduced already).
  std::size_t basis_index(const std::vector<int>& exps) const;
  /// b_i * b_j = factor * b_k.
  std::size_t product_index(std::size_t i, std::size_t j) const;
  const Integer& product_factor(std::size_t i, std::size_t j) const;

  /// Nearest-double value of each basis monomial (relative error < 2^-52).
  double monomial_value(std::size_t m) const;
  /// Rational enclosure of basis monomial m with generator enclosures of
  /// width 2^-bits.
  RationalInterval monomial_enclosure(std::size_t m, unsigned bits) const;

  /// Canonical "name^e=r, ..." form (empty for Q).
  std::string to_string() const;

  /// True when every generator of *this also appears (same name, exponent,
  /// radicand) in other.
  bool embeds_in(const TowerSpec& other) const;

  bool operator==(const TowerSpec& other) const;
  bool operator!=(const TowerSpec& other) const { return !(*this == other); }

  const detail::TowerData* data() const { return data_.get(); }

  /// Q(sqrt2), Q(sqrt5), Q(sqrt2, cbrt3) with generator names r, s, c.
  static TowerSpec sqrt2();
  static TowerSpec sqrt5();
  static TowerSpec sqrt2_cbrt3();

 private:
  std::shared_ptr<const detail::TowerData> data_;
};

}  // namespace polyflow
