// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/field.hpp"

#include <vector>

namespace polyflow {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Matrix of y -> x*y on the monomial basis (column j holds x*b_j).
RationalMatrix multiplication_matrix(const FieldElement& x);

Rational determinant(RationalMatrix m);
/// Solves m v = rhs; throws std::domain_error for singular m.
std::vector<Rational> solve_linear(RationalMatrix m, std::vector<Rational> rhs);
std::size_t rank(RationalMatrix m);

/// Coefficients p[0..n] of det(xI - m), p[n] = 1 (division-free Berkowitz).
std::vector<Rational> characteristic_polynomial(const RationalMatrix& m);
std::vector<Integer> characteristic_polynomial(const std::vector<std::vector<Integer>>& m);

/// Characteristic polynomial of multiplication by x; its roots are the
/// conjugates of x, each repeated degree/deg(minpoly) times.
std::vector<Rational> characteristic_polynomial(const FieldElement& x);

/// det of the multiplication matrix; 0 iff x == 0.
Rational field_norm(const FieldElement& x);

/// Rational rho with |z| <= rho for every complex root z of the monic
/// polynomial p (Cauchy bound, certified by an exact sign check).
Rational root_modulus_bound(const std::vector<Rational>& p);

}  // namespace polyflow
