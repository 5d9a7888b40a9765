// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/field.hpp"

#include <vector>

namespace polyflow {

struct BadApproxReport {
  Integer A;
  long n_max = 0;
  bool passed = false;
  FieldElement min_value;  // min over n of n (A+2) ||n alpha||
  long argmin = 0;
  std::vector<Integer> digits_checked;
};

/// Checks ||n alpha|| > 1/((A+2) n) exactly for 1 <= n <= n_max.
/// Throws std::invalid_argument when alpha is rational, outside (0, 1), or
/// has a continued fraction digit above A before the denominators pass
/// n_max; throws std::logic_error naming n on a counterexample.
BadApproxReport check_bad_approx_bound(const FieldElement& alpha, const Integer& A, long n_max);

/// Smallest positive integer D with D*alpha, D*alpha*beta, D*beta having
/// integer coordinates. Integer coordinates over a basis of algebraic
/// integers give an algebraic integer, so D works for every shift by m.
Integer denominator_constant(const FieldElement& alpha, const FieldElement& beta);

struct LinearFormBound {
  FieldElement bound;      // certified lower bound for ||lambda||
  FieldElement distance;   // exact ||lambda||
  Integer nearest;         // m = floor(lambda + 1/2)
  Integer c4;
  Rational conjugate_bound;  // rho >= every |conjugate of c4 (lambda - m)|
};

/// Repeated evaluation of lambda = n1 alpha + n2 alpha beta - n3 beta with
/// the shared data (c4, integer coordinates) computed once.
class LinearFormEvaluator {
 public:
  LinearFormEvaluator(const FieldElement& alpha, const FieldElement& beta);

  const Integer& c4() const { return c4_; }
  std::size_t degree() const { return tower_.degree(); }

  FieldElement form(long n1, long n2, long n3) const;
  /// Throws std::invalid_argument if n1 = n2 = 0, std::domain_error
  /// ("degenerate form") when lambda is an integer.
  LinearFormBound bound(long n1, long n2, long n3) const;

 private:
  TowerSpec tower_;
  FieldElement alpha_, alpha_beta_, beta_;
  Integer c4_;
  std::vector<Integer> ia_, iab_, ib_;  // c4 times coordinates
};

LinearFormBound linear_form_lower_bound(long n1, long n2, long n3, const FieldElement& alpha,
                                        const FieldElement& beta);

/// c5 with ||lambda|| > c5 / N^(d-1), N = max |ni|, from conjugate modulus
/// bounds of alpha, alpha beta and beta.
struct CertifiedC5 {
  Rational c5;
  Integer c4;
  Rational bound_alpha, bound_alpha_beta, bound_beta;
  unsigned exponent = 0;  // d - 1
};
CertifiedC5 certified_c5(const FieldElement& alpha, const FieldElement& beta);

struct EmpiricalC5 {
  Rational value;                      // rational upper approximation of the min
  FieldElement exact_min;              // min of N^5 ||lambda||
  long n1 = 0, n2 = 0, n3 = 0;         // argmin
  std::vector<Rational> running_min;   // [N-1]: upper approximation of min over heights <= N
};

/// Exhaustive min over 1 <= max|ni| <= N_max (n1^2 + n2^2 >= 1) of
/// max|ni|^5 ||lambda||. Throws std::domain_error ("field degenerate") when
/// 1, alpha, alpha beta, beta are linearly dependent over Q.
EmpiricalC5 empirical_c5(const FieldElement& alpha, const FieldElement& beta, long N_max);

}  // namespace polyflow
