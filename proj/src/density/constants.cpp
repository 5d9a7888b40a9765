// SPDX-License-Identifier: Apache-2.0
#include "polyflow/density.hpp"

#include "polyflow/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyflow {

namespace {

double log10_rational(const Rational& q) {
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log10(std::fabs(mn) / md) + static_cast<double>(en - ed) * std::log10(2.0);
}

}  // namespace

double log10_of(const FieldElement& x) {
  if (x.sign() <= 0) throw std::domain_error("log10 of a non-positive element");
  if (x.is_rational()) return log10_rational(x.rational_value());
  for (unsigned bits = 64;; bits *= 2) {
    RationalInterval iv = x.enclose(bits);
    if (sgn(iv.lo) > 0 && iv.hi <= 2 * iv.lo) {
      double a = log10_rational(iv.lo), b = log10_rational(iv.hi);
      return 0.5 * (a + b);
    }
  }
}

Integer ConstantsLedger::window(const FieldElement& x) const {
  if (x.sign() <= 0) throw std::invalid_argument("interval length must be positive");
  FieldElement q = FieldElement(Rational(9 * s * s * (A + 2))) / x;
  return floor(q) + 1;
}

ConstantsLedger constants(long A, long s) {
  if (A < 1 || s < 1) throw std::invalid_argument("constants need A >= 1 and s >= 1");
  ConstantsLedger L;
  L.A = A;
  L.s = s;
  Integer base = Integer(36) * s * s * (A + 2) * (A + 2);
  L.c1 = make_rational(1, pow_of(base, static_cast<unsigned long>(s + 1)));
  for (long i = 0; i <= s + 1; ++i) L.delta.push_back(make_rational(1, pow_of(base, static_cast<unsigned long>(i))));
  Rational lead(Integer(9) * s * s * (A + 2));
  Rational inv_c1 = 1 / L.c1;
  Rational f = 0, r = 0;
  for (long i = 0; i <= s; ++i) {
    f += lead * pow_of(inv_c1, static_cast<unsigned long>(i));
    r += lead * Rational(pow_of(base, static_cast<unsigned long>(i))) * pow_of(inv_c1, static_cast<unsigned long>(s));
  }
  L.forward_sum = f;
  L.reverse_sum = r;
  Rational K = std::max(f, r);
  // sqrt(2) K is irrational, so floor(sqrt(2 K^2)) + 1 is its ceiling.
  Integer sq = floor_of(2 * K * K);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), sq.get_mpz_t());
  L.c0 = root + 1;
  L.c2 = make_rational(1, Integer(A + 2) * L.c0);
  L.c3 = Rational(Integer(2 * (A + 2)) * L.c0 * L.c0);
  return L;
}

Integer OctagonLedger::window(const FieldElement& x) const {
  if (x.sign() <= 0) throw std::invalid_argument("interval length must be positive");
  FieldElement x5 = x * x * x * x * x;
  FieldElement q = FieldElement(Rational(729000000) / c5) / x5;
  return floor(q) + 1;
}

bool OctagonLedger::visit_bound_holds(double log10_t, const FieldElement& x) const {
  double c9 = std::pow(10.0, log10_c9);
  return log10_t <= log10_c8 - c9 * log10_of(x);
}

OctagonLedger octagon_constants() {
  OctagonLedger L;
  TowerSpec k = TowerSpec::sqrt2_cbrt3();
  L.alpha = FieldElement::generator(k, "c") * FieldElement(Rational(1, 2));
  L.beta = FieldElement::generator(k, "r");
  CertifiedC5 cc = certified_c5(L.alpha, L.beta);
  L.c5 = cc.c5;
  L.c4 = cc.c4;
  L.norm_exponent = cc.exponent;
  L.edge_count = 7;
  if (!(sgn(L.c5) > 0 && L.c5 < 1)) throw std::logic_error("certified c5 outside (0, 1)");

  const double l2 = std::log10(2.0), l5 = std::log10(5.0);
  L.log10_c5 = log10_rational(L.c5);
  double log_c5_60 = L.log10_c5 - std::log10(60.0);
  L.log10_c10 = std::pow(6.0, 16) * log_c5_60;
  L.log10_c10_exponent = 16 * l5;

  // Kept lengths: x_i >= c10^S_i x^(5^(16 i)), S_i = sum_{j<i} 5^(16 j).
  double S7 = 0;
  for (int j = 0; j < 7; ++j) S7 += std::pow(5.0, 16 * j);
  double forward = std::log10(16.0) + 6 * std::log10(30.0) - L.log10_c5 - 5 * S7 * L.log10_c10;
  double reverse = l2 + std::pow(6.0, 15) * (-log_c5_60) - std::pow(5.0, 15) * S7 * L.log10_c10;
  L.log10_c8 = l2 + std::max(forward, reverse);
  L.log10_c9 = 127 * l5;
  L.log10_c11 = L.log10_c5 - 5 * L.log10_c8;
  L.log10_c12 = l5 + L.log10_c9;
  double c9 = std::pow(10.0, L.log10_c9), c12 = std::pow(10.0, L.log10_c12);
  L.log10_c13 = l2 + L.log10_c8 - L.log10_c11 + (c9 + c12) * l2;
  L.log10_c14 = std::log10(c9 + c12 - 1);
  return L;
}

}  // namespace polyflow
