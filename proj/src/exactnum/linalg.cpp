// SPDX-License-Identifier: Apache-2.0
#include "polyflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyflow {

namespace {

template <class T>
std::vector<T> berkowitz(const std::vector<std::vector<T>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {T(1)};
  // Coefficients highest degree first.
  std::vector<T> vect{T(1), T(-a[0][0])};
  std::vector<T> v, w, t;
  for (std::size_t r = 1; r < n; ++r) {
    t.assign(1, T(1));
    t.push_back(-a[r][r]);
    v.resize(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = a[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      T dot = 0;
      for (std::size_t i = 0; i < r; ++i) dot += a[r][i] * v[i];
      t.push_back(-dot);
      if (k + 1 == r) break;
      w.assign(r, T(0));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) w[i] += a[i][j] * v[j];
      v.swap(w);
    }
    std::vector<T> next(r + 2, T(0));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += t[i - j] * vect[j];
    vect.swap(next);
  }
  std::reverse(vect.begin(), vect.end());
  return vect;
}

// Row-reduces m in place; returns the rank and the determinant sign flips.
std::size_t eliminate(RationalMatrix& m, Rational* det, std::vector<Rational>* rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  if (det) *det = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
    if (piv == rows) {
      if (det) *det = 0;
      continue;
    }
    if (piv != rank) {
      std::swap(m[piv], m[rank]);
      if (rhs) std::swap((*rhs)[piv], (*rhs)[rank]);
      if (det) *det = -*det;
    }
    if (det) *det *= m[rank][c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
      if (rhs) (*rhs)[r] -= f * (*rhs)[rank];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

RationalMatrix multiplication_matrix(const FieldElement& x) {
  const auto& t = x.tower();
  const std::size_t d = t.degree();
  RationalMatrix m(d, std::vector<Rational>(d));
  const auto& c = x.coords();
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(c[i]) == 0) continue;
    for (std::size_t j = 0; j < d; ++j) m[t.product_index(i, j)][j] += c[i] * t.product_factor(i, j);
  }
  return m;
}

Rational determinant(RationalMatrix m) {
  Rational det;
  eliminate(m, &det, nullptr);
  return det;
}

std::vector<Rational> solve_linear(RationalMatrix m, std::vector<Rational> rhs) {
  const std::size_t n = m.size();
  if (eliminate(m, nullptr, &rhs) < n) throw std::domain_error("singular linear system");
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

std::size_t rank(RationalMatrix m) { return eliminate(m, nullptr, nullptr); }

std::vector<Rational> characteristic_polynomial(const RationalMatrix& m) { return berkowitz(m); }

std::vector<Integer> characteristic_polynomial(const std::vector<std::vector<Integer>>& m) { return berkowitz(m); }

std::vector<Rational> characteristic_polynomial(const FieldElement& x) {
  return characteristic_polynomial(multiplication_matrix(x));
}

Rational field_norm(const FieldElement& x) {
  if (x.is_rational()) return pow_of(x.coords()[0], x.tower().degree());
  return determinant(multiplication_matrix(x));
}

Rational root_modulus_bound(const std::vector<Rational>& p) {
  const std::size_t n = p.size() - 1;
  std::vector<Rational> mags(n);
  Rational crude = 0;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    mags[i] = abs_of(p[i]);
    if (sgn(mags[i]) != 0) any = true;
    if (mags[i] > crude) crude = mags[i];
  }
  if (!any) return 0;
  crude += 1;  // classical Cauchy bound, always valid
  // q(x) = x^n - sum |p_i| x^i has one positive root; q >= 0 beyond it.
  auto q_nonnegative = [&](const Rational& x) {
    Rational acc = 1;
    for (std::size_t i = n; i-- > 0;) acc = acc * x - mags[i];
    // acc now holds x^n - ... evaluated by Horner with leading coefficient 1.
    return sgn(acc) >= 0;
  };
  std::vector<double> md(n);
  for (std::size_t i = 0; i < n; ++i) md[i] = mags[i].get_d();
  double hi = crude.get_d();
  if (!std::isfinite(hi)) return crude;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > hi * 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    double acc = 1.0;
    for (std::size_t i = n; i-- > 0;) acc = acc * mid - md[i];
    (acc >= 0 ? hi : lo) = mid;
  }
  double est = hi * (1 + 1e-12);
  for (int attempt = 0; attempt < 40; ++attempt) {
    Rational rho(std::ceil(std::ldexp(est, 32)));
    mpq_div_2exp(rho.get_mpq_t(), rho.get_mpq_t(), 32);
    if (rho >= crude) return crude;
    if (sgn(rho) > 0 && q_nonnegative(rho)) return rho;
    est *= 1 + 1e-9 * (1 << std::min(attempt, 20));
  }
  return crude;
}

}  // namespace polyflow
