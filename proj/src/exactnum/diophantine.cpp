// SPDX-License-Identifier: Apache-2.0
#include "polyflow/diophantine.hpp"

#include "polyflow/contfrac.hpp"
#include "polyflow/linalg.hpp"

#include <cstdlib>
#include <stdexcept>

namespace polyflow {

BadApproxReport check_bad_approx_bound(const FieldElement& alpha, const Integer& A, long n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (A < 1) throw std::invalid_argument("digit bound A must be >= 1");
  if (alpha.is_rational()) throw std::invalid_argument("precondition: alpha is rational, not badly approximable");
  if (alpha.sign() <= 0 || alpha >= FieldElement(1)) throw std::invalid_argument("precondition: alpha must lie in (0, 1)");

  BadApproxReport rep;
  rep.A = A;
  rep.n_max = n_max;

  // Digits matter only while the convergent denominators stay <= n_max.
  std::size_t want = 16;
  for (;;) {
    auto cf = cf_digits(alpha, want);
    Integer q_prev = 0, q = 1;  // q_{-1}, q_0
    std::size_t used = 0;
    bool enough = cf.periodic_tail.has_value();
    for (const auto& a : cf.digits) {
      Integer next = a * q + q_prev;
      q_prev = q;
      q = next;
      ++used;
      if (q > n_max) {
        enough = true;
        break;
      }
    }
    rep.digits_checked.assign(cf.digits.begin(), cf.digits.begin() + static_cast<long>(used));
    if (enough) {
      for (const auto& a : rep.digits_checked)
        if (a > A) throw std::invalid_argument("precondition: continued fraction digit " + a.get_str() + " exceeds A");
      if (cf.periodic_tail)
        for (const auto& a : cf.digits)
          if (a > A) throw std::invalid_argument("precondition: continued fraction digit " + a.get_str() + " exceeds A");
      break;
    }
    want *= 2;
  }

  const Rational scale = A + 2;
  FieldElement one(1);
  FieldElement n_alpha(alpha.tower(), Rational(0));
  bool have = false;
  for (long n = 1; n <= n_max; ++n) {
    n_alpha += alpha;
    FieldElement v = dist_nearest_int(n_alpha);
    v *= scale * n;
    if (v.sign() == 0 || (v - one).sign() <= 0)
      throw std::logic_error("bad-approximation bound fails at n = " + std::to_string(n));
    if (!have || v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = n;
      have = true;
    }
  }
  rep.passed = true;
  return rep;
}

Integer denominator_constant(const FieldElement& alpha, const FieldElement& beta) {
  Integer d = 1;
  auto absorb = [&](const FieldElement& x) {
    for (const auto& c : x.coords()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
  };
  absorb(alpha);
  absorb(alpha * beta);
  absorb(beta);
  return d;
}

namespace {

std::vector<Integer> scaled_coords(const FieldElement& x, const Integer& c4, std::size_t d) {
  std::vector<Integer> out(d);
  for (std::size_t m = 0; m < d; ++m) {
    Rational v = x.coords()[m] * c4;
    out[m] = v.get_num();
  }
  return out;
}

FieldElement in_tower(const FieldElement& x, const TowerSpec& t) {
  if (x.tower() == t) return x;
  return x.lift_to(t);
}

}  // namespace

LinearFormEvaluator::LinearFormEvaluator(const FieldElement& alpha, const FieldElement& beta)
    : tower_(alpha.tower().degree() >= beta.tower().degree() ? alpha.tower() : beta.tower()),
      alpha_(in_tower(alpha, tower_)),
      alpha_beta_(in_tower(alpha * beta, tower_)),
      beta_(in_tower(beta, tower_)),
      c4_(denominator_constant(alpha_, beta_)) {
  const std::size_t d = tower_.degree();
  ia_ = scaled_coords(alpha_, c4_, d);
  iab_ = scaled_coords(alpha_beta_, c4_, d);
  ib_ = scaled_coords(beta_, c4_, d);
}

FieldElement LinearFormEvaluator::form(long n1, long n2, long n3) const {
  const std::size_t d = tower_.degree();
  std::vector<Rational> c(d);
  for (std::size_t m = 0; m < d; ++m)
    c[m] = alpha_.coords()[m] * n1 + alpha_beta_.coords()[m] * n2 - beta_.coords()[m] * n3;
  return FieldElement(tower_, std::move(c));
}

LinearFormBound LinearFormEvaluator::bound(long n1, long n2, long n3) const {
  if (n1 == 0 && n2 == 0) throw std::invalid_argument("precondition: n1^2 + n2^2 >= 1");
  const std::size_t d = tower_.degree();
  FieldElement lambda = form(n1, n2, n3);
  LinearFormBound out;
  out.nearest = nearest_integer(lambda);
  FieldElement mu = lambda - FieldElement(Rational(out.nearest));
  if (mu.is_zero()) throw std::domain_error("degenerate form");
  out.distance = abs(mu);
  out.c4 = c4_;

  // gamma = c4 * mu is a nonzero algebraic integer: |N(gamma)| >= 1.
  std::vector<Integer> g(d);
  for (std::size_t m = 0; m < d; ++m) g[m] = ia_[m] * n1 + iab_[m] * n2 - ib_[m] * n3;
  g[0] -= c4_ * out.nearest;
  std::vector<std::vector<Integer>> mat(d, std::vector<Integer>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(g[i]) == 0) continue;
    for (std::size_t j = 0; j < d; ++j) mat[tower_.product_index(i, j)][j] += g[i] * tower_.product_factor(i, j);
  }
  auto p = characteristic_polynomial(mat);
  std::vector<Rational> pr(p.begin(), p.end());
  out.conjugate_bound = root_modulus_bound(pr);
  // |gamma_1| >= 1 / |gamma_2 ... gamma_d| >= 1 / rho^(d-1).
  Rational denom = c4_ * pow_of(out.conjugate_bound, static_cast<unsigned long>(d - 1));
  out.bound = FieldElement(tower_, Rational(1) / denom);
  return out;
}

LinearFormBound linear_form_lower_bound(long n1, long n2, long n3, const FieldElement& alpha,
                                        const FieldElement& beta) {
  return LinearFormEvaluator(alpha, beta).bound(n1, n2, n3);
}

CertifiedC5 certified_c5(const FieldElement& alpha, const FieldElement& beta) {
  LinearFormEvaluator ev(alpha, beta);
  CertifiedC5 out;
  out.c4 = ev.c4();
  FieldElement a = alpha, b = beta;
  out.bound_alpha = root_modulus_bound(characteristic_polynomial(a));
  out.bound_alpha_beta = root_modulus_bound(characteristic_polynomial(a * b));
  out.bound_beta = root_modulus_bound(characteristic_polynomial(b));
  const std::size_t d = ev.degree();
  out.exponent = static_cast<unsigned>(d - 1);
  // Each conjugate of c4 (lambda - m) is at most c4 N (2S + 1/2) in modulus.
  Rational s = out.bound_alpha + out.bound_alpha_beta + out.bound_beta;
  Rational per = 2 * s + Rational(1, 2);
  Rational denom = pow_of(Rational(out.c4), d) * pow_of(per, d - 1) * 2;
  out.c5 = 1 / denom;
  return out;
}

EmpiricalC5 empirical_c5(const FieldElement& alpha, const FieldElement& beta, long N_max) {
  if (N_max < 1) throw std::invalid_argument("N_max must be >= 1");
  LinearFormEvaluator ev(alpha, beta);
  {
    FieldElement one_t = ev.form(0, 0, 0) + FieldElement(1);
    RationalMatrix rows{one_t.coords(), ev.form(1, 0, 0).coords(), ev.form(0, 1, 0).coords(),
                        ev.form(0, 0, -1).coords()};
    if (rank(rows) < 4) throw std::domain_error("field degenerate");
  }
  const unsigned long e = ev.degree() - 1;
  EmpiricalC5 out;
  bool have = false;
  Rational prev_upper;
  for (long N = 1; N <= N_max; ++N) {
    const Rational scale = pow_of(Rational(N), e);
    // lambda(-n) = -lambda(n), so only sign-normalized triples are visited.
    for (long n1 = 0; n1 <= N; ++n1) {
      for (long n2 = (n1 == 0 ? 1 : -N); n2 <= N; ++n2) {
        for (long n3 = -N; n3 <= N; ++n3) {
          if (std::labs(n1) != N && std::labs(n2) != N && std::labs(n3) != N) continue;
          FieldElement v = dist_nearest_int(ev.form(n1, n2, n3));
          v *= scale;
          if (!have || v < out.exact_min) {
            out.exact_min = v;
            out.n1 = n1;
            out.n2 = n2;
            out.n3 = n3;
            have = true;
          }
        }
      }
    }
    Rational upper = out.exact_min.enclose(96).hi;
    if (N > 1 && prev_upper < upper) upper = prev_upper;
    out.running_min.push_back(upper);
    prev_upper = upper;
  }
  out.value = out.running_min.back();
  return out;
}

}  // namespace polyflow
