// SPDX-License-Identifier: Apache-2.0
#include "polyflow/contfrac.hpp"

#include <map>
#include <stdexcept>

namespace polyflow {

Integer ContinuedFraction::max_digit() const {
  Integer best = 0;
  for (const auto& a : digits)
    if (a > best) best = a;
  return best;
}

namespace {

ContinuedFraction rational_cf(Rational x, std::size_t n) {
  ContinuedFraction cf;
  while (cf.digits.size() < n) {
    if (sgn(x) == 0) {
      cf.terminated = true;
      return cf;
    }
    Rational y = 1 / x;
    Integer a = floor_of(y);
    cf.digits.push_back(a);
    x = y - a;
  }
  if (sgn(x) == 0) cf.terminated = true;
  return cf;
}

// Index of the single square-root monomial carrying x's irrational part.
std::optional<std::size_t> quadratic_slot(const FieldElement& x) {
  const auto& t = x.tower();
  std::optional<std::size_t> slot;
  for (std::size_t m = 1; m < x.coords().size(); ++m) {
    if (sgn(x.coords()[m]) == 0) continue;
    if (slot) return std::nullopt;
    slot = m;
  }
  if (!slot) return std::nullopt;
  const auto& e = t.exponents(*slot);
  int ones = 0;
  for (std::size_t g = 0; g < e.size(); ++g) {
    if (e[g] == 0) continue;
    if (e[g] != 1 || t.generators()[g].exponent != 2) return std::nullopt;
    ++ones;
  }
  if (ones != 1) return std::nullopt;
  return slot;
}

ContinuedFraction quadratic_cf(const FieldElement& x, std::size_t slot, std::size_t n) {
  const auto& t = x.tower();
  Integer radicand;
  for (std::size_t g = 0; g < t.generators().size(); ++g)
    if (t.exponents(slot)[g] == 1) radicand = t.generators()[g].radicand;
  auto reciprocal = [&](const FieldElement& y) {
    const Rational& a = y.coords()[0];
    const Rational& b = y.coords()[slot];
    Rational norm = a * a - b * b * radicand;
    std::vector<Rational> c(t.degree());
    c[0] = a / norm;
    c[slot] = -b / norm;
    return FieldElement(t, std::move(c));
  };
  ContinuedFraction cf;
  std::map<std::pair<Rational, Rational>, std::size_t> seen;
  FieldElement y = reciprocal(x);
  while (cf.digits.size() < n) {
    auto key = std::make_pair(y.coords()[0], y.coords()[slot]);
    auto it = seen.find(key);
    if (it != seen.end()) {
      cf.periodic_tail = PeriodicTail{it->second, cf.digits.size() - it->second};
      break;
    }
    seen.emplace(key, cf.digits.size());
    Integer a = floor(y);
    cf.digits.push_back(a);
    y = reciprocal(y - FieldElement(Rational(a)));
  }
  if (!cf.periodic_tail) {
    // One more state lookup so callers learn about a period found exactly at n.
    auto it = seen.find(std::make_pair(y.coords()[0], y.coords()[slot]));
    if (it != seen.end()) cf.periodic_tail = PeriodicTail{it->second, cf.digits.size() - it->second};
  }
  if (cf.periodic_tail) {
    const auto tail = *cf.periodic_tail;
    while (cf.digits.size() < n) cf.digits.push_back(cf.digits[tail.start + (cf.digits.size() - tail.start) % tail.period]);
  }
  return cf;
}

// Digits certain for every number in [lo, hi].
std::vector<Integer> interval_digits(Rational lo, Rational hi, std::size_t n) {
  std::vector<Integer> out;
  while (out.size() < n) {
    if (sgn(lo) <= 0) break;
    Rational ylo = 1 / hi, yhi = 1 / lo;
    Integer a = floor_of(ylo);
    if (a != floor_of(yhi)) break;
    out.push_back(a);
    lo = ylo - a;
    hi = yhi - a;
  }
  return out;
}

}  // namespace

ContinuedFraction cf_digits(const FieldElement& x, std::size_t n) {
  if (n < 1) throw std::invalid_argument("cf_digits needs n >= 1");
  if (x.sign() <= 0 || x >= FieldElement(1)) throw std::invalid_argument("cf_digits needs 0 < x < 1");
  if (x.is_rational()) return rational_cf(x.coords()[0], n);
  if (auto slot = quadratic_slot(x)) return quadratic_cf(x, *slot, n);
  ContinuedFraction cf;
  for (unsigned bits = 128;; bits *= 2) {
    auto iv = x.enclose(bits);
    cf.digits = interval_digits(iv.lo, iv.hi, n);
    if (cf.digits.size() >= n) return cf;
    if (bits > (1u << 24)) throw std::runtime_error("continued fraction refinement did not terminate");
  }
}

std::optional<Integer> periodic_digit_bound(const FieldElement& x, std::size_t max_digits) {
  auto cf = cf_digits(x, max_digits);
  if (!cf.periodic_tail) return std::nullopt;
  return cf.max_digit();
}

}  // namespace polyflow
