// SPDX-License-Identifier: Apache-2.0
#include "polyflow/field.hpp"

#include "polyflow/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace polyflow {

namespace {

const TowerSpec& rational_tower() {
  static const TowerSpec q;
  return q;
}

FieldElement promote(const FieldElement& q, const TowerSpec& tower) {
  std::vector<Rational> coords(tower.degree());
  coords[0] = q.coords()[0];
  return FieldElement(tower, std::move(coords));
}

constexpr unsigned kFirstBits = 96;
constexpr unsigned kMaxBits = 1u << 20;

// Floating estimate of x with an absolute error bound. Returns false when
// the coordinates are outside the safe exponent range.
bool float_estimate(const FieldElement& x, double& value, double& err) {
  const auto& c = x.coords();
  const auto& t = x.tower();
  double s = 0.0, mag = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (sgn(c[m]) == 0) continue;
    double cd = c[m].get_d();
    double a = std::fabs(cd);
    if (!(a > 1e-280) || !(a < 1e280)) return false;
    double term = cd * t.monomial_value(m);
    s += term;
    mag += std::fabs(term);
  }
  value = s;
  err = mag * static_cast<double>(c.size() + 8) * 0x1p-52;
  return std::isfinite(s) && std::isfinite(err);
}

}  // namespace

FieldElement::FieldElement() : tower_(rational_tower()), coords_(1) {}

FieldElement::FieldElement(const Rational& q) : tower_(rational_tower()), coords_{q} { coords_[0].canonicalize(); }

FieldElement::FieldElement(long q) : tower_(rational_tower()), coords_{Rational(q)} {}

FieldElement::FieldElement(const TowerSpec& tower, const Rational& q) : tower_(tower), coords_(tower.degree()) {
  coords_[0] = q;
  coords_[0].canonicalize();
}

FieldElement::FieldElement(const TowerSpec& tower, std::vector<Rational> coords)
    : tower_(tower), coords_(std::move(coords)) {
  if (coords_.size() != tower_.degree())
    throw std::invalid_argument("coordinate vector length does not match tower degree");
  for (auto& c : coords_) c.canonicalize();
}

FieldElement FieldElement::generator(const TowerSpec& tower, std::size_t index) {
  if (index >= tower.generators().size()) throw std::out_of_range("generator index");
  std::vector<int> e(tower.generators().size(), 0);
  e[index] = 1;
  std::vector<Rational> coords(tower.degree());
  coords[tower.basis_index(e)] = 1;
  return FieldElement(tower, std::move(coords));
}

FieldElement FieldElement::generator(const TowerSpec& tower, const std::string& name) {
  auto idx = tower.generator_index(name);
  if (!idx) throw std::invalid_argument("unknown generator '" + name + "'");
  return generator(tower, *idx);
}

bool FieldElement::is_zero() const {
  for (const auto& c : coords_)
    if (sgn(c) != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (std::size_t m = 1; m < coords_.size(); ++m)
    if (sgn(coords_[m]) != 0) return false;
  return true;
}

const Rational& FieldElement::rational_value() const {
  if (!is_rational()) throw std::domain_error("field element is not rational");
  return coords_[0];
}

void FieldElement::coerce_pair(FieldElement& other) {
  if (tower_ == other.tower_) return;
  if (other.tower_.degree() == 1) {
    other = promote(other, tower_);
  } else if (tower_.degree() == 1) {
    *this = promote(*this, other.tower_);
  } else {
    throw std::invalid_argument("field elements belong to different towers");
  }
}

FieldElement FieldElement::operator-() const {
  FieldElement out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  if (tower_ == o.tower_) {
    for (std::size_t m = 0; m < coords_.size(); ++m) coords_[m] += o.coords_[m];
    return *this;
  }
  if (o.tower_.degree() == 1) {
    coords_[0] += o.coords_[0];
    return *this;
  }
  FieldElement other = o;
  coerce_pair(other);
  return *this += other;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  if (tower_ == o.tower_) {
    for (std::size_t m = 0; m < coords_.size(); ++m) coords_[m] -= o.coords_[m];
    return *this;
  }
  if (o.tower_.degree() == 1) {
    coords_[0] -= o.coords_[0];
    return *this;
  }
  FieldElement other = o;
  coerce_pair(other);
  return *this -= other;
}

FieldElement& FieldElement::operator*=(const Rational& q) {
  for (auto& c : coords_) c *= q;
  return *this;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  if (b.tower_.degree() == 1) {
    FieldElement out = a;
    return out *= b.coords_[0];
  }
  if (a.tower_.degree() == 1) {
    FieldElement out = b;
    return out *= a.coords_[0];
  }
  if (a.tower_ != b.tower_) throw std::invalid_argument("field elements belong to different towers");
  const auto& t = a.tower_;
  const std::size_t d = t.degree();
  std::vector<Rational> out(d);
  Rational prod;
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(a.coords_[i]) == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (sgn(b.coords_[j]) == 0) continue;
      prod = a.coords_[i] * b.coords_[j];
      const Integer& f = t.product_factor(i, j);
      if (f != 1) prod *= f;
      out[t.product_index(i, j)] += prod;
    }
  }
  return FieldElement(t, std::move(out));
}

FieldElement& FieldElement::operator*=(const FieldElement& o) { return *this = *this * o; }

FieldElement& FieldElement::operator/=(const FieldElement& o) { return *this = *this * o.inverse(); }

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (is_rational()) {
    FieldElement out(tower_, Rational(0));
    out.coords_[0] = 1 / coords_[0];
    return out;
  }
  auto m = multiplication_matrix(*this);
  std::vector<Rational> rhs(tower_.degree());
  rhs[0] = 1;
  return FieldElement(tower_, solve_linear(std::move(m), std::move(rhs)));
}

RationalInterval FieldElement::enclose(unsigned bits) const {
  RationalInterval out{coords_[0], coords_[0]};
  for (std::size_t m = 1; m < coords_.size(); ++m) {
    const auto& c = coords_[m];
    int s = sgn(c);
    if (s == 0) continue;
    auto iv = tower_.monomial_enclosure(m, bits);
    if (s > 0) {
      out.lo += c * iv.lo;
      out.hi += c * iv.hi;
    } else {
      out.lo += c * iv.hi;
      out.hi += c * iv.lo;
    }
  }
  return out;
}

int FieldElement::sign() const {
  if (is_rational()) return sgn(coords_[0]);
  double s, err;
  if (float_estimate(*this, s, err)) {
    if (s > err) return 1;
    if (s < -err) return -1;
  }
  // Nonzero (irrational) elements are bounded away from 0, so refinement ends.
  for (unsigned bits = kFirstBits; bits <= kMaxBits; bits *= 2) {
    auto iv = enclose(bits);
    if (sgn(iv.lo) > 0) return 1;
    if (sgn(iv.hi) < 0) return -1;
  }
  throw std::runtime_error("sign refinement did not terminate");
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.tower_ == b.tower_) return a.coords_ == b.coords_;
  if (a.tower_.degree() == 1) return b.is_rational() && b.coords_[0] == a.coords_[0];
  if (b.tower_.degree() == 1) return a.is_rational() && a.coords_[0] == b.coords_[0];
  throw std::invalid_argument("field elements belong to different towers");
}

std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
  if (a.is_rational() && b.is_rational()) {
    int c = cmp(a.coords_[0], b.coords_[0]);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  int s = (a - b).sign();
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

double FieldElement::to_double() const {
  if (is_rational()) return coords_[0].get_d();
  double s, err;
  if (float_estimate(*this, s, err) && err <= std::fabs(s) * 0x1p-48) return s;
  for (unsigned bits = kFirstBits; bits <= 8192; bits *= 2) {
    auto iv = enclose(bits);
    Rational mid = (iv.lo + iv.hi) / 2;
    Rational width = iv.hi - iv.lo;
    Rational tol = abs_of(mid);
    mpq_div_2exp(tol.get_mpq_t(), tol.get_mpq_t(), 60);
    if (width <= tol || bits == 8192) return mid.get_d();
  }
  return 0.0;
}

FieldElement FieldElement::lift_to(const TowerSpec& tower) const {
  if (tower_ == tower) return *this;
  if (!tower_.embeds_in(tower)) throw std::invalid_argument("tower does not embed in the target tower");
  std::vector<std::size_t> map(tower_.generators().size());
  for (std::size_t g = 0; g < map.size(); ++g) map[g] = *tower.generator_index(tower_.generators()[g].name);
  std::vector<Rational> out(tower.degree());
  std::vector<int> e(tower.generators().size());
  for (std::size_t m = 0; m < coords_.size(); ++m) {
    if (sgn(coords_[m]) == 0) continue;
    std::fill(e.begin(), e.end(), 0);
    const auto& src = tower_.exponents(m);
    for (std::size_t g = 0; g < src.size(); ++g) e[map[g]] = src[g];
    out[tower.basis_index(e)] = coords_[m];
  }
  return FieldElement(tower, std::move(out));
}

FieldElement abs(const FieldElement& x) { return x.sign() < 0 ? -x : x; }

FieldElement min(const FieldElement& a, const FieldElement& b) { return b < a ? b : a; }

FieldElement max(const FieldElement& a, const FieldElement& b) { return a < b ? b : a; }

Rational approx(const FieldElement& x, const Rational& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("approx needs eps > 0");
  if (x.is_rational()) return x.coords()[0];
  for (unsigned bits = kFirstBits;; bits *= 2) {
    auto iv = x.enclose(bits);
    if (iv.hi - iv.lo < eps) return (iv.lo + iv.hi) / 2;
    if (bits > kMaxBits) throw std::runtime_error("approx refinement did not terminate");
  }
}

Integer floor(const FieldElement& x) {
  if (x.is_rational()) return floor_of(x.coords()[0]);
  double s, err;
  if (float_estimate(x, s, err) && std::fabs(s) + err < 0x1p52) {
    double lo = std::floor(s - err), hi = std::floor(s + err);
    if (lo == hi) return Integer(lo);
  }
  // x is irrational here, so it is never an integer and both ends eventually agree.
  for (unsigned bits = kFirstBits; bits <= kMaxBits; bits *= 2) {
    auto iv = x.enclose(bits);
    Integer lo = floor_of(iv.lo);
    if (lo == floor_of(iv.hi)) return lo;
  }
  throw std::runtime_error("floor refinement did not terminate");
}

Integer nearest_integer(const FieldElement& x) { return floor(x + FieldElement(Rational(1, 2))); }

FieldElement dist_nearest_int(const FieldElement& x) {
  return abs(x - FieldElement(Rational(nearest_integer(x))));
}

std::string to_string(const FieldElement& x) {
  const auto& t = x.tower();
  const auto& c = x.coords();
  std::string out;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (sgn(c[m]) == 0) continue;
    std::string mono;
    const auto& e = t.exponents(m);
    for (std::size_t g = 0; g < e.size(); ++g)
      for (int a = 0; a < e[g]; ++a) {
        if (!mono.empty()) mono += "*";
        mono += t.generators()[g].name;
      }
    Rational mag = abs_of(c[m]);
    std::string term;
    if (mono.empty()) term = polyflow::to_string(mag);
    else if (mag == 1) term = mono;
    else term = polyflow::to_string(mag) + "*" + mono;
    if (out.empty()) out = (sgn(c[m]) < 0 ? "-" : "") + term;
    else out += (sgn(c[m]) < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

std::string to_decimal(const FieldElement& x, int significant) { return to_decimal(x.to_double(), significant); }

}  // namespace polyflow
