// SPDX-License-Identifier: Apache-2.0
#include "polyflow/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace polyflow {

Rational make_rational(const Integer& n, const Integer& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer pow_of(const Integer& z, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), z.get_mpz_t(), e);
  return r;
}

Rational pow_of(const Rational& q, unsigned long e) {
  Rational r(pow_of(Integer(q.get_num()), e), pow_of(Integer(q.get_den()), e));
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_only(num) || !digits_only(den)) throw std::invalid_argument("malformed rational");
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw std::invalid_argument("malformed rational: zero denominator");
  if (negative) n = -n;
  return make_rational(n, d);
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_decimal(double value, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

}  // namespace polyflow
