// SPDX-License-Identifier: Apache-2.0
#include "polyflow/density.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace polyflow;

namespace {

const TowerSpec& k5() {
  static const TowerSpec k = TowerSpec::sqrt5();
  return k;
}

FieldElement golden() { return (FieldElement::generator(k5(), "s") - FieldElement(1)) * FieldElement(Rational(1, 2)); }

FieldElement q5(long n, long d) { return FieldElement(k5(), make_rational(n, d)); }

// Sorted gaps of heights in (0, L) with 0 and L as ends.
std::vector<FieldElement> gaps_of(std::vector<FieldElement> h, const FieldElement& L) {
  std::sort(h.begin(), h.end());
  std::vector<FieldElement> g;
  FieldElement prev = FieldElement(0);
  for (const auto& y : h) {
    g.push_back(y - prev);
    prev = y;
  }
  g.push_back(L - prev);
  return g;
}

}  // namespace

TEST_CASE("polysquare constants") {
  auto L = constants(1, 1);
  CHECK(L.c1 == make_rational(1, 104976));
  CHECK(L.delta[1] == make_rational(1, 324));
  CHECK(L.forward_sum == Rational(2834379));
  CHECK(L.reverse_sum == Rational(921164400));
  // c0 is the ceiling of sqrt(2) K: c0^2 > 2K^2 > (c0 - 1)^2.
  Rational K = std::max(L.forward_sum, L.reverse_sum);
  CHECK(Rational(L.c0 * L.c0) > 2 * K * K);
  CHECK(Rational((L.c0 - 1) * (L.c0 - 1)) < 2 * K * K);
  CHECK(L.c2 == make_rational(1, 3 * L.c0));
  CHECK(constants(2, 3).c1 == make_rational(1, pow_of(Integer(5184), 4)));
  CHECK(L.window(q5(1, 2)) == 55);
  CHECK_THROWS(L.window(q5(0, 1)));
}

TEST_CASE("octagon ledger relations") {
  auto L = octagon_constants();
  CHECK(L.norm_exponent == 5);
  CHECK(L.log10_c5 < 0);
  CHECK(L.log10_c11 == doctest::Approx(L.log10_c5 - 5 * L.log10_c8));
  CHECK(std::pow(10.0, L.log10_c9) == doctest::Approx(std::pow(5.0, 127)).epsilon(1e-9));
  CHECK(L.log10_c8 > 0);
}

TEST_CASE("visit oracle on the torus") {
  Surface t = unit_torus().lift_to(k5());
  EdgeInterval qr{0, q5(0, 1), q5(1, 2)};
  auto v = find_visit_oracle(t, qr, Slope(FieldElement(k5(), make_rational(2, 3))), Rational(10));
  CHECK(v.tau == FieldElement(1));
  CHECK(v.at.y == q5(1, 6));
  auto g = find_visit_oracle(t, qr, Slope(golden()), Rational(10));
  CHECK(g.tau == FieldElement(1));
}

TEST_CASE("cascade certificate on the golden torus") {
  Surface t = unit_torus().lift_to(k5());
  Slope slope(golden());
  auto L = constants(1, 1);
  EdgeInterval qr{0, q5(0, 1), q5(1, 2)};
  auto cert = cascade_search(t, qr, slope, L);
  CHECK(cert.reason == TerminationReason::Claim1Return);
  CHECK(replay(t, slope, cert) == cert.tau_star);
  CHECK(within_visit_bound(L, slope, cert.tau_star, qr.length()));
  auto ep = endpoint_distance(t, qr, slope, cert.tau_star, L);
  CHECK(ep.inside);
  CHECK(ep.ok);
  CHECK(ep.above_q.sign() > 0);
  VerticalCoord p = locate(t, {0, qr.hi}, slope, cert.tau_star);
  CHECK(qr.contains(p));
}

TEST_CASE("cascade on random intervals replays and is dominated by the oracle") {
  std::mt19937_64 rng(21);
  Surface l = l_shape().lift_to(TowerSpec::sqrt2());
  Slope slope(FieldElement::generator(TowerSpec::sqrt2(), "r") - FieldElement(1));
  auto L = constants(2, 3);
  std::uniform_int_distribution<int> e(0, 2), p(1, 200);
  for (int it = 0; it < 12; ++it) {
    FieldElement x(TowerSpec::sqrt2(), make_rational(1, it % 2 ? 8 : 16));
    FieldElement lo(TowerSpec::sqrt2(), make_rational(p(rng), 400));
    EdgeInterval qr{static_cast<std::size_t>(e(rng)), lo, lo + x};
    auto cert = cascade_search(l, qr, slope, L);
    CHECK(replay(l, slope, cert) == cert.tau_star);
    VerticalCoord hit = locate(l, {qr.edge, qr.hi}, slope, cert.tau_star);
    CHECK(qr.contains(hit));
    auto o = find_visit_oracle(l, qr, slope, Rational(100000));
    CHECK(abs(o.tau) <= abs(cert.tau_star));
    CHECK(within_visit_bound(L, slope, cert.tau_star, x));
    CHECK(endpoint_distance(l, qr, slope, cert.tau_star, L).ok);
  }
}

TEST_CASE("octagon cascade") {
  Surface o = build_octagon(TowerSpec::sqrt2_cbrt3());
  auto L = octagon_constants();
  Slope slope(L.alpha);
  FieldElement x(o.tower(), make_rational(1, 8));
  EdgeInterval qr{4, FieldElement(o.tower(), make_rational(1, 3)), FieldElement(o.tower(), make_rational(1, 3)) + x};
  auto cert = cascade_search(o, qr, slope, L);
  CHECK(replay(o, slope, cert) == cert.tau_star);
  CHECK(L.visit_bound_holds(std::log10(std::fabs(slope.time_decimal(cert.tau_star))), x));
  CHECK(endpoint_distance(o, qr, slope, cert.tau_star, L).ok);
  // Long intervals are outside the octagon envelope.
  EdgeInterval wide{0, FieldElement(o.tower(), Rational(0)), FieldElement(o.tower(), make_rational(3, 4))};
  CHECK_THROWS(cascade_search(o, wide, slope, L));
}

TEST_CASE("max gap conventions") {
  CHECK(max_gap({q5(1, 5), q5(1, 2), q5(9, 10)}, q5(1, 1)) == q5(2, 5));
  CHECK(max_gap(std::vector<FieldElement>{}, q5(1, 1)) == q5(1, 1));
  TowerSpec k2 = TowerSpec::sqrt2();
  FieldElement r = FieldElement::generator(k2, "r");
  CHECK(max_gap({FieldElement(k2, make_rational(1, 2))}, r) == r - FieldElement(make_rational(1, 2)));
}

TEST_CASE("gap tracker agrees with a sorted recomputation") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> d(1, 9999);
  GapTracker g(q5(1, 1));
  std::vector<FieldElement> hs;
  for (int i = 0; i < 400; ++i) {
    FieldElement y = q5(d(rng), 10000);
    bool fresh = std::find(hs.begin(), hs.end(), y) == hs.end();
    CHECK(g.insert(y) == fresh);
    if (fresh) hs.push_back(y);
    if (i % 37 == 0) CHECK(g.max_gap() == max_gap(hs, q5(1, 1)));
  }
  CHECK_FALSE(g.insert(q5(0, 1)));
  CHECK_FALSE(g.insert(q5(1, 1)));
}

TEST_CASE("three distances on the golden torus") {
  Surface t = unit_torus().lift_to(k5());
  Slope slope(golden());
  auto tr = trace(t, {0, q5(1, 2)}, slope, Direction::Forward, StopRule{600, std::nullopt});
  std::vector<FieldElement> hs{q5(1, 2)};
  std::set<FieldElement> seen{q5(1, 2)};
  for (const auto& c : tr.crossings) {
    CHECK(seen.insert(c.at.y).second);
    hs.push_back(c.at.y);
    // Points {y0 + k alpha} on the circle: cut at y0 instead of 0.
    std::vector<FieldElement> shifted;
    for (const auto& y : hs) {
      FieldElement z = y - q5(1, 2);
      if (z.sign() < 0) z += FieldElement(1);
      if (z.sign() > 0) shifted.push_back(z);
    }
    auto g = gaps_of(shifted, q5(1, 1));
    std::set<FieldElement> distinct(g.begin(), g.end());
    CHECK(distinct.size() <= 3);
  }
}

TEST_CASE("gap profiles") {
  Surface t = unit_torus().lift_to(k5());
  Slope third(FieldElement(k5(), make_rational(2, 3)));
  auto prof = gap_profile(t, third, {0, q5(1, 4)}, 0, {Rational(5), Rational(20), Rational(80)});
  for (const auto& r : prof.rows) CHECK(r.mg == q5(1, 3));
  Surface l = l_shape().lift_to(k5());
  Slope g(golden());
  std::vector<Rational> hs;
  for (int i = 0; i <= 8; ++i) hs.push_back(Rational(1 << i));
  auto lp = gap_profile(l, g, {0, q5(1, 3)}, 0, hs);
  for (std::size_t i = 1; i < lp.rows.size(); ++i) CHECK(lp.rows[i].mg <= lp.rows[i - 1].mg);
  CHECK(lp.rows.back().mg < q5(1, 20));
}

TEST_CASE("first passage matches the profile on both sides") {
  Surface l = l_shape().lift_to(k5());
  Slope g(golden());
  VerticalCoord start{0, q5(1, 3)};
  auto rows = first_passage(l, g, start, 0, {2, 4, 8, 16, 32}, 1000000);
  for (const auto& r : rows) {
    REQUIRE(r.reached);
    Rational below(r.T * (1 - 1e-9)), above(r.T * (1 + 1e-9));
    auto p = gap_profile(l, g, start, 0, {below, above});
    CHECK(p.rows[0].mg > q5(1, r.n));
    CHECK(p.rows[1].mg <= q5(1, r.n));
  }
}

TEST_CASE("fit verdicts") {
  std::vector<FitInput> lin;
  for (long n = 2; n <= 64; n *= 2) lin.push_back({n, 3.0 * static_cast<double>(n)});
  auto a = superdensity_fit(lin);
  CHECK(a.verdict == "consistent with linear");
  CHECK(*a.exponent == doctest::Approx(1.0));
  std::vector<FitInput> cube;
  for (long n = 2; n <= 64; n *= 2) cube.push_back({n, std::pow(static_cast<double>(n), 3)});
  auto b = superdensity_fit(cube);
  CHECK(b.verdict == "polynomial");
  CHECK(*b.exponent == doctest::Approx(3.0));
  auto c = superdensity_fit({{2, 1.0}, {4, std::nullopt}}, std::string("1/3"));
  CHECK(c.verdict == "not dense below 1/3");
  CHECK_FALSE(c.complete);
}

TEST_CASE("gap step checks on the golden L") {
  Surface l = l_shape().lift_to(k5());
  Slope g(golden());
  auto L = constants(1, 3);
  VerticalCoord start{0, q5(1, 3)};
  for (long T : {4L, 16L, 64L}) {
    auto step = check_gap_step(l, g, start, 0, Rational(T), L);
    CHECK(step.ok);
    CHECK(step.reached_at <= step.allowed);
    auto half = check_gap_halving(l, g, start, 0, Rational(T), L);
    CHECK(half.ok);
  }
}

TEST_CASE("aligned square visits") {
  Surface t = unit_torus().lift_to(k5());
  Slope g(golden());
  AlignedSquare sq{0, q5(0, 1), q5(0, 1), make_rational(1, 2)};
  auto v = aligned_square_visit(t, g, {0, q5(3, 4)}, sq, StopRule{100, std::nullopt});
  REQUIRE(v.found);
  CHECK(v.crossings <= 3);
  CHECK(v.x.sign() >= 0);
  CHECK(v.x <= q5(1, 2));
  CHECK(v.y.sign() >= 0);
  CHECK(v.y <= q5(1, 2));
  AlignedSquare big{0, q5(0, 1), q5(0, 1), Rational(2)};
  CHECK_THROWS_AS(aligned_square_visit(t, g, {0, q5(3, 4)}, big, StopRule{10, std::nullopt}), std::invalid_argument);
}
