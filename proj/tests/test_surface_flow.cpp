// SPDX-License-Identifier: Apache-2.0
#include "polyflow/flow.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace polyflow;

namespace {

FieldElement golden() {
  TowerSpec k = TowerSpec::sqrt5();
  return (FieldElement::generator(k, "s") - FieldElement(1)) * FieldElement(Rational(1, 2));
}

FieldElement half_cbrt3() {
  return FieldElement::generator(TowerSpec::sqrt2_cbrt3(), "c") * FieldElement(Rational(1, 2));
}

void check_gauss_bonnet(const Surface& s) {
  Rational total = 0;
  for (const auto& v : s.vertices()) total += v.angle_over_2pi() - 1;
  CHECK(total == Rational(2 * s.genus() - 2));
}

EdgeInterval random_interval(const Surface& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> e(0, s.edge_count() - 1);
  std::uniform_int_distribution<long> p(0, 1000);
  std::size_t edge = e(rng);
  long a = p(rng), b = p(rng);
  while (a == b) b = p(rng);
  if (a > b) std::swap(a, b);
  const FieldElement& L = s.edge_length(edge);
  return {edge, L * FieldElement(make_rational(a, 1000)), L * FieldElement(make_rational(b, 1000))};
}

}  // namespace

TEST_CASE("octagon net") {
  Surface o = build_octagon(TowerSpec::sqrt2_cbrt3());
  REQUIRE(o.edge_count() == 7);
  FieldElement r = FieldElement::generator(o.tower(), "r");
  int ones = 0, roots = 0;
  for (std::size_t e = 0; e < 7; ++e) {
    if (o.edge_length(e) == FieldElement(1)) ++ones;
    if (o.edge_length(e) == r) ++roots;
  }
  CHECK(ones == 4);
  CHECK(roots == 3);
  CHECK(o.total_vertical_length() == FieldElement(4) + FieldElement(3) * r);
  CHECK(o.genus() == 2);
  check_gauss_bonnet(o);
  CHECK_FALSE(o.is_polysquare());
}

TEST_CASE("polysquares and unfolding") {
  Surface t = unit_torus();
  CHECK(t.genus() == 1);
  CHECK(t.vertices().size() == 1);
  CHECK(t.is_polysquare());
  check_gauss_bonnet(t);
  Surface l = l_shape();
  CHECK(l.face_count() == 3);
  CHECK(l.genus() == 2);
  check_gauss_bonnet(l);
  Surface u = four_copy(table_from_cells(l_shape_cells()));
  CHECK(u.area() == FieldElement(12));
  check_gauss_bonnet(u);
  Surface sq = four_copy(table_from_cells({{0, 0}}));
  CHECK(sq.area() == FieldElement(4));
  CHECK(sq.genus() == 1);
  CHECK_THROWS_AS(four_copy(build_octagon()), std::invalid_argument);
  CHECK_THROWS_AS(four_copy(l), std::invalid_argument);
}

TEST_CASE("validation reports every violation") {
  SurfaceParts p;
  p.faces.push_back({1, FieldElement(1), FieldElement(1)});
  p.faces.push_back({2, FieldElement(1), FieldElement(2)});
  p.v_pairs.push_back({{1, Side::Right}, {2, Side::Left}});
  auto rep = validate(p);
  CHECK_FALSE(rep.ok());
  bool mismatch = false, unmatched = false;
  for (const auto& v : rep.violations) {
    mismatch |= v.kind == ViolationKind::LengthMismatch;
    unmatched |= v.kind == ViolationKind::UnmatchedEdge;
  }
  CHECK(mismatch);
  CHECK(unmatched);
  CHECK_THROWS_AS(Surface{p}, SurfaceError);
  SurfaceParts z;
  z.faces.push_back({1, FieldElement(0), FieldElement(1)});
  CHECK_FALSE(validate(z).ok());
  CHECK_FALSE(validate(SurfaceParts{}).ok());
}

TEST_CASE("torus trace is the circle rotation") {
  Surface t = unit_torus().lift_to(TowerSpec::sqrt5());
  FieldElement a = golden();
  Slope slope(a);
  FieldElement y0(TowerSpec::sqrt5(), make_rational(1, 3));
  auto tr = trace(t, {0, y0}, slope, Direction::Forward, StopRule{200, std::nullopt});
  REQUIRE(tr.crossings.size() == 200);
  for (const auto& c : tr.crossings) {
    FieldElement raw = y0 + FieldElement(c.index) * a;
    Integer wraps = floor(raw);
    CHECK(c.at.y == raw - FieldElement(Rational(wraps)));
    CHECK(c.tau == FieldElement(c.index));
    CHECK(c.n.n1 == c.index);
    CHECK(c.n.n4 == wraps.get_si());
    CHECK(c.at.y - y0 == c.rise - c.drop);
  }
  auto back = trace(t, {0, y0}, slope, Direction::Reverse, StopRule{50, std::nullopt});
  for (const auto& c : back.crossings) {
    FieldElement raw = y0 - FieldElement(c.index) * a;
    CHECK(c.at.y == raw - FieldElement(Rational(floor(raw))));
    CHECK(c.tau == FieldElement(-c.index));
  }
  CHECK_THROWS_AS(trace(t, {0, FieldElement(0)}, slope, Direction::Forward, StopRule{5, std::nullopt}),
                  std::invalid_argument);
}

TEST_CASE("forward then reverse shift is the identity") {
  std::mt19937_64 rng(5);
  Surface o = build_octagon(TowerSpec::sqrt2_cbrt3());
  Slope slope(half_cbrt3());
  for (int it = 0; it < 300; ++it) {
    EdgeInterval I = random_interval(o, rng);
    FieldElement y = (I.lo + I.hi) * FieldElement(Rational(1, 2));
    try {
      PointShift f = shift_point(o, {I.edge, y}, slope, Direction::Forward);
      PointShift b = shift_point(o, f.at, slope, Direction::Reverse);
      CHECK(b.at.edge == I.edge);
      CHECK(b.at.y == y);
      CHECK(b.dtau == -f.dtau);
    } catch (const SingularHit&) {
    }
  }
}

TEST_CASE("shifts conserve length and match point traces") {
  std::mt19937_64 rng(9);
  std::vector<std::pair<Surface, FieldElement>> cases;
  cases.emplace_back(l_shape().lift_to(TowerSpec::sqrt5()), golden());
  cases.emplace_back(build_octagon(TowerSpec::sqrt2_cbrt3()), half_cbrt3());
  for (auto& [s, a] : cases) {
    Slope slope(a);
    int splits = 0;
    for (int it = 0; it < 200; ++it) {
      EdgeInterval I = random_interval(s, rng);
      Direction dir = it % 2 ? Direction::Reverse : Direction::Forward;
      ShiftOutcome out = shift_interval(s, I, slope, dir);
      FieldElement src = FieldElement(0), img = FieldElement(0);
      for (const auto& p : out.pieces) {
        src += p.source.length();
        img += p.image.length();
        CHECK(p.source.length() == p.image.length());
      }
      CHECK(src == I.length());
      CHECK(img == I.length());
      CHECK(out.pieces.front().source.lo == I.lo);
      CHECK(out.pieces.back().source.hi == I.hi);
      for (std::size_t k = 1; k < out.pieces.size(); ++k) CHECK(out.pieces[k].source.lo == out.pieces[k - 1].source.hi);
      splits += out.split();
      for (const auto& p : out.pieces)
        for (int j = 1; j <= 3; ++j) {
          FieldElement y = p.source.lo + p.source.length() * FieldElement(make_rational(j, 4));
          PointShift ps = shift_point(s, {p.source.edge, y}, slope, dir);
          CHECK(ps.at.edge == p.image.edge);
          CHECK(ps.at.y == y - p.source.lo + p.image.lo);
          CHECK(ps.dtau == out.dtau);
        }
    }
    CHECK(splits > 0);
  }
}

TEST_CASE("first return map partitions every edge") {
  std::vector<std::pair<Surface, FieldElement>> cases;
  cases.emplace_back(l_shape().lift_to(TowerSpec::sqrt5()), golden());
  cases.emplace_back(build_octagon(TowerSpec::sqrt2_cbrt3()), half_cbrt3());
  for (auto& [s, a] : cases) {
    auto pieces = first_return_map(s, Slope(a));
    for (int use_image = 0; use_image < 2; ++use_image)
      for (std::size_t e = 0; e < s.edge_count(); ++e) {
        std::vector<EdgeInterval> on;
        for (const auto& p : pieces) {
          const EdgeInterval& I = use_image ? p.image : p.source;
          if (I.edge == e) on.push_back(I);
        }
        std::sort(on.begin(), on.end(), [](const EdgeInterval& x, const EdgeInterval& y) { return x.lo < y.lo; });
        REQUIRE_FALSE(on.empty());
        CHECK(on.front().lo.sign() == 0);
        CHECK(on.back().hi == s.edge_length(e));
        for (std::size_t k = 1; k < on.size(); ++k) CHECK(on[k].lo == on[k - 1].hi);
      }
  }
}
