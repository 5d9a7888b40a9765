// SPDX-License-Identifier: Apache-2.0
#include "polyflow/report.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace polyflow;

#ifndef PRESET_DIR
#error "PRESET_DIR must point at the preset nets"
#endif

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_message(const ParseResult& r) { return r.diagnostics.empty() ? "" : r.diagnostics[0].message; }

}  // namespace

TEST_CASE("minimal document") {
  auto r = parse_net("tower r^2=2\nface 1 width 1 height r\nglue V 1.R 1.L\nglue H 1.T 1.B");
  REQUIRE(r.ok());
  Surface s = to_surface(r.doc);
  CHECK(s.face_count() == 1);
  CHECK(s.edge_length(0) == FieldElement::generator(s.tower(), "r"));
  CHECK(serialize_net(s) == "tower r^2=2\nface 1 width 1 height r\nglue V 1.R 1.L\nglue H 1.T 1.B\n");
}

TEST_CASE("unit torus serializes over the rationals") {
  CHECK(serialize_net(unit_torus()) == "face 1 width 1 height 1\nglue V 1.R 1.L\nglue H 1.T 1.B\n");
}

TEST_CASE("diagnostics carry positions") {
  auto r = parse_net("face 1 width 0 height 1");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "nonpositive width");
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[0].column == 14);

  auto u = parse_net("tower r^2=2\nface 1 width 1 height q");
  REQUIRE_FALSE(u.ok());
  CHECK(first_message(u) == "unknown generator name 'q'");
  CHECK(to_string(u.diagnostics[0]) == "2:23: unknown generator name 'q'");

  auto d = parse_net("face 1 width 1 height 1\nface 1 width 1 height 1");
  CHECK(first_message(d).rfind("duplicate face id 1", 0) == 0);
  CHECK(d.diagnostics[0].line == 2);

  CHECK(first_message(parse_net("face 1 width 1 height 1\nglue V 1.L 1.R")).rfind("unbalanced glue", 0) == 0);
  CHECK(first_message(parse_net("face 1 width 1 height 1\nglue H 1.T")).rfind("unbalanced glue", 0) == 0);
  CHECK(first_message(parse_net("face 1 width 1/0 height 1")).rfind("malformed rational", 0) == 0);
  CHECK(first_message(parse_net("face 1 width 1/ height 1")).rfind("malformed rational", 0) == 0);
  CHECK(first_message(parse_net("face 1 width 1 height 1\nglue V 1.R 2.L")) == "unknown face id 2");
  CHECK(first_message(parse_net("tower r^2=2\ntower s^2=5")) == "duplicate tower declaration");
  CHECK(first_message(parse_net("tower r^2=4")).find("not a field") != std::string::npos);
  CHECK(first_message(parse_net("frob 1")) == "unknown directive 'frob'");
}

TEST_CASE("tower may follow its uses") {
  auto r = parse_net("face 1 width 1 height r\nglue V 1.R 1.L\nglue H 1.T 1.B\ntower r^2=2\n");
  CHECK(r.ok());
}

TEST_CASE("expressions") {
  TowerSpec k = TowerSpec::sqrt2_cbrt3();
  FieldElement r = FieldElement::generator(k, "r"), c = FieldElement::generator(k, "c");
  CHECK(parse_expr("-(1 + r)*c - -2", k) == -(FieldElement(1) + r) * c + FieldElement(2));
  CHECK(parse_expr("c*c*c", k) == FieldElement(k, Rational(3)));
  CHECK(parse_expr("2 - 3 - 4", k) == FieldElement(k, Rational(-5)));
  CHECK(parse_expr("6/4", k) == FieldElement(k, make_rational(3, 2)));
  CHECK_THROWS_AS(parse_expr("1 +", k), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr(std::string(500, '(') + "1" + std::string(500, ')'), k), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr(std::string(5000, '-') + "1", k), std::invalid_argument);
}

TEST_CASE("presets round-trip byte for byte") {
  for (const char* name : {"torus", "lshape", "lshape_golden", "octagon", "l_table"}) {
    CAPTURE(name);
    std::string text = read_file(std::string(PRESET_DIR) + "/" + name + ".net");
    auto r = parse_net(text);
    REQUIRE(r.ok());
    std::string once = serialize_net(r.doc);
    CHECK(once == text);
    auto again = parse_net(once);
    REQUIRE(again.ok());
    CHECK(equivalent(again.doc, r.doc));
    CHECK(serialize_net(again.doc) == once);
  }
}

TEST_CASE("octagon preset is the builder surface") {
  auto r = parse_net(read_file(std::string(PRESET_DIR) + "/octagon.net"));
  REQUIRE(r.ok());
  Surface s = to_surface(r.doc);
  CHECK(same_structure(s, build_octagon(TowerSpec::sqrt2_cbrt3())));
  CHECK(serialize_net(s, true).find("# total vertical edge length 4 + 3*r") != std::string::npos);
  REQUIRE(r.doc.slopes.size() == 1);
  CHECK(r.doc.slopes[0].second == octagon_constants().alpha);
}

TEST_CASE("crossing CSV re-parses exactly") {
  Surface o = build_octagon(TowerSpec::sqrt2_cbrt3());
  Slope slope(octagon_constants().alpha);
  VerticalCoord start{2, FieldElement(o.tower(), make_rational(2, 7))};
  auto tr = trace(o, start, slope, Direction::Forward, StopRule{120, std::nullopt});
  std::string csv = crossings_csv(slope, start, tr);
  auto rows = parse_crossings_csv(csv, o.tower());
  REQUIRE(rows.size() == tr.crossings.size() + 1);
  CHECK(rows[0].y == start.y);
  for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
    CHECK(rows[i + 1].tau == tr.crossings[i].tau);
    CHECK(rows[i + 1].y == tr.crossings[i].at.y);
    CHECK(rows[i + 1].edge == tr.crossings[i].at.edge);
    CHECK(rows[i + 1].n == tr.crossings[i].n);
  }
}

TEST_CASE("profile CSV and certificate JSON re-parse exactly") {
  Surface l = l_shape().lift_to(TowerSpec::sqrt2());
  Slope slope(FieldElement::generator(l.tower(), "r") - FieldElement(1));
  auto prof = gap_profile(l, slope, {0, FieldElement(l.tower(), make_rational(1, 2))}, 1,
                          {Rational(1), Rational(10), Rational(100)});
  auto back = parse_gap_profile_csv(gap_profile_csv(prof), l.tower());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].T == prof.rows[i].T);
    CHECK(back[i].mg == prof.rows[i].mg);
    CHECK(back[i].N == prof.rows[i].N);
  }
  EdgeInterval qr{1, FieldElement(l.tower(), make_rational(1, 5)), FieldElement(l.tower(), make_rational(1, 4))};
  auto cert = cascade_search(l, qr, slope, constants(2, 3));
  FieldElement alpha;
  auto parsed = parse_certificate_json(certificate_json(cert, slope), l.tower(), &alpha);
  CHECK(alpha == slope.alpha());
  CHECK(parsed.tau_star == cert.tau_star);
  CHECK(parsed.phases.size() == cert.phases.size());
  CHECK(replay(l, slope, parsed) == cert.tau_star);
  CHECK_THROWS_AS(parse_certificate_json("{\"schema\": 1}", l.tower()), std::invalid_argument);
}

TEST_CASE("fit rows from a profile CSV") {
  std::string csv = "T,T_decimal,mg,mg_decimal,N,truncated\n1,1,1/2,0.5,1,0\n4,4,1/4,0.25,3,0\n9,9,1/5,0.2,5,0\n";
  std::optional<std::string> last;
  auto rows = fit_rows_from_csv(csv, {2, 4, 8}, nullptr, &last);
  REQUIRE(rows.size() == 3);
  CHECK(*rows[0].T == 1.0);
  CHECK(*rows[1].T == 4.0);
  CHECK_FALSE(rows[2].T);
  CHECK(*last == "1/5");
  TowerSpec q;
  auto exact = fit_rows_from_csv(csv, {5}, &q, nullptr);
  CHECK(*exact[0].T == 9.0);
}
