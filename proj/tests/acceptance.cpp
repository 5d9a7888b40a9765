// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "polyflow/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace polyflow;

#ifndef PRESET_DIR
#error "PRESET_DIR must point at the preset nets"
#endif

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Preset {
  std::string name;
  std::string text;
  Surface surface;
  FieldElement alpha;
};

std::vector<Preset> load_presets() {
  std::vector<Preset> out;
  for (const char* name : {"torus", "lshape", "lshape_golden", "octagon"}) {
    std::string text = read_file(std::string(PRESET_DIR) + "/" + name + ".net");
    ParseResult r = parse_net(text);
    if (!r.ok() || r.doc.slopes.empty()) throw std::runtime_error(std::string("preset ") + name + " does not parse");
    out.push_back({name, text, to_surface(r.doc), r.doc.slopes[0].second});
  }
  return out;
}

EdgeInterval random_interval(const Surface& s, std::mt19937_64& rng, long grain = 100000) {
  std::uniform_int_distribution<std::size_t> e(0, s.edge_count() - 1);
  std::uniform_int_distribution<long> p(0, grain);
  std::size_t edge = e(rng);
  long a = p(rng), b = p(rng);
  while (a == b) b = p(rng);
  if (a > b) std::swap(a, b);
  const FieldElement& L = s.edge_length(edge);
  return {edge, L * FieldElement(make_rational(a, grain)), L * FieldElement(make_rational(b, grain))};
}

FieldElement golden() {
  TowerSpec k = TowerSpec::sqrt5();
  return (FieldElement::generator(k, "s") - FieldElement(1)) * FieldElement(Rational(1, 2));
}

FieldElement sqrt2m1() { return FieldElement::generator(TowerSpec::sqrt2(), "r") - FieldElement(1); }

// 1. ||n alpha|| > 1/((A+2) n) for n <= 1e5.
Outcome diophantine_exhaustive() {
  Outcome o;
  for (auto [name, alpha, A] : {std::tuple{"golden", golden(), 1L}, std::tuple{"sqrt2m1", sqrt2m1(), 2L}}) {
    try {
      BadApproxReport r = check_bad_approx_bound(alpha, A, 100000);
      o.pass = o.pass && r.passed && r.min_value > FieldElement(1);
      o.detail += std::string(name) + " min (A+2)n||n alpha|| " + to_decimal(r.min_value, 6) + "; ";
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail += std::string(name) + ": " + e.what() + "; ";
    }
  }
  return o;
}

// 2. Certified linear-form bounds against exact distances over max|ni| <= 50.
Outcome norm_bound_soundness() {
  Outcome o;
  OctagonLedger L = octagon_constants();
  LinearFormEvaluator ev(L.alpha, L.beta);
  const long N = 50;
  long forms = 0, violations = 0;
  Rational c5 = L.c5;
  for (long n1 = -N; n1 <= N; ++n1)
    for (long n2 = -N; n2 <= N; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      for (long n3 = -N; n3 <= N; ++n3) {
        ++forms;
        LinearFormBound b;
        try {
          b = ev.bound(n1, n2, n3);
        } catch (const std::domain_error&) {
          ++violations;
          continue;
        }
        long h = std::max({std::labs(n1), std::labs(n2), std::labs(n3)});
        FieldElement scaled = b.distance * FieldElement(Rational(pow_of(Integer(h), 5)));
        if (!(b.bound <= b.distance) || !(FieldElement(c5) <= scaled)) ++violations;
      }
    }
  EmpiricalC5 emp = empirical_c5(L.alpha, L.beta, N);
  bool monotone = emp.exact_min.sign() > 0;
  for (std::size_t i = 1; i < emp.running_min.size(); ++i) monotone = monotone && emp.running_min[i] <= emp.running_min[i - 1];
  o.pass = violations == 0 && monotone && FieldElement(c5) <= emp.exact_min;
  o.detail = std::to_string(forms) + " forms, " + std::to_string(violations) + " bound violations; certified c5 " +
             fmt("%.4g", c5.get_d()) + " <= empirical min " + to_decimal(emp.exact_min, 6) +
             (monotone ? ", running min non-increasing" : ", running min NOT monotone");
  return o;
}

// 3. Length conservation over split and unsplit shifts.
Outcome conservation(const std::vector<Preset>& presets) {
  Outcome o;
  std::mt19937_64 rng(2024);
  for (const auto& p : presets) {
    Slope slope(p.alpha);
    long splits = 0, plain = 0, bad = 0, tries = 0;
    while ((splits < 1000 || plain < 1000) && tries < 200000) {
      ++tries;
      EdgeInterval I = random_interval(p.surface, rng);
      Direction dir = tries % 2 ? Direction::Forward : Direction::Reverse;
      ShiftOutcome out = shift_interval(p.surface, I, slope, dir);
      if (out.split() ? splits >= 1000 : plain >= 1000) continue;
      FieldElement total = FieldElement(0);
      for (const auto& piece : out.pieces) {
        if (!(piece.image.length() == piece.source.length())) ++bad;
        total += piece.image.length();
      }
      if (!(total == I.length())) ++bad;
      if (out.split() && !(out.top().source.length() + out.bottom().source.length() == I.length()) &&
          out.pieces.size() == 2)
        ++bad;
      (out.split() ? splits : plain)++;
    }
    bool ok = splits >= 1000 && plain >= 1000 && bad == 0;
    o.pass = o.pass && ok;
    o.detail += p.name + " " + std::to_string(splits) + " split/" + std::to_string(plain) + " plain" +
                (bad ? " " + std::to_string(bad) + " mismatches" : "") + "; ";
  }
  return o;
}

// 4. shift_interval against point traces; first return map partitions.
Outcome oracle_equivalence(const std::vector<Preset>& presets) {
  Outcome o;
  std::mt19937_64 rng(77);
  for (const auto& p : presets) {
    Slope slope(p.alpha);
    long bad = 0, points = 0;
    for (int it = 0; it < 1000; ++it) {
      EdgeInterval I = random_interval(p.surface, rng);
      Direction dir = it % 2 ? Direction::Forward : Direction::Reverse;
      ShiftOutcome out = shift_interval(p.surface, I, slope, dir);
      for (int j = 0; j < 16; ++j) {
        // Both endpoints region, the midpoint and evenly spread interior points.
        Rational f = j == 0 ? make_rational(1, 1000) : j == 15 ? make_rational(999, 1000) : make_rational(2 * j + 1, 32);
        FieldElement y = I.lo + I.length() * FieldElement(f);
        const ShiftPiece* piece = nullptr;
        for (const auto& pc : out.pieces)
          if (pc.source.lo < y && y < pc.source.hi) piece = &pc;
        if (!piece) {
          bool is_break = false;
          for (const auto& b : out.breaks) is_break |= b.y == y;
          if (!is_break) ++bad;
          continue;
        }
        ++points;
        PointShift ps = shift_point(p.surface, {I.edge, y}, slope, dir);
        if (ps.at.edge != piece->image.edge || !(ps.at.y == y - piece->source.lo + piece->image.lo) ||
            !(ps.dtau == out.dtau) || !(ps.delta == piece->delta))
          ++bad;
      }
    }
    auto pieces = first_return_map(p.surface, slope);
    bool tiles = true;
    for (int use_image = 0; use_image < 2; ++use_image)
      for (std::size_t e = 0; e < p.surface.edge_count(); ++e) {
        std::vector<EdgeInterval> on;
        for (const auto& pc : pieces)
          if ((use_image ? pc.image : pc.source).edge == e) on.push_back(use_image ? pc.image : pc.source);
        std::sort(on.begin(), on.end(), [](const EdgeInterval& a, const EdgeInterval& b) { return a.lo < b.lo; });
        if (on.empty() || on.front().lo.sign() != 0 || !(on.back().hi == p.surface.edge_length(e))) tiles = false;
        for (std::size_t k = 1; k < on.size(); ++k) tiles = tiles && on[k].lo == on[k - 1].hi;
      }
    o.pass = o.pass && bad == 0 && tiles;
    o.detail += p.name + " " + std::to_string(points) + " points" + (bad ? ", " + std::to_string(bad) + " mismatches" : "") +
                (tiles ? "" : ", return map does not tile") + "; ";
  }
  return o;
}

struct VisitRun {
  long runs = 0, bound_fail = 0, member_fail = 0, replay_fail = 0, order_fail = 0, endpoint_fail = 0;
  std::string errors;
  double worst_ratio = 0;  // |t*| x / c0, cascade
};

// 5 and 6 share the runs.
VisitRun visit_runs() {
  VisitRun v;
  std::mt19937_64 rng(5150);
  struct Case {
    Surface s;
    FieldElement alpha;
    long A;
  };
  std::vector<Case> cases;
  cases.push_back({unit_torus().lift_to(TowerSpec::sqrt5()), golden(), 1});
  cases.push_back({l_shape().lift_to(TowerSpec::sqrt2()), sqrt2m1(), 2});
  const long xs[] = {2, 8, 32, 128};
  for (const auto& c : cases) {
    Slope slope(c.alpha);
    ConstantsLedger L = constants(c.A, static_cast<long>(c.s.face_count()));
    Rational c2 = make_rational(1, Integer(c.A + 2) * L.c0);
    for (int it = 0; it < 200; ++it) {
      const TowerSpec& k = c.s.tower();
      FieldElement x(k, make_rational(1, xs[it % 4]));
      std::uniform_int_distribution<std::size_t> ed(0, c.s.edge_count() - 1);
      std::size_t e = ed(rng);
      long room = 1000000 - 1000000 / xs[it % 4];
      std::uniform_int_distribution<long> pos(0, room);
      FieldElement lo(k, make_rational(pos(rng), 1000000));
      EdgeInterval qr{e, lo, lo + x};
      ++v.runs;
      try {
        VisitCertificate cert = cascade_search(c.s, qr, slope, L);
        if (!(replay(c.s, slope, cert) == cert.tau_star)) ++v.replay_fail;
        Rational cap = Rational(L.c0) / Rational(1, xs[it % 4]) + 1;
        OracleVisit orc = find_visit_oracle(c.s, qr, slope, cap);
        for (const FieldElement* tau : {&cert.tau_star, &orc.tau}) {
          if (!within_visit_bound(L, slope, *tau, x)) ++v.bound_fail;
          VerticalCoord at = locate(c.s, {qr.edge, qr.hi}, slope, *tau);
          if (!qr.contains(at)) ++v.member_fail;
        }
        if (abs(orc.tau) > abs(cert.tau_star)) ++v.order_fail;
        // Separation from both endpoints, recomputed from the located point.
        VerticalCoord at = locate(c.s, {qr.edge, qr.hi}, slope, cert.tau_star);
        FieldElement need = x * FieldElement(c2);
        if (!(at.y - qr.lo >= need && qr.hi - at.y >= need)) ++v.endpoint_fail;
        if (!endpoint_distance(c.s, qr, slope, cert.tau_star, L).ok) ++v.endpoint_fail;
        double ratio = std::fabs(slope.time_decimal(cert.tau_star)) * x.to_double() / L.c0.get_d();
        v.worst_ratio = std::max(v.worst_ratio, ratio);
      } catch (const std::exception& ex) {
        ++v.bound_fail;
        if (v.errors.size() < 200) v.errors += std::string(ex.what()) + "; ";
      }
    }
  }
  return v;
}

// 7, 8: least horizons with maximum gap <= 1/n.
FitReport passage_fit(const Surface& s, const FieldElement& alpha, const VerticalCoord& start, long n_max,
                      std::string& detail) {
  std::vector<long> targets;
  for (long n = 2; n <= n_max; n *= 2) targets.push_back(n);
  auto rows = first_passage(s, Slope(alpha), start, start.edge, targets, 20000000);
  std::vector<FitInput> in;
  std::optional<std::string> last;
  for (const auto& r : rows) {
    in.push_back({r.n, r.reached ? std::optional<double>(r.T) : std::nullopt});
    last = to_string(r.mg);
    detail += "T(" + std::to_string(r.n) + ")=" + (r.reached ? fmt("%.4g", r.T) : std::string("-")) + " ";
  }
  return superdensity_fit(in, last);
}

Outcome gap_decay_polysquare() {
  Outcome o;
  TowerSpec k = TowerSpec::sqrt5();
  std::string d;
  FitReport f = passage_fit(l_shape().lift_to(k), golden(), {0, FieldElement(k, make_rational(1, 3))}, 1024, d);
  o.pass = f.complete && f.c1.size() == f.rows.size() && f.ratio <= 8.0;
  o.detail = "max/min T(n)/n = " + fmt("%.3f", f.ratio) + " (limit 8); " + d;
  return o;
}

Outcome gap_decay_octagon() {
  Outcome o;
  TowerSpec k = TowerSpec::sqrt2_cbrt3();
  std::string d;
  FitReport f = passage_fit(build_octagon(k), octagon_constants().alpha, {0, FieldElement(k, make_rational(1, 3))}, 64, d);
  o.pass = f.complete && f.exponent && std::isfinite(*f.exponent) && *f.exponent <= 6.0;
  o.detail = "fitted exponent e = " + (f.exponent ? fmt("%.3f", *f.exponent) : std::string("none")) + " (cap 6); " + d;
  return o;
}

Outcome surface_integrity() {
  Outcome o;
  TowerSpec k = TowerSpec::sqrt2_cbrt3();
  Surface oct = build_octagon(k);
  FieldElement r = FieldElement::generator(k, "r");
  std::vector<FieldElement> lengths;
  for (std::size_t e = 0; e < oct.edge_count(); ++e) lengths.push_back(oct.edge_length(e));
  std::sort(lengths.begin(), lengths.end());
  std::vector<FieldElement> want{FieldElement(1), FieldElement(1), FieldElement(1), FieldElement(1), r, r, r};
  bool edges = oct.edge_count() == 7 && lengths == want;
  bool total = oct.total_vertical_length() == FieldElement(4) + FieldElement(3) * r;
  bool genus = oct.genus() == 2 && unit_torus().genus() == 1;
  bool area = true;
  for (const auto& cells : {std::vector<Cell>{{0, 0}}, l_shape_cells()}) {
    SurfaceParts table = table_from_cells(cells);
    FieldElement a = FieldElement(0);
    for (const auto& f : table.faces) a += f.width * f.height;
    area = area && four_copy(table).area() == a * FieldElement(4);
  }
  o.pass = edges && total && genus && area;
  o.detail = std::string("octagon edges ") + (edges ? "{1,1,1,1,r,r,r}" : "WRONG") + ", total " +
             to_string(oct.total_vertical_length()) + ", genus " + std::to_string(oct.genus()) + ", torus genus " +
             std::to_string(unit_torus().genus()) + ", four-copy area " + (area ? "x4" : "WRONG");
  return o;
}

std::string mutate(std::string s, std::mt19937_64& rng) {
  static const std::string alphabet = "0123456789 rsc^=*/+-().,#\nLRTBVHfacewidthgluetowerslope\t\xff\x80";
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  int edits = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < edits; ++i) {
    std::size_t at = s.empty() ? 0 : rng() % s.size();
    switch (op(rng)) {
      case 0:
        s.insert(s.begin() + static_cast<long>(at), alphabet[ch(rng)]);
        break;
      case 1:
        if (!s.empty()) s.erase(at, 1 + rng() % 5);
        break;
      case 2:
        if (!s.empty()) s[at] = alphabet[ch(rng)];
        break;
      default:
        if (!s.empty()) s[at] = static_cast<char>(rng() & 0xff);
    }
  }
  return s;
}

Outcome interface_checks(const std::vector<Preset>& presets) {
  Outcome o;
  std::mt19937_64 rng(31337);
  long rejected = 0, accepted = 0, unpositioned = 0, crashes = 0, surfaces = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string input;
    if (i % 4 == 0) {
      std::size_t n = rng() % 200;
      for (std::size_t j = 0; j < n; ++j) input.push_back(static_cast<char>(rng() & 0xff));
    } else {
      input = mutate(presets[rng() % presets.size()].text, rng);
    }
    try {
      ParseResult r = parse_net(input);
      if (r.ok()) {
        ++accepted;
        std::string once = serialize_net(r.doc);
        ParseResult again = parse_net(once);
        if (!again.ok() || serialize_net(again.doc) != once) ++crashes;
        if (validate(to_parts(r.doc)).ok()) ++surfaces;
      } else {
        ++rejected;
        for (const auto& d : r.diagnostics)
          if (d.line < 1 || d.column < 1) ++unpositioned;
      }
    } catch (...) {
      ++crashes;
    }
  }
  bool stable = true;
  for (const auto& p : presets) {
    ParseResult r = parse_net(p.text);
    std::string once = serialize_net(r.doc);
    stable = stable && once == p.text && serialize_net(parse_net(once).doc) == once;
  }
  bool csv = true;
  for (const auto& p : presets) {
    Slope slope(p.alpha);
    VerticalCoord start{0, p.surface.edge_length(0) * FieldElement(make_rational(2, 7))};
    TraceResult tr = trace(p.surface, start, slope, Direction::Forward, StopRule{300, std::nullopt});
    auto rows = parse_crossings_csv(crossings_csv(slope, start, tr), p.surface.tower());
    csv = csv && rows.size() == tr.crossings.size() + 1;
    for (std::size_t i = 0; csv && i < tr.crossings.size(); ++i)
      csv = rows[i + 1].tau == tr.crossings[i].tau && rows[i + 1].y == tr.crossings[i].at.y &&
            rows[i + 1].edge == tr.crossings[i].at.edge && rows[i + 1].n == tr.crossings[i].n;
    GapProfile prof = gap_profile(p.surface, slope, start, 0, {Rational(1), Rational(30), Rational(300)});
    auto back = parse_gap_profile_csv(gap_profile_csv(prof), p.surface.tower());
    for (std::size_t i = 0; csv && i < back.size(); ++i)
      csv = back[i].T == prof.rows[i].T && back[i].mg == prof.rows[i].mg && back[i].N == prof.rows[i].N;
  }
  o.pass = crashes == 0 && unpositioned == 0 && stable && csv;
  o.detail = "fuzz 100000 inputs: " + std::to_string(rejected) + " rejected, " + std::to_string(accepted) +
             " accepted (" + std::to_string(surfaces) + " valid surfaces), " + std::to_string(crashes) +
             " crashes, " + std::to_string(unpositioned) + " unpositioned; presets byte-stable " +
             (stable ? "yes" : "NO") + "; CSV exact re-parse " + (csv ? "yes" : "NO");
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto run = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& f) {
    auto t0 = clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    bool in_time = limit_s <= 0 || secs < limit_s;
    bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
                limit_s > 0 ? (", limit " + fmt("%.0f", limit_s) + " s").c_str() : "");
    std::fflush(stdout);
  };

  std::vector<Preset> presets;
  try {
    presets = load_presets();
  } catch (const std::exception& e) {
    std::printf("FAIL presets: %s\n", e.what());
    return 1;
  }

  run(1, "diophantine exhaustive", 60, diophantine_exhaustive);
  run(2, "norm-bound soundness", 300, norm_bound_soundness);
  run(3, "conservation", 0, [&] { return conservation(presets); });
  run(4, "oracle equivalence", 0, [&] { return oracle_equivalence(presets); });

  VisitRun v;
  double visit_secs = 0;
  run(5, "visit bound", 300, [&] {
    auto t0 = clock::now();
    v = visit_runs();
    visit_secs = std::chrono::duration<double>(clock::now() - t0).count();
    Outcome o;
    o.pass = v.bound_fail == 0 && v.member_fail == 0 && v.replay_fail == 0 && v.order_fail == 0;
    o.detail = std::to_string(v.runs) + " runs; bound failures " + std::to_string(v.bound_fail) +
               ", membership failures " + std::to_string(v.member_fail) + ", replay mismatches " +
               std::to_string(v.replay_fail) + ", oracle above cascade " + std::to_string(v.order_fail) +
               "; max |t*| x / c0 = " + fmt("%.3g", v.worst_ratio) + (v.errors.empty() ? "" : "; " + v.errors);
    return o;
  });
  run(6, "endpoint separation", 0, [&] {
    Outcome o;
    o.pass = v.runs == 400 && v.endpoint_fail == 0 && v.bound_fail == 0;
    o.detail = "dist to Q and R >= x/((A+2) c0) in " + std::to_string(v.runs - v.endpoint_fail) + "/" +
               std::to_string(v.runs) + " runs (shared with criterion 5)";
    return o;
  });
  run(7, "gap decay, polysquare", 600, gap_decay_polysquare);
  run(8, "gap decay, octagon", 900, gap_decay_octagon);
  run(9, "surface integrity", 0, surface_integrity);
  run(10, "interface", 0, [&] { return interface_checks(presets); });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
