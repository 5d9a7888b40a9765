// SPDX-License-Identifier: Apache-2.0
#include "polyflow/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace polyflow {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTimeSuffix = ")*sqrt(1+alpha^2)";

std::string dec(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string dec(const FieldElement& x) { return to_decimal(x, 15); }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

std::vector<std::vector<std::string_view>> csv_rows(std::string_view text, std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  auto lines = split(text, '\n');
  bool seen_header = false;
  for (auto line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw std::invalid_argument("unexpected CSV header '" + std::string(line) + "'");
      seen_header = true;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  if (!seen_header) throw std::invalid_argument("empty CSV");
  return rows;
}

long to_long(std::string_view s) {
  std::size_t used = 0;
  long v = std::stol(std::string(s), &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

ojson element(const FieldElement& x) { return ojson{{"expr", to_string(x)}, {"decimal", x.to_double()}}; }

ojson interval_json(const EdgeInterval& I) {
  return ojson{{"edge", I.edge + 1}, {"lo", to_string(I.lo)}, {"hi", to_string(I.hi)}};
}

EdgeInterval read_interval(const ojson& j, const TowerSpec& tower) {
  long e = j.at("edge").get<long>();
  if (e < 1) throw std::invalid_argument("edge numbers start at 1");
  return {static_cast<std::size_t>(e - 1), parse_expr(j.at("lo").get<std::string>(), tower),
          parse_expr(j.at("hi").get<std::string>(), tower)};
}

const char* dir_name(Direction d) { return d == Direction::Forward ? "forward" : "reverse"; }

Direction read_dir(const std::string& s) {
  if (s == "forward") return Direction::Forward;
  if (s == "reverse") return Direction::Reverse;
  throw std::invalid_argument("bad direction '" + s + "'");
}

template <class E, std::size_t N>
E read_enum(const std::string& s, const std::pair<const char*, E> (&names)[N], const char* what) {
  for (const auto& [n, e] : names)
    if (s == n) return e;
  throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
}

}  // namespace

std::string time_text(const FieldElement& tau) { return "(" + to_string(tau) + std::string(kTimeSuffix); }

FieldElement parse_time_text(std::string_view text, const TowerSpec& tower) {
  if (text.size() < kTimeSuffix.size() + 2 || text.front() != '(' ||
      text.substr(text.size() - kTimeSuffix.size()) != kTimeSuffix)
    throw std::invalid_argument("bad time '" + std::string(text) + "'");
  return parse_expr(text.substr(1, text.size() - 1 - kTimeSuffix.size()), tower);
}

std::string crossings_csv(const Slope& slope, const VerticalCoord& start, const TraceResult& trace) {
  std::ostringstream out;
  out << "index,t,t_decimal,edge,y,y_decimal,n1,n2,n3,n4\n";
  auto row = [&](long index, const FieldElement& tau, const VerticalCoord& at, const Counters& n) {
    out << index << ',' << time_text(tau) << ',' << dec(slope.time_decimal(tau)) << ',' << at.edge + 1 << ','
        << to_string(at.y) << ',' << dec(at.y) << ',' << n.n1 << ',' << n.n2 << ',' << n.n3 << ',' << n.n4 << '\n';
  };
  row(0, FieldElement(start.y.tower(), Rational(0)), start, Counters{});
  for (const auto& c : trace.crossings) row(c.index, c.tau, c.at, c.n);
  return out.str();
}

std::vector<CsvCrossing> parse_crossings_csv(std::string_view text, const TowerSpec& tower) {
  std::vector<CsvCrossing> out;
  for (const auto& f : csv_rows(text, "index,t,t_decimal,edge,y,y_decimal,n1,n2,n3,n4")) {
    if (f.size() != 10) throw std::invalid_argument("crossings row needs 10 fields");
    CsvCrossing c;
    c.index = to_long(f[0]);
    c.tau = parse_time_text(f[1], tower);
    long e = to_long(f[3]);
    if (e < 1) throw std::invalid_argument("edge numbers start at 1");
    c.edge = static_cast<std::size_t>(e - 1);
    c.y = parse_expr(f[4], tower);
    c.n = {to_long(f[6]), to_long(f[7]), to_long(f[8]), to_long(f[9])};
    out.push_back(std::move(c));
  }
  return out;
}

std::string gap_profile_csv(const GapProfile& profile) {
  std::ostringstream out;
  out << "T,T_decimal,mg,mg_decimal,N,truncated\n";
  for (const auto& r : profile.rows)
    out << to_string(r.T) << ',' << dec(r.T.get_d()) << ',' << to_string(r.mg) << ',' << dec(r.mg) << ',' << r.N
        << ',' << (r.truncated ? 1 : 0) << '\n';
  return out.str();
}

std::vector<CsvGapRow> parse_gap_profile_csv(std::string_view text, const TowerSpec& tower) {
  std::vector<CsvGapRow> out;
  for (const auto& f : csv_rows(text, "T,T_decimal,mg,mg_decimal,N,truncated")) {
    if (f.size() != 6) throw std::invalid_argument("profile row needs 6 fields");
    out.push_back({parse_rational(f[0]), parse_expr(f[2], tower), to_long(f[4]), to_long(f[5]) != 0});
  }
  return out;
}

std::string passage_csv(const std::vector<PassageRow>& rows) {
  std::ostringstream out;
  out << "n,reached,radius,T_decimal,N,mg,mg_decimal\n";
  for (const auto& r : rows)
    out << r.n << ',' << (r.reached ? 1 : 0) << ',' << (r.reached ? to_string(r.radius) : "") << ','
        << (r.reached ? dec(r.T) : "") << ',' << r.N << ',' << to_string(r.mg) << ',' << dec(r.mg) << '\n';
  return out.str();
}

std::vector<FitInput> fit_rows_from_csv(std::string_view text, const std::vector<long>& targets,
                                        const TowerSpec* tower, std::optional<std::string>* final_mg) {
  std::vector<FitInput> out;
  if (text.substr(0, 10) == "n,reached,") {
    std::optional<std::string> last;
    for (const auto& f : csv_rows(text, "n,reached,radius,T_decimal,N,mg,mg_decimal")) {
      if (f.size() != 7) throw std::invalid_argument("passage row needs 7 fields");
      FitInput in;
      in.n = to_long(f[0]);
      if (to_long(f[1]) != 0) in.T = std::stod(std::string(f[3]));
      last = std::string(f[5]);
      if (!targets.empty() && std::find(targets.begin(), targets.end(), in.n) == targets.end()) continue;
      out.push_back(in);
    }
    if (final_mg) *final_mg = last;
    return out;
  }
  struct Row {
    Rational T;
    std::optional<FieldElement> mg;
    double mg_decimal;
    std::string mg_text;
  };
  std::vector<Row> rows;
  for (const auto& f : csv_rows(text, "T,T_decimal,mg,mg_decimal,N,truncated")) {
    if (f.size() != 6) throw std::invalid_argument("profile row needs 6 fields");
    Row r{parse_rational(f[0]), std::nullopt, std::stod(std::string(f[3])), std::string(f[2])};
    if (tower) r.mg = parse_expr(f[2], *tower);
    if (!rows.empty() && r.T < rows.back().T) throw std::invalid_argument("profile horizons must ascend");
    rows.push_back(std::move(r));
  }
  if (final_mg) *final_mg = rows.empty() ? std::nullopt : std::optional<std::string>(rows.back().mg_text);
  for (long n : targets) {
    if (n < 1) throw std::invalid_argument("targets must be positive");
    FitInput in;
    in.n = n;
    for (const auto& r : rows) {
      bool hit = r.mg ? *r.mg <= FieldElement(Rational(1, n)) : r.mg_decimal <= 1.0 / static_cast<double>(n);
      if (hit) {
        in.T = r.T.get_d();
        break;
      }
    }
    out.push_back(in);
  }
  return out;
}

std::string validation_json(const SurfaceParts& parts, const ValidationReport& report) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "validation";
  j["ok"] = report.ok();
  j["tower"] = parts.tower.to_string();
  ojson viol = ojson::array();
  for (const auto& v : report.violations) viol.push_back({{"kind", violation_name(v.kind)}, {"message", v.message}});
  j["violations"] = viol;
  j["faces"] = parts.faces.size();
  if (report.ok()) {
    Surface s(parts);
    ojson edges = ojson::array();
    for (std::size_t e = 0; e < s.edge_count(); ++e)
      edges.push_back({{"edge", e + 1}, {"face", s.face(e).id}, {"length", element(s.edge_length(e))}});
    j["vertical_edges"] = edges;
    j["total_vertical_length"] = element(s.total_vertical_length());
    j["area"] = element(s.area());
    j["polysquare"] = s.is_polysquare();
  }
  if (report.genus) {
    j["V"] = report.V;
    j["E"] = report.E;
    j["F"] = report.F;
    j["genus"] = *report.genus;
    ojson verts = ojson::array();
    for (const auto& v : report.vertices)
      verts.push_back({{"corners", v.corner_count()}, {"angle_over_2pi", to_string(v.angle_over_2pi())},
                       {"singular", v.singular()}});
    j["vertices"] = verts;
  }
  return j.dump(2) + "\n";
}

std::string fit_json(const FitReport& fit) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "fit";
  ojson rows = ojson::array();
  for (const auto& r : fit.rows) {
    ojson row{{"n", r.n}};
    row["T"] = r.T ? ojson(*r.T) : ojson(nullptr);
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["T_over_n"] = fit.c1;
  j["ratio"] = fit.ratio;
  j["exponent"] = fit.exponent ? ojson(*fit.exponent) : ojson(nullptr);
  j["complete"] = fit.complete;
  j["verdict"] = fit.verdict;
  return j.dump(2) + "\n";
}

namespace {

const std::pair<const char*, TerminationReason> kReasons[] = {
    {"claim1-return", TerminationReason::Claim1Return},
    {"claim2-edge-repetition", TerminationReason::Claim2EdgeRepetition},
    {"claim3-return", TerminationReason::Claim3Return},
    {"claim4-edge-repetition", TerminationReason::Claim4EdgeRepetition},
};
const std::pair<const char*, PhaseEnd> kEnds[] = {
    {"kept", PhaseEnd::Kept},
    {"collapsed", PhaseEnd::Collapsed},
    {"return", PhaseEnd::Return},
    {"repetition", PhaseEnd::Repetition},
};

ojson certificate_object(const VisitCertificate& cert, const Slope& slope) {
  ojson j;
  j["mode"] = cert.mode;
  j["tower"] = slope.alpha().tower().to_string();
  j["alpha"] = to_string(slope.alpha());
  j["qr"] = interval_json(cert.qr);
  ojson tops = ojson::array();
  for (const auto& t : cert.tops) {
    ojson o = interval_json(t.interval);
    o["tau"] = to_string(t.tau);
    o["dir"] = dir_name(t.dir);
    o["level"] = t.level;
    tops.push_back(o);
  }
  j["tops"] = tops;
  ojson phases = ojson::array();
  for (const auto& p : cert.phases)
    phases.push_back({{"dir", dir_name(p.dir)},
                      {"start", p.start},
                      {"shifts", p.shifts},
                      {"window", to_string(p.window)},
                      {"end", phase_end_name(p.end)},
                      {"final_split", p.final_split}});
  j["phases"] = phases;
  j["reason"] = reason_name(cert.reason);
  j["first"] = cert.first;
  j["second"] = cert.second;
  j["tau_star"] = to_string(cert.tau_star);
  j["t_star"] = time_text(cert.tau_star);
  j["t_star_decimal"] = slope.time_decimal(cert.tau_star);
  j["total_shifts"] = cert.total_shifts;
  return j;
}

}  // namespace

std::string certificate_json(const VisitCertificate& cert, const Slope& slope) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "certificate";
  j.update(certificate_object(cert, slope));
  return j.dump(2) + "\n";
}

VisitCertificate parse_certificate_json(std::string_view text, const TowerSpec& tower, FieldElement* alpha) {
  try {
    ojson j = ojson::parse(text);
    if (j.contains("certificate")) j = j.at("certificate");
    if (j.value("schema", kSchemaVersion) != kSchemaVersion) throw std::invalid_argument("unsupported schema");
    VisitCertificate c;
    c.mode = j.at("mode").get<std::string>();
    if (alpha) *alpha = parse_expr(j.at("alpha").get<std::string>(), tower);
    c.qr = read_interval(j.at("qr"), tower);
    for (const auto& t : j.at("tops")) {
      TopInterval ti;
      ti.interval = read_interval(t, tower);
      ti.tau = parse_expr(t.at("tau").get<std::string>(), tower);
      ti.dir = read_dir(t.at("dir").get<std::string>());
      ti.level = t.at("level").get<long>();
      c.tops.push_back(std::move(ti));
    }
    for (const auto& p : j.at("phases")) {
      PhaseRecord r;
      r.dir = read_dir(p.at("dir").get<std::string>());
      r.start = p.at("start").get<std::size_t>();
      r.shifts = p.at("shifts").get<long>();
      r.window = Integer(p.at("window").get<std::string>());
      r.end = read_enum(p.at("end").get<std::string>(), kEnds, "phase end");
      r.final_split = p.at("final_split").get<bool>();
      c.phases.push_back(std::move(r));
    }
    c.reason = read_enum(j.at("reason").get<std::string>(), kReasons, "reason");
    c.first = j.at("first").get<long>();
    c.second = j.at("second").get<long>();
    c.tau_star = parse_expr(j.at("tau_star").get<std::string>(), tower);
    c.total_shifts = j.at("total_shifts").get<long>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

std::string visit_json(const Slope& slope, const VisitSummary& v) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "visit";
  j["interval"] = interval_json(v.qr);
  j["x"] = element(v.x);
  j["oracle"] = {{"tau", to_string(v.oracle.tau)},
                 {"t", time_text(v.oracle.tau)},
                 {"t_decimal", slope.time_decimal(v.oracle.tau)},
                 {"edge", v.oracle.at.edge + 1},
                 {"y", to_string(v.oracle.at.y)},
                 {"crossings", v.oracle.crossings}};
  j["cascade"] = {{"reason", reason_name(v.cascade.reason)},
                  {"tau", to_string(v.cascade.tau_star)},
                  {"t", time_text(v.cascade.tau_star)},
                  {"t_decimal", slope.time_decimal(v.cascade.tau_star)},
                  {"total_shifts", v.cascade.total_shifts},
                  {"replay_ok", v.replayed == v.cascade.tau_star}};
  j["bound"] = {{"text", v.bound_text}, {"holds", v.within_bound}};
  j["endpoint"] = {{"above_q", element(v.endpoint.above_q)},
                   {"below_r", element(v.endpoint.below_r)},
                   {"inside", v.endpoint.inside},
                   {"ok", v.endpoint.ok}};
  j["certificate"] = certificate_object(v.cascade, slope);
  return j.dump(2) + "\n";
}

std::string diophantine_json(const DiophantineTable& t) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "diophantine";
  j["preset"] = t.preset;
  j["n_max"] = t.n_max;
  j["passed"] = t.passed;
  if (t.bad_approx) {
    const auto& b = *t.bad_approx;
    j["A"] = to_string(b.A);
    j["min_n_A2_dist"] = element(b.min_value);
    j["argmin"] = b.argmin;
    ojson digits = ojson::array();
    for (const auto& d : b.digits_checked) digits.push_back(to_string(d));
    j["digits_checked"] = digits;
  }
  if (t.certified) {
    j["c4"] = to_string(t.certified->c4);
    j["c5_certified"] = to_string(t.certified->c5);
    j["c5_certified_decimal"] = t.certified->c5.get_d();
    j["exponent"] = t.certified->exponent;
  }
  if (t.empirical) {
    const auto& e = *t.empirical;
    j["empirical_min"] = element(e.exact_min);
    j["argmin"] = {e.n1, e.n2, e.n3};
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < e.running_min.size(); ++i)
      rows.push_back({{"N", i + 1}, {"min_upper", to_string(e.running_min[i])},
                      {"min_decimal", e.running_min[i].get_d()}});
    j["running_min"] = rows;
  }
  return j.dump(2) + "\n";
}

std::string diophantine_text(const DiophantineTable& t) {
  std::ostringstream out;
  out << "preset " << t.preset << ", n_max " << t.n_max << "\n";
  if (t.bad_approx) {
    const auto& b = *t.bad_approx;
    long A2 = b.A.get_si() + 2;
    out << "A " << to_string(b.A) << "\n";
    out << "min over n of " << A2 << "n||n alpha|| = " << dec(b.min_value) << " at n = " << b.argmin << "\n";
    out << "bound ||n alpha|| > 1/(" << A2 << "n): " << (t.passed ? "holds" : "fails") << "\n";
  }
  if (t.certified)
    out << "certified c5 = " << dec(t.certified->c5.get_d()) << " (c4 = " << to_string(t.certified->c4)
        << ", exponent " << t.certified->exponent << ")\n";
  if (t.empirical) {
    const auto& e = *t.empirical;
    out << "N,min N^" << (t.certified ? t.certified->exponent : 5) << "||lambda||\n";
    for (std::size_t i = 0; i < e.running_min.size(); ++i) out << i + 1 << ',' << dec(e.running_min[i].get_d()) << "\n";
    out << "argmin (" << e.n1 << ", " << e.n2 << ", " << e.n3 << ")\n";
    out << "certified bound below empirical min: " << (t.passed ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace polyflow
