// SPDX-License-Identifier: Apache-2.0
#include "polyflow/polyflow.h"

#include "polyflow/contfrac.hpp"
#include "polyflow/report.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>

using namespace polyflow;

struct pf_surface {
  Surface surface;
  std::vector<std::pair<std::string, FieldElement>> slopes;
};

namespace {

thread_local std::string g_error;

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
pf_status guarded(F&& f) {
  g_error.clear();
  try {
    f();
    return PF_OK;
  } catch (const ParseFailure& e) {
    g_error = e.what();
    return PF_ERR_PARSE;
  } catch (const ArgumentError& e) {
    g_error = e.what();
    return PF_ERR_ARGUMENT;
  } catch (const LimitError& e) {
    g_error = e.what();
    return PF_ERR_LIMIT;
  } catch (const HypothesisViolated& e) {
    g_error = e.what();
    return PF_ERR_HYPOTHESIS;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return PF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return PF_ERR_DOMAIN;
  } catch (...) {
    g_error = "unknown failure";
    return PF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string(what) + " is required");
}

NetDocument parse_or_throw(const char* text, size_t len) {
  need(text, "text");
  ParseResult r = parse_net(std::string_view(text, len));
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += (msg.empty() ? "" : "\n") + to_string(d);
    throw ParseFailure(msg);
  }
  return std::move(r.doc);
}

FieldElement arg_expr(const char* text, const TowerSpec& tower, const char* what) {
  need(text, what);
  try {
    return parse_expr(text, tower);
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

Slope resolve_slope(const pf_surface* s, const char* slope) {
  need(slope, "slope");
  for (const auto& [name, v] : s->slopes)
    if (name == slope) return Slope(v);
  FieldElement a = arg_expr(slope, s->surface.tower(), "slope");
  if (!(a.sign() > 0 && a < FieldElement(1))) throw ArgumentError("slope must lie strictly between 0 and 1");
  return Slope(a);
}

std::size_t edge_index(const pf_surface* s, size_t edge) {
  if (edge < 1 || edge > s->surface.edge_count())
    throw ArgumentError("edge " + std::to_string(edge) + " out of range 1.." +
                        std::to_string(s->surface.edge_count()));
  return edge - 1;
}

std::vector<std::string> split_list(const char* text, const char* what) {
  need(text, what);
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw ArgumentError(std::string("empty entry in ") + what);
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ArgumentError(std::string(what) + " list is empty");
  return out;
}

Rational arg_rational(const std::string& text, const char* what) {
  try {
    Rational q = parse_rational(text);
    return q;
  } catch (const std::exception&) {
    throw ArgumentError(std::string("bad ") + what + " '" + text + "'");
  }
}

std::vector<long> arg_longs(const char* text, const char* what) {
  std::vector<long> out;
  for (const auto& item : split_list(text, what)) {
    char* end = nullptr;
    long v = std::strtol(item.c_str(), &end, 10);
    if (*end != '\0' || v < 1) throw ArgumentError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

VerticalCoord start_point(const pf_surface* s, size_t start_edge, const char* start_y) {
  std::size_t e = edge_index(s, start_edge);
  FieldElement y = start_y ? arg_expr(start_y, s->surface.tower(), "start height")
                           : s->surface.edge_length(e) * FieldElement(Rational(1, 2));
  return {e, y};
}

bool is_octagon(const Surface& s, const Slope& slope) {
  if (s.tower() != TowerSpec::sqrt2_cbrt3()) return false;
  FieldElement alpha = FieldElement::generator(s.tower(), "c") * FieldElement(Rational(1, 2));
  return slope.alpha() == alpha && same_structure(s, build_octagon(s.tower()));
}

struct Mode {
  std::optional<ConstantsLedger> poly;
  std::optional<OctagonLedger> oct;
};

Mode select_mode(const Surface& s, const Slope& slope) {
  Mode m;
  if (s.is_polysquare()) {
    auto A = periodic_digit_bound(slope.alpha());
    if (!A) throw std::domain_error("slope has no periodic continued fraction; no digit bound");
    if (!A->fits_slong_p()) throw std::domain_error("digit bound too large");
    m.poly = constants(A->get_si(), static_cast<long>(s.face_count()));
  } else if (is_octagon(s, slope)) {
    m.oct = octagon_constants();
  } else {
    throw std::domain_error("visiting-time constants need a polysquare surface or the octagon with slope cbrt(3)/2");
  }
  return m;
}

EdgeInterval interval_arg(const pf_surface* s, size_t edge, const char* lo, const char* hi) {
  std::size_t e = edge_index(s, edge);
  EdgeInterval I{e, arg_expr(lo, s->surface.tower(), "lo"), arg_expr(hi, s->surface.tower(), "hi")};
  if (!(I.lo.sign() >= 0 && I.lo < I.hi && I.hi <= s->surface.edge_length(e)))
    throw ArgumentError("interval must satisfy 0 <= lo < hi <= edge length");
  return I;
}

VisitCertificate run_cascade(const Surface& s, const EdgeInterval& I, const Slope& slope, const Mode& m) {
  return m.poly ? cascade_search(s, I, slope, *m.poly) : cascade_search(s, I, slope, *m.oct);
}

VisitSummary visit(const pf_surface* ps, const Slope& slope, const EdgeInterval& I) {
  const Surface& s = ps->surface;
  Mode m = select_mode(s, slope);
  VisitSummary v;
  v.qr = I;
  v.x = I.length();
  v.cascade = run_cascade(s, I, slope, m);
  v.replayed = replay(s, slope, v.cascade);
  // The cascade time is a visit, so the oracle minimum lies within it.
  double cap = std::ceil(std::fabs(slope.time_decimal(v.cascade.tau_star))) + 1;
  try {
    v.oracle = find_visit_oracle(s, I, slope, Rational(static_cast<long>(cap)));
  } catch (const std::runtime_error& e) {
    throw LimitError(e.what());
  }
  if (m.poly) {
    v.within_bound = within_visit_bound(*m.poly, slope, v.cascade.tau_star, v.x) &&
                     within_visit_bound(*m.poly, slope, v.oracle.tau, v.x);
    v.bound_text = "|t*| <= c0/x, c0 = " + to_string(m.poly->c0);
    v.endpoint = endpoint_distance(s, I, slope, v.cascade.tau_star, *m.poly);
  } else {
    double lt = std::log10(std::fabs(slope.time_decimal(v.cascade.tau_star)));
    double lo = std::log10(std::fabs(slope.time_decimal(v.oracle.tau)));
    v.within_bound = m.oct->visit_bound_holds(lt, v.x) && m.oct->visit_bound_holds(lo, v.x);
    char buf[96];
    std::snprintf(buf, sizeof buf, "log10|t*| <= log10 c8 + c9 log10(1/x), log10 c8 = %.6g", m.oct->log10_c8);
    v.bound_text = buf;
    v.endpoint = endpoint_distance(s, I, slope, v.cascade.tau_star, *m.oct);
  }
  return v;
}

std::string validation_text(const SurfaceParts& parts, const ValidationReport& r) {
  std::ostringstream out;
  out << (r.ok() ? "valid" : "invalid") << "\n";
  for (const auto& v : r.violations) out << violation_name(v.kind) << ": " << v.message << "\n";
  out << "faces " << parts.faces.size() << "\n";
  if (r.genus) out << "V " << r.V << ", E " << r.E << ", F " << r.F << ", genus " << *r.genus << "\n";
  if (r.ok()) {
    Surface s(parts);
    out << "vertical edges " << s.edge_count() << ", total length " << to_string(s.total_vertical_length())
        << "\n";
    for (const auto& vc : r.vertices)
      out << "vertex angle " << to_string(vc.angle_over_2pi()) << " * 2pi" << (vc.singular() ? " (cone point)" : "")
          << "\n";
  }
  return out.str();
}

}  // namespace

extern "C" {

const char* pf_version(void) { return "0.1.0"; }

const char* pf_last_error(void) { return g_error.c_str(); }

void pf_string_free(char* s) { std::free(s); }

pf_status pf_surface_parse(const char* text, size_t len, pf_surface** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    NetDocument doc = parse_or_throw(text, len);
    Surface s = to_surface(doc);
    *out = new pf_surface{std::move(s), doc.slopes};
  });
}

pf_status pf_surface_octagon(pf_surface** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    TowerSpec k = TowerSpec::sqrt2_cbrt3();
    FieldElement alpha = FieldElement::generator(k, "c") * FieldElement(Rational(1, 2));
    *out = new pf_surface{build_octagon(k), {{"alpha", alpha}}};
  });
}

void pf_surface_free(pf_surface* s) { delete s; }

size_t pf_surface_edge_count(const pf_surface* s) { return s ? s->surface.edge_count() : 0; }

long pf_surface_genus(const pf_surface* s) { return s ? s->surface.genus() : -1; }

pf_status pf_surface_serialize(const pf_surface* s, int with_summary, char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    NetDocument doc = to_document(s->surface, with_summary != 0);
    doc.slopes = s->slopes;
    *out = dup(serialize_net(doc));
  });
}

pf_status pf_validate(const char* text, size_t len, int as_json, char** out, int* valid) {
  return guarded([&] {
    need(out, "out");
    NetDocument doc = parse_or_throw(text, len);
    SurfaceParts parts = to_parts(doc);
    ValidationReport r = validate(parts);
    if (valid) *valid = r.ok() ? 1 : 0;
    *out = dup(as_json ? validation_json(parts, r) : validation_text(parts, r));
  });
}

pf_status pf_unfold(const char* text, size_t len, char** out) {
  return guarded([&] {
    need(out, "out");
    NetDocument doc = parse_or_throw(text, len);
    Surface u = four_copy(to_parts(doc));
    NetDocument res = to_document(u, true);
    res.slopes = doc.slopes;
    *out = dup(serialize_net(res));
  });
}

pf_status pf_trace_csv(const pf_surface* s, const char* slope, size_t edge, const char* y, long max_crossings,
                       const char* max_time, int reverse, char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    Slope sl = resolve_slope(s, slope);
    VerticalCoord start{edge_index(s, edge), arg_expr(y, s->surface.tower(), "start height")};
    StopRule stop;
    if (max_crossings >= 0) stop.max_crossings = max_crossings;
    if (max_time) stop.max_time = arg_rational(max_time, "time");
    if (!stop.max_crossings && !stop.max_time) throw ArgumentError("trace needs a crossing count or a time");
    TraceResult t = trace(s->surface, start, sl, reverse ? Direction::Reverse : Direction::Forward, stop);
    *out = dup(crossings_csv(sl, start, t));
  });
}

pf_status pf_visit_json(const pf_surface* s, const char* slope, size_t edge, const char* lo, const char* hi,
                        char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    Slope sl = resolve_slope(s, slope);
    EdgeInterval I = interval_arg(s, edge, lo, hi);
    *out = dup(visit_json(sl, visit(s, sl, I)));
  });
}

pf_status pf_certificate_json(const pf_surface* s, const char* slope, size_t edge, const char* lo, const char* hi,
                              char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    Slope sl = resolve_slope(s, slope);
    EdgeInterval I = interval_arg(s, edge, lo, hi);
    Mode m = select_mode(s->surface, sl);
    *out = dup(certificate_json(run_cascade(s->surface, I, sl, m), sl));
  });
}

pf_status pf_replay(const pf_surface* s, const char* certificate, char** tau_out) {
  return guarded([&] {
    need(s, "surface");
    need(certificate, "certificate");
    need(tau_out, "out");
    FieldElement alpha;
    VisitCertificate c;
    try {
      c = parse_certificate_json(certificate, s->surface.tower(), &alpha);
    } catch (const std::invalid_argument& e) {
      throw ParseFailure(e.what());
    }
    FieldElement tau = replay(s->surface, Slope(alpha), c);
    *tau_out = dup(to_string(tau));
  });
}

pf_status pf_gaps_csv(const pf_surface* s, const char* slope, size_t edge, size_t start_edge, const char* start_y,
                      const char* horizons, char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    Slope sl = resolve_slope(s, slope);
    std::size_t e = edge_index(s, edge);
    VerticalCoord start = start_point(s, start_edge, start_y);
    std::vector<Rational> hs;
    for (const auto& item : split_list(horizons, "horizons")) hs.push_back(arg_rational(item, "horizon"));
    for (std::size_t i = 0; i < hs.size(); ++i)
      if (sgn(hs[i]) < 0 || (i && hs[i] < hs[i - 1])) throw ArgumentError("horizons must be ascending and >= 0");
    *out = dup(gap_profile_csv(gap_profile(s->surface, sl, start, e, hs)));
  });
}

pf_status pf_passage_csv(const pf_surface* s, const char* slope, size_t edge, size_t start_edge,
                         const char* start_y, const char* targets, long max_events, char** out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    Slope sl = resolve_slope(s, slope);
    std::size_t e = edge_index(s, edge);
    VerticalCoord start = start_point(s, start_edge, start_y);
    if (max_events < 1) throw ArgumentError("event cap must be positive");
    *out = dup(passage_csv(first_passage(s->surface, sl, start, e, arg_longs(targets, "targets"), max_events)));
  });
}

pf_status pf_fit(const char* csv, size_t len, const char* targets, const char* tower, int as_json, char** out) {
  return guarded([&] {
    need(csv, "csv");
    need(out, "out");
    std::optional<TowerSpec> k;
    if (tower) {
      ParseResult r = parse_net(std::string("tower ") + tower);
      if (!r.ok()) throw ArgumentError("bad tower '" + std::string(tower) + "'");
      k = r.doc.tower;
    }
    std::vector<long> ts;
    if (targets) ts = arg_longs(targets, "targets");
    std::optional<std::string> final_mg;
    std::vector<FitInput> rows;
    try {
      rows = fit_rows_from_csv(std::string_view(csv, len), ts, k ? &*k : nullptr, &final_mg);
    } catch (const std::invalid_argument& e) {
      throw ParseFailure(e.what());
    }
    if (rows.empty()) throw ArgumentError("no fit rows; give targets for a gap profile");
    FitReport f = superdensity_fit(rows, final_mg);
    if (as_json) {
      *out = dup(fit_json(f));
      return;
    }
    std::ostringstream o;
    o << "n,T\n";
    for (const auto& r : f.rows) {
      o << r.n << ',';
      if (r.T) o << *r.T;
      o << '\n';
    }
    o << "ratio " << f.ratio << "\n";
    if (f.exponent) o << "exponent " << *f.exponent << "\n";
    o << "verdict " << f.verdict << "\n";
    *out = dup(o.str());
  });
}

pf_status pf_diophantine(const char* preset, long n_max, int as_json, char** out, int* passed) {
  return guarded([&] {
    need(preset, "preset");
    need(out, "out");
    if (n_max < 1) throw ArgumentError("n_max must be positive");
    DiophantineTable t;
    t.preset = preset;
    t.n_max = n_max;
    std::string p = preset;
    if (p == "golden" || p == "sqrt2m1") {
      TowerSpec k = p == "golden" ? TowerSpec::sqrt5() : TowerSpec::sqrt2();
      FieldElement g = FieldElement::generator(k, std::size_t{0});
      FieldElement alpha = p == "golden" ? (g - FieldElement(1)) * FieldElement(Rational(1, 2)) : g - FieldElement(1);
      t.bad_approx = check_bad_approx_bound(alpha, Integer(p == "golden" ? 1 : 2), n_max);
      t.passed = t.bad_approx->passed;
    } else if (p == "octagon") {
      if (n_max > 200) throw ArgumentError("octagon table is exhaustive in three indices; n_max <= 200");
      OctagonLedger L = octagon_constants();
      t.certified = certified_c5(L.alpha, L.beta);
      t.empirical = empirical_c5(L.alpha, L.beta, n_max);
      bool monotone = true;
      for (std::size_t i = 1; i < t.empirical->running_min.size(); ++i)
        monotone = monotone && t.empirical->running_min[i] <= t.empirical->running_min[i - 1];
      t.passed = monotone && t.empirical->exact_min.sign() > 0 && FieldElement(t.certified->c5) <= t.empirical->exact_min;
    } else {
      throw ArgumentError("unknown preset '" + p + "' (golden, sqrt2m1, octagon)");
    }
    if (passed) *passed = t.passed ? 1 : 0;
    *out = dup(as_json ? diophantine_json(t) : diophantine_text(t));
  });
}

}  // extern "C"
