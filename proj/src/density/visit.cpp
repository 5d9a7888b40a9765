// SPDX-License-Identifier: Apache-2.0
#include "polyflow/density.hpp"

#include "polyflow/contfrac.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace polyflow {

const char* reason_name(TerminationReason r) {
  switch (r) {
    case TerminationReason::Claim1Return: return "claim1-return";
    case TerminationReason::Claim2EdgeRepetition: return "claim2-edge-repetition";
    case TerminationReason::Claim3Return: return "claim3-return";
    case TerminationReason::Claim4EdgeRepetition: return "claim4-edge-repetition";
  }
  return "?";
}

const char* phase_end_name(PhaseEnd e) {
  switch (e) {
    case PhaseEnd::Kept: return "kept";
    case PhaseEnd::Collapsed: return "collapsed";
    case PhaseEnd::Return: return "return";
    case PhaseEnd::Repetition: return "repetition";
  }
  return "?";
}

namespace {

struct Rules {
  std::string mode;
  std::function<Integer(const FieldElement&)> window;
  // True when the new forward top length is too short to keep.
  std::function<bool(const FieldElement& next, const FieldElement& prev)> collapse;
  // Lower bound for the i-th reverse top length given x_r.
  std::function<bool(const FieldElement& y, const FieldElement& x_r, long i)> reverse_ok;
  long max_level = 0;  // edge repetition must happen by this index
};

struct ImageEntry {
  long j;
  FieldElement tau;
};

void check_qr(const Surface& s, const EdgeInterval& qr) {
  if (qr.edge >= s.edge_count()) throw std::invalid_argument("edge index out of range");
  if (!(qr.lo < qr.hi)) throw std::invalid_argument("interval length must be positive");
  if (qr.lo.sign() < 0 || qr.hi > s.edge_length(qr.edge)) throw std::invalid_argument("interval outside its edge");
  if (qr.hi == s.edge_length(qr.edge)) throw std::invalid_argument("singular start: R is a vertex");
}

VisitCertificate run_cascade(const Surface& s, const EdgeInterval& qr, const Slope& slope, const Rules& rules) {
  check_qr(s, qr);
  VisitCertificate cert;
  cert.mode = rules.mode;
  cert.qr = qr;
  FieldElement zero(s.tower(), Rational(0));
  cert.tops.push_back({qr, zero, Direction::Forward, 0});

  Direction dir = Direction::Forward;
  std::size_t cur = 0;
  std::size_t reverse_base = 0;  // index of Q^(r)R^(r)
  long total = 0;
  for (;;) {
    const TopInterval start = cert.tops[cur];
    FieldElement x = start.interval.length();
    PhaseRecord rec;
    rec.dir = dir;
    rec.start = cur;
    rec.window = rules.window(x);
    // Images of this phase keyed by lower end, per edge.
    std::map<std::size_t, std::map<FieldElement, ImageEntry>> images;
    images[start.interval.edge].emplace(start.interval.lo, ImageEntry{0, start.tau});
    EdgeInterval I = start.interval;
    FieldElement tau = start.tau;
    for (long k = 1;; ++k) {
      if (Integer(k) > rec.window)
        throw HypothesisViolated("phase from top interval " + std::to_string(cur) + " exceeded " +
                                 to_string(rec.window) + " shifts without a split or a return");
      ShiftOutcome out = shift_interval(s, I, slope, dir);
      tau += out.dtau;
      ++total;
      // The image of R lands inside an earlier image of this phase.
      const EdgeInterval& lead = out.top().image;
      {
        const FieldElement& u = lead.hi;
        auto& bucket = images[lead.edge];
        auto it = bucket.lower_bound(u);
        if (it != bucket.begin()) {
          --it;
          if (it->first > u - x) {
            rec.shifts = k;
            rec.end = PhaseEnd::Return;
            rec.final_split = out.split();
            cert.phases.push_back(rec);
            cert.reason = dir == Direction::Forward ? TerminationReason::Claim1Return : TerminationReason::Claim3Return;
            cert.first = it->second.j;
            cert.second = k;
            cert.tau_star = tau - it->second.tau;
            cert.total_shifts = total;
            return cert;
          }
        }
      }
      if (!out.split()) {
        EdgeInterval img = out.pieces.front().image;
        images[img.edge].emplace(img.lo, ImageEntry{k, tau});
        I = std::move(img);
        continue;
      }
      rec.shifts = k;
      rec.final_split = true;
      EdgeInterval top = out.top().image;
      FieldElement y = top.length();
      if (dir == Direction::Forward) {
        if (rules.collapse(y, x)) {
          rec.end = PhaseEnd::Collapsed;
          cert.phases.push_back(rec);
          dir = Direction::Reverse;
          reverse_base = cur;
          break;  // restart from the same interval backwards
        }
        long level = start.level + 1;
        if (level > rules.max_level)
          throw HypothesisViolated("no edge repetition among " + std::to_string(rules.max_level) + " top intervals");
        cert.tops.push_back({top, tau, Direction::Forward, level});
      } else {
        long level = start.dir == Direction::Reverse && cur != reverse_base ? start.level + 1 : 1;
        if (level > rules.max_level)
          throw HypothesisViolated("no edge repetition among " + std::to_string(rules.max_level) +
                                   " reverse top intervals");
        if (!rules.reverse_ok(y, cert.tops[reverse_base].interval.length(), level))
          throw HypothesisViolated("reverse top interval " + std::to_string(level) + " shorter than its lower bound");
        cert.tops.push_back({top, tau, Direction::Reverse, level});
      }
      std::size_t idx = cert.tops.size() - 1;
      // Edge repetition among the top intervals of this direction (level >= 1).
      for (std::size_t j = 0; j < idx; ++j) {
        const TopInterval& t = cert.tops[j];
        if (t.level < 1 || t.dir != dir) continue;
        if (dir == Direction::Reverse && j <= reverse_base) continue;
        if (t.interval.edge != top.edge) continue;
        rec.end = PhaseEnd::Repetition;
        cert.phases.push_back(rec);
        cert.reason =
            dir == Direction::Forward ? TerminationReason::Claim2EdgeRepetition : TerminationReason::Claim4EdgeRepetition;
        cert.first = static_cast<long>(j);
        cert.second = static_cast<long>(idx);
        cert.tau_star = tau - t.tau;
        cert.total_shifts = total;
        return cert;
      }
      rec.end = PhaseEnd::Kept;
      cert.phases.push_back(rec);
      cur = idx;
      break;
    }
  }
}

void check_digit_bound(const Slope& slope, long A) {
  auto bound = periodic_digit_bound(slope.alpha());
  if (bound && *bound > A)
    throw std::invalid_argument("slope has continued fraction digit " + to_string(*bound) + " above A = " +
                                std::to_string(A));
}

}  // namespace

VisitCertificate cascade_search(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const ConstantsLedger& ledger) {
  if (!s.is_polysquare()) throw std::invalid_argument("polysquare cascade needs unit square faces");
  if (static_cast<long>(s.face_count()) != ledger.s)
    throw std::invalid_argument("ledger s differs from the number of squares");
  check_digit_bound(slope, ledger.A);
  Rules rules;
  rules.mode = "polysquare";
  rules.window = [&](const FieldElement& x) { return ledger.window(x); };
  rules.collapse = [&](const FieldElement& next, const FieldElement& prev) {
    return next < prev * FieldElement(ledger.c1);
  };
  rules.reverse_ok = [&](const FieldElement& y, const FieldElement& x_r, long i) {
    if (i >= static_cast<long>(ledger.delta.size())) return false;
    return !(y < x_r * FieldElement(ledger.delta[static_cast<std::size_t>(i)]));
  };
  rules.max_level = ledger.s + 1;
  return run_cascade(s, qr, slope, rules);
}

namespace {

// Decides a < b from base-10 logarithms whose gap is far beyond rounding.
bool log_less(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  if (std::fabs(a - b) <= 1e-9 * scale) throw std::runtime_error("undecidable comparison of huge constants");
  return a < b;
}

}  // namespace

VisitCertificate cascade_search(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const OctagonLedger& ledger) {
  if (!(slope.alpha().lift_to(ledger.alpha.tower()) == ledger.alpha))
    throw std::invalid_argument("octagon ledger is for slope cbrt(3)/2");
  if (!(qr.length() < FieldElement(Rational(1, 2)))) throw std::invalid_argument("interval length must be below 1/2");
  Rules rules;
  rules.mode = "octagon";
  rules.window = [&](const FieldElement& x) { return ledger.window(x); };
  double e16 = std::pow(10.0, ledger.log10_c10_exponent);
  rules.collapse = [&, e16](const FieldElement& next, const FieldElement& prev) {
    return log_less(log10_of(next), ledger.log10_c10 + e16 * log10_of(prev));
  };
  double lc = ledger.log10_c5 - std::log10(60.0);
  rules.reverse_ok = [lc](const FieldElement& y, const FieldElement& x_r, long i) {
    double rhs = std::pow(6.0, 2.0 * i) * lc + std::pow(5.0, 2.0 * i) * log10_of(x_r);
    return !log_less(log10_of(y), rhs);
  };
  rules.max_level = static_cast<long>(s.edge_count()) + 1;
  return run_cascade(s, qr, slope, rules);
}

FieldElement replay(const Surface& s, const Slope& slope, const VisitCertificate& cert) {
  auto mismatch = [](const std::string& what) { return std::runtime_error("replay mismatch: " + what); };
  if (cert.tops.empty() || cert.phases.empty()) throw mismatch("empty certificate");
  std::vector<TopInterval> tops{{cert.qr, FieldElement(s.tower(), Rational(0)), Direction::Forward, 0}};
  for (std::size_t p = 0; p < cert.phases.size(); ++p) {
    const PhaseRecord& rec = cert.phases[p];
    if (rec.start >= tops.size()) throw mismatch("phase " + std::to_string(p) + " starts from an unknown interval");
    EdgeInterval I = tops[rec.start].interval;
    FieldElement tau = tops[rec.start].tau;
    std::vector<std::pair<EdgeInterval, FieldElement>> seen{{I, tau}};
    bool last = p + 1 == cert.phases.size();
    for (long k = 1; k <= rec.shifts; ++k) {
      ShiftOutcome out = shift_interval(s, I, slope, rec.dir);
      tau += out.dtau;
      bool final = k == rec.shifts;
      bool expect_split = final && rec.final_split;
      if (out.split() != expect_split) throw mismatch("split pattern differs in phase " + std::to_string(p));
      if (!out.split()) {
        I = out.pieces.front().image;
        seen.emplace_back(I, tau);
        continue;
      }
      if (rec.end == PhaseEnd::Return) {
        seen.emplace_back(out.top().image, tau);
        break;
      }
      if (rec.end == PhaseEnd::Collapsed) break;
      const EdgeInterval& top = out.top().image;
      std::size_t idx = tops.size();
      if (idx >= cert.tops.size()) throw mismatch("more top intervals than recorded");
      const TopInterval& want = cert.tops[idx];
      if (want.interval.edge != top.edge || !(want.interval.lo == top.lo) || !(want.interval.hi == top.hi) ||
          !(want.tau == tau))
        throw mismatch("top interval " + std::to_string(idx) + " differs");
      tops.push_back({top, tau, rec.dir, want.level});
    }
    if (!last) continue;
    if (rec.end == PhaseEnd::Return) {
      if (cert.first < 0 || cert.second != rec.shifts || cert.first >= cert.second)
        throw mismatch("return indices");
      const auto& a = seen[static_cast<std::size_t>(cert.first)];
      const auto& b = seen.back();
      VerticalCoord u{b.first.edge, b.first.hi};
      if (!a.first.contains(u)) throw mismatch("returned endpoint is not inside the earlier image");
      return b.second - a.second;
    }
    if (rec.end == PhaseEnd::Repetition) {
      auto i1 = static_cast<std::size_t>(cert.first), i2 = static_cast<std::size_t>(cert.second);
      if (i2 != tops.size() - 1 || i1 >= i2) throw mismatch("repetition indices");
      if (tops[i1].interval.edge != tops[i2].interval.edge) throw mismatch("repeated edges differ");
      return tops[i2].tau - tops[i1].tau;
    }
    throw mismatch("certificate does not end with a return or a repetition");
  }
  throw mismatch("unreachable");
}

VerticalCoord locate(const Surface& s, const VerticalCoord& start, const Slope& slope, const FieldElement& tau) {
  Direction dir = tau.sign() >= 0 ? Direction::Forward : Direction::Reverse;
  VerticalCoord at = start;
  FieldElement t(s.tower(), Rational(0));
  while (!(t == tau)) {
    PointShift step = shift_point(s, at, slope, dir);
    t += step.dtau;
    at = std::move(step.at);
    if (dir == Direction::Forward ? t > tau : t < tau)
      throw std::invalid_argument("displacement " + to_string(tau) + " is not a crossing time");
  }
  return at;
}

OracleVisit find_visit_oracle(const Surface& s, const EdgeInterval& qr, const Slope& slope, const Rational& t_cap) {
  check_qr(s, qr);
  SegmentGrower grow(s, {qr.edge, qr.hi}, slope);
  OracleVisit out;
  for (;;) {
    auto r = grow.peek_radius();
    if (!r) throw std::runtime_error("cap exceeded: both directions met a vertex");
    if (!slope.within(*r, t_cap)) throw std::runtime_error("cap exceeded: no visit within t = " + to_string(t_cap));
    SegmentGrower::Event ev = grow.next();
    ++out.crossings;
    if (qr.contains(ev.at)) {
      out.tau = std::move(ev.tau);
      out.at = std::move(ev.at);
      return out;
    }
  }
}

bool within_visit_bound(const ConstantsLedger& ledger, const Slope& slope, const FieldElement& tau,
                        const FieldElement& x) {
  FieldElement lhs = tau * tau * (slope.alpha() * slope.alpha() + FieldElement(1)) * x * x;
  Rational c0(ledger.c0);
  return lhs <= FieldElement(c0 * c0);
}

namespace {

EndpointCheck measure(const Surface& s, const EdgeInterval& qr, const Slope& slope, const FieldElement& tau_star) {
  if (!(qr.lo < qr.hi)) throw std::invalid_argument("interval length must be positive");
  VerticalCoord p = locate(s, {qr.edge, qr.hi}, slope, tau_star);
  EndpointCheck c;
  c.inside = qr.contains(p);
  c.above_q = p.y - qr.lo;
  c.below_r = qr.hi - p.y;
  return c;
}

}  // namespace

EndpointCheck endpoint_distance(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const FieldElement& tau_star, const ConstantsLedger& ledger) {
  EndpointCheck c = measure(s, qr, slope, tau_star);
  if (!c.inside) return c;
  FieldElement need = qr.length() * FieldElement(ledger.c2);
  c.ok = !(c.above_q < need) && !(c.below_r < need);
  return c;
}

EndpointCheck endpoint_distance(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const FieldElement& tau_star, const OctagonLedger& ledger) {
  EndpointCheck c = measure(s, qr, slope, tau_star);
  if (!c.inside) return c;
  double need = ledger.log10_c11 + std::pow(10.0, ledger.log10_c12) * log10_of(qr.length());
  c.ok = !log_less(log10_of(c.above_q), need) && !log_less(log10_of(c.below_r), need);
  return c;
}

}  // namespace polyflow
