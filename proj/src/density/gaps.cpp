// SPDX-License-Identifier: Apache-2.0
#include "polyflow/density.hpp"

#include <algorithm>
#include <cmath>

namespace polyflow {

GapTracker::GapTracker(FieldElement length) : length_(std::move(length)) {
  if (length_.sign() <= 0) throw std::invalid_argument("edge length must be positive");
  gaps_.insert(length_);
}

bool GapTracker::insert(const FieldElement& y) {
  if (y.sign() <= 0 || !(y < length_)) return false;
  auto [it, fresh] = heights_.insert(y);
  if (!fresh) return false;
  FieldElement lo = it == heights_.begin() ? FieldElement(length_.tower(), Rational(0)) : *std::prev(it);
  auto nx = std::next(it);
  FieldElement hi = nx == heights_.end() ? length_ : *nx;
  gaps_.erase(gaps_.find(hi - lo));
  gaps_.insert(y - lo);
  gaps_.insert(hi - y);
  return true;
}

const FieldElement& GapTracker::max_gap() const { return *gaps_.rbegin(); }

FieldElement max_gap(const std::vector<FieldElement>& heights, const FieldElement& length) {
  GapTracker g(length);
  for (const auto& y : heights) g.insert(y);
  return g.max_gap();
}

FieldElement max_gap(const std::vector<Crossing>& crossings, std::size_t edge, const FieldElement& length) {
  GapTracker g(length);
  for (const auto& c : crossings)
    if (c.at.edge == edge) g.insert(c.at.y);
  return g.max_gap();
}

SegmentGrower::SegmentGrower(const Surface& s, const VerticalCoord& start, const Slope& slope)
    : surface_(&s), slope_(&slope) {
  FieldElement zero(s.tower(), Rational(0));
  fwd_ = {Direction::Forward, start, zero, std::nullopt, std::nullopt};
  rev_ = {Direction::Reverse, start, zero, std::nullopt, std::nullopt};
  prepare(fwd_);
  prepare(rev_);
}

void SegmentGrower::prepare(Side& side) {
  if (side.hit || side.pending) return;
  try {
    side.pending = shift_point(*surface_, side.at, *slope_, side.dir);
  } catch (const SingularHit& h) {
    side.hit = abs(side.tau + h.dtau());
  }
}

std::optional<FieldElement> SegmentGrower::peek_radius() const {
  std::optional<FieldElement> best;
  for (const Side* side : {&fwd_, &rev_}) {
    if (!side->pending) continue;
    FieldElement r = abs(side->tau + side->pending->dtau);
    if (!best || r < *best) best = std::move(r);
  }
  return best;
}

SegmentGrower::Event SegmentGrower::next() {
  Side* pick = nullptr;
  if (fwd_.pending) pick = &fwd_;
  if (rev_.pending) {
    if (!pick || abs(rev_.tau + rev_.pending->dtau) < abs(fwd_.tau + fwd_.pending->dtau)) pick = &rev_;
  }
  if (!pick) throw std::logic_error("segment cannot grow: both directions met a vertex");
  pick->tau += pick->pending->dtau;
  pick->at = std::move(pick->pending->at);
  pick->pending.reset();
  Event ev{pick->tau, pick->at};
  prepare(*pick);
  ++count_;
  return ev;
}

bool SegmentGrower::truncated_within(const Rational& T) const {
  for (const Side* side : {&fwd_, &rev_})
    if (side->hit && slope_->within(*side->hit, T)) return true;
  return false;
}

namespace {

void check_edge(const Surface& s, std::size_t edge) {
  if (edge >= s.edge_count()) throw std::invalid_argument("edge index out of range");
}

}  // namespace

GapProfile gap_profile(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                       const std::vector<Rational>& horizons) {
  check_edge(s, edge);
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (sgn(horizons[i]) < 0) throw std::invalid_argument("horizons must be non-negative");
    if (i && horizons[i] < horizons[i - 1]) throw std::invalid_argument("horizons must be ascending");
  }
  SegmentGrower grow(s, start, slope);
  GapTracker gaps(s.edge_length(edge));
  if (start.edge == edge) gaps.insert(start.y);
  GapProfile out;
  out.edge = edge;
  for (const auto& T : horizons) {
    for (;;) {
      auto r = grow.peek_radius();
      if (!r || !slope.within(*r, T)) break;
      auto ev = grow.next();
      if (ev.at.edge == edge) gaps.insert(ev.at.y);
    }
    out.rows.push_back({T, gaps.max_gap(), static_cast<long>(gaps.count()), grow.truncated_within(T)});
  }
  return out;
}

std::vector<PassageRow> first_passage(const Surface& s, const Slope& slope, const VerticalCoord& start,
                                      std::size_t edge, const std::vector<long>& targets, long max_events) {
  check_edge(s, edge);
  std::vector<long> order = targets;
  for (long n : order)
    if (n < 1) throw std::invalid_argument("targets must be positive");
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  SegmentGrower grow(s, start, slope);
  GapTracker gaps(s.edge_length(edge));
  FieldElement radius(s.tower(), Rational(0));
  if (start.edge == edge) gaps.insert(start.y);
  std::vector<PassageRow> rows;
  std::size_t next = 0;
  auto settle = [&] {
    while (next < order.size() && gaps.max_gap() <= FieldElement(Rational(1, order[next]))) {
      PassageRow row;
      row.n = order[next];
      row.reached = true;
      row.radius = radius;
      row.T = radius.to_double() * slope.speed();
      row.N = static_cast<long>(gaps.count());
      row.mg = gaps.max_gap();
      rows.push_back(std::move(row));
      ++next;
    }
  };
  settle();
  while (next < order.size() && grow.count() < max_events && grow.peek_radius()) {
    auto ev = grow.next();
    if (ev.at.edge != edge) continue;
    if (!gaps.insert(ev.at.y)) continue;
    radius = abs(ev.tau);
    settle();
  }
  for (; next < order.size(); ++next) {
    PassageRow row;
    row.n = order[next];
    row.radius = radius;
    row.N = static_cast<long>(gaps.count());
    row.mg = gaps.max_gap();
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr long kStepEventCap = 20000000;

GapStepCheck gap_step(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                      const Rational& T, const Rational& C, const Rational& factor) {
  check_edge(s, edge);
  if (sgn(T) < 0) throw std::invalid_argument("horizon must be non-negative");
  SegmentGrower grow(s, start, slope);
  GapTracker gaps(s.edge_length(edge));
  if (start.edge == edge) gaps.insert(start.y);
  for (;;) {
    auto r = grow.peek_radius();
    if (!r || !slope.within(*r, T)) break;
    auto ev = grow.next();
    if (ev.at.edge == edge) gaps.insert(ev.at.y);
  }
  GapStepCheck out;
  out.T = T;
  out.x = gaps.max_gap();
  out.target = out.x * FieldElement(factor);
  FieldElement allowed = FieldElement(T) + FieldElement(C) / out.x;
  out.allowed = allowed.to_double();
  FieldElement a2 = allowed * allowed;
  FieldElement speed2 = slope.alpha() * slope.alpha() + FieldElement(1);
  FieldElement reached(s.tower(), Rational(0));
  bool within_T = true;
  while (gaps.max_gap() > out.target) {
    auto r = grow.peek_radius();
    if (!r || grow.count() >= kStepEventCap) return out;
    if (*r * *r * speed2 > a2) return out;
    auto ev = grow.next();
    within_T = false;
    if (ev.at.edge == edge && gaps.insert(ev.at.y)) reached = abs(ev.tau);
  }
  out.reached_at = within_T ? to_double(T) : reached.to_double() * slope.speed();
  out.ok = true;
  return out;
}

}  // namespace

GapStepCheck check_gap_step(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                            const Rational& T, const ConstantsLedger& ledger) {
  return gap_step(s, slope, start, edge, T, Rational(ledger.c0), 1 - ledger.c2);
}

GapStepCheck check_gap_halving(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                               const Rational& T, const ConstantsLedger& ledger) {
  return gap_step(s, slope, start, edge, T, ledger.c3, Rational(1, 2));
}

FitReport superdensity_fit(const std::vector<FitInput>& rows, std::optional<std::string> final_mg, double linear_factor,
                           double exponent_cap) {
  FitReport rep;
  rep.rows = rows;
  rep.complete = !rows.empty();
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    if (!r.T) {
      rep.complete = false;
      continue;
    }
    if (*r.T <= 0 || r.n < 1) continue;
    rep.c1.push_back(*r.T / static_cast<double>(r.n));
    lx.push_back(std::log(static_cast<double>(r.n)));
    ly.push_back(std::log(*r.T));
  }
  if (!rep.c1.empty()) {
    auto [lo, hi] = std::minmax_element(rep.c1.begin(), rep.c1.end());
    rep.ratio = *hi / *lo;
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0) rep.exponent = sxy / sxx;
  }
  if (!rep.complete) {
    rep.verdict = final_mg ? "not dense below " + *final_mg : "partial";
  } else if (!rep.c1.empty() && rep.ratio <= linear_factor) {
    rep.verdict = "consistent with linear";
  } else if (rep.exponent && *rep.exponent <= exponent_cap) {
    rep.verdict = "polynomial";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

SquareVisit aligned_square_visit(const Surface& s, const Slope& slope, const VerticalCoord& start,
                                 const AlignedSquare& sq, const StopRule& horizon) {
  if (sq.face >= s.face_count()) throw std::invalid_argument("face index out of range");
  if (sgn(sq.side) <= 0) throw std::invalid_argument("square side must be positive");
  const Face& f = s.face(sq.face);
  FieldElement side(sq.side);
  if (sq.x0.sign() < 0 || sq.y0.sign() < 0 || sq.x0 + side > f.width || sq.y0 + side > f.height)
    throw std::invalid_argument("square must lie inside its face");
  if (!horizon.max_crossings && !horizon.max_time) throw std::invalid_argument("square search needs a horizon");
  // Surfaces the start-point checks.
  try {
    (void)shift_point(s, start, slope, Direction::Forward);
  } catch (const SingularHit&) {
  }

  const FieldElement& a = slope.alpha();
  SquareVisit out;
  VerticalCoord at = start;
  FieldElement tau(s.tower(), Rational(0));
  for (long k = 0;; ++k) {
    if (horizon.max_crossings && k > *horizon.max_crossings) {
      out.note = "horizon exceeded after " + std::to_string(k) + " crossings";
      return out;
    }
    if (horizon.max_time && !slope.within(tau, *horizon.max_time)) {
      out.note = "horizon exceeded: t > " + to_string(*horizon.max_time);
      return out;
    }
    out.crossings = k;
    std::size_t cur = at.edge;
    const FieldElement& W = s.face(cur).width;
    FieldElement top = at.y + a * W;
    FieldElement base(s.tower(), Rational(0));
    while (base <= top) {
      if (cur == sq.face) {
        FieldElement lo = base + sq.y0, hi = lo + side;
        FieldElement xe = sq.x0;
        if (at.y + a * sq.x0 < lo) xe = (lo - at.y) / a;
        if (xe <= sq.x0 + side && at.y + a * xe <= hi) {
          FieldElement tv = tau + xe;
          if (horizon.max_time && !slope.within(tv, *horizon.max_time)) {
            out.note = "horizon exceeded: t > " + to_string(*horizon.max_time);
            return out;
          }
          out.found = true;
          out.tau = tv;
          out.t = slope.time_decimal(tv);
          out.x = xe;
          out.y = at.y + a * xe - base;
          return out;
        }
      }
      base += s.face(cur).height;
      cur = s.top_of(cur);
    }
    try {
      PointShift step = shift_point(s, at, slope, Direction::Forward);
      tau += step.dtau;
      at = std::move(step.at);
    } catch (const SingularHit& h) {
      out.note = h.what();
      return out;
    }
  }
}

}  // namespace polyflow
