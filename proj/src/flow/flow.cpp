// SPDX-License-Identifier: Apache-2.0
#include "polyflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace polyflow {

Slope::Slope(FieldElement alpha) : alpha_(std::move(alpha)) {
  if (alpha_.sign() <= 0 || !(alpha_ < FieldElement(1))) throw std::invalid_argument("slope must satisfy 0 < alpha < 1");
  one_plus_alpha2_ = alpha_ * alpha_ + FieldElement(1);
  double a = alpha_.to_double();
  speed_ = std::sqrt(1.0 + a * a);
}

bool Slope::within(const FieldElement& tau, const Rational& T) const {
  if (sgn(T) < 0) return false;
  FieldElement lhs = tau * tau * one_plus_alpha2_;
  return lhs <= FieldElement(T * T);
}

SingularHit::SingularHit(std::size_t vertex, bool cone_point, FieldElement dtau, std::size_t face)
    : std::runtime_error("singular hit: trajectory meets vertex " + std::to_string(vertex + 1) +
                         (cone_point ? " (cone point)" : " (regular corner)") + " at horizontal displacement " +
                         to_string(dtau) + " in face index " + std::to_string(face)),
      vertex_(vertex),
      cone_(cone_point),
      dtau_(std::move(dtau)) {}

namespace {

void check_tower(const Surface& s, const Slope& slope) {
  const auto& t = slope.alpha().tower();
  if (t.degree() != 1 && t != s.tower()) throw std::invalid_argument("slope and surface use different towers");
}

bool is_one(const FieldElement& x) { return x.is_rational() && x.coords()[0] == 1; }

void count_width(Counters& c, const FieldElement& w, long sgn_dir) {
  (is_one(w) ? c.n1 : c.n2) += sgn_dir;
}

void count_height(Counters& c, const FieldElement& h, long sgn_dir) {
  (is_one(h) ? c.n4 : c.n3) += sgn_dir;
}

void check_start(const Surface& s, const VerticalCoord& p) {
  if (p.edge >= s.edge_count()) throw std::invalid_argument("edge index out of range");
  int lo = p.y.sign();
  int hi = (p.y - s.edge_length(p.edge)).sign();
  if (lo < 0 || hi > 0) throw std::invalid_argument("start height outside its vertical edge");
  if (lo == 0 || hi == 0) {
    std::size_t v = lo == 0 ? s.edge_bottom_vertex(p.edge) : s.edge_top_vertex(p.edge);
    throw std::invalid_argument("singular start: w" + std::to_string(p.edge + 1) + "(" + to_string(p.y) +
                                ") is vertex " + std::to_string(v + 1));
  }
}

bool cone(const Surface& s, std::size_t v) { return s.vertices()[v].singular(); }

}  // namespace

PointShift shift_point(const Surface& s, const VerticalCoord& p, const Slope& slope, Direction dir) {
  check_tower(s, slope);
  check_start(s, p);
  PointShift out;
  if (dir == Direction::Forward) {
    std::size_t cur = p.edge;
    const FieldElement& w = s.face(cur).width;
    out.dtau = w;
    out.rise = w * slope.alpha();
    count_width(out.delta, w, 1);
    FieldElement z = p.y + out.rise;
    out.drop = FieldElement(s.tower(), Rational(0));
    for (;;) {
      const FieldElement& h = s.face(cur).height;
      int c = (z - h).sign();
      if (c < 0) break;
      if (c == 0) {
        std::size_t v = s.vertex_of(cur, Corner::TopRight);
        throw SingularHit(v, cone(s, v), w, cur);
      }
      z -= h;
      out.drop += h;
      count_height(out.delta, h, 1);
      cur = s.top_of(cur);
    }
    out.at = {s.right_of(cur), std::move(z)};
  } else {
    std::size_t cur = s.left_of(p.edge);
    const FieldElement& w = s.face(cur).width;
    out.dtau = -w;
    out.rise = -(w * slope.alpha());
    count_width(out.delta, w, -1);
    FieldElement z = p.y + out.rise;
    out.drop = FieldElement(s.tower(), Rational(0));
    for (;;) {
      int c = z.sign();
      if (c > 0) break;
      if (c == 0) {
        std::size_t v = s.vertex_of(cur, Corner::BottomLeft);
        throw SingularHit(v, cone(s, v), out.dtau, cur);
      }
      cur = s.bottom_of(cur);
      const FieldElement& h = s.face(cur).height;
      z += h;
      out.drop -= h;
      count_height(out.delta, h, -1);
    }
    out.at = {cur, std::move(z)};
  }
  return out;
}

ShiftOutcome shift_interval(const Surface& s, const EdgeInterval& I, const Slope& slope, Direction dir) {
  check_tower(s, slope);
  if (I.edge >= s.edge_count()) throw std::invalid_argument("edge index out of range");
  if (I.lo.sign() < 0 || !(I.lo < I.hi) || I.hi > s.edge_length(I.edge))
    throw std::invalid_argument("interval must satisfy 0 <= lo < hi <= edge length");
  ShiftOutcome out;
  FieldElement zero(s.tower(), Rational(0));
  if (dir == Direction::Forward) {
    std::size_t cur = I.edge;
    const FieldElement& w = s.face(cur).width;
    out.dtau = w;
    out.rise = w * slope.alpha();
    Counters delta;
    count_width(delta, w, 1);
    FieldElement base = zero;  // total height below the current face
    FieldElement start = I.lo;
    for (;;) {
      const FieldElement& h = s.face(cur).height;
      FieldElement level = base + h;
      FieldElement brk = level - out.rise;  // source height reaching the corner
      std::size_t dest = s.right_of(cur);
      if (!(brk < I.hi)) {
        out.pieces.push_back({{I.edge, start, I.hi}, {dest, start + out.rise - base, I.hi + out.rise - base}, delta, base});
        break;
      }
      if (start < brk) {
        out.pieces.push_back({{I.edge, start, brk}, {dest, start + out.rise - base, h}, delta, base});
        out.breaks.push_back({brk, s.vertex_of(cur, Corner::TopRight)});
        start = brk;
      }
      base = level;
      count_height(delta, h, 1);
      cur = s.top_of(cur);
    }
  } else {
    std::size_t cur = s.left_of(I.edge);
    const FieldElement& w = s.face(cur).width;
    out.dtau = -w;
    out.rise = -(w * slope.alpha());
    Counters delta;
    count_width(delta, w, -1);
    FieldElement lift = zero;  // total height of faces entered from above
    FieldElement end = I.hi;
    for (;;) {
      // Source height y lands at y + rise + lift in face cur; the corner is
      // reached when that is 0.
      FieldElement brk = -(out.rise + lift);
      if (!(I.lo < brk)) {
        out.pieces.push_back({{I.edge, I.lo, end}, {cur, I.lo + out.rise + lift, end + out.rise + lift}, delta, -lift});
        break;
      }
      if (brk < end) {
        out.pieces.push_back({{I.edge, brk, end}, {cur, zero, end + out.rise + lift}, delta, -lift});
        out.breaks.push_back({brk, s.vertex_of(cur, Corner::BottomLeft)});
        end = brk;
      }
      cur = s.bottom_of(cur);
      const FieldElement& h = s.face(cur).height;
      lift += h;
      count_height(delta, h, -1);
    }
    std::reverse(out.pieces.begin(), out.pieces.end());
    std::reverse(out.breaks.begin(), out.breaks.end());
  }
  return out;
}

TraceResult trace(const Surface& s, const VerticalCoord& start, const Slope& slope, Direction dir,
                  const StopRule& stop) {
  check_tower(s, slope);
  check_start(s, start);
  if (!stop.max_crossings && !stop.max_time) throw std::invalid_argument("trace needs a stop rule");
  TraceResult out;
  Crossing cur;
  cur.at = start;
  cur.tau = FieldElement(s.tower(), Rational(0));
  cur.rise = cur.tau;
  cur.drop = cur.tau;
  for (long k = 1;; ++k) {
    if (stop.max_crossings && k > *stop.max_crossings) break;
    PointShift step;
    try {
      step = shift_point(s, cur.at, slope, dir);
    } catch (const SingularHit& hit) {
      FieldElement tau_hit = cur.tau + hit.dtau();
      if (!stop.max_time || slope.within(tau_hit, *stop.max_time)) {
        out.truncated = true;
        out.reason = hit.what();
        out.vertex = hit.vertex();
      }
      break;
    }
    Crossing next;
    next.index = k;
    next.tau = cur.tau + step.dtau;
    if (stop.max_time && !slope.within(next.tau, *stop.max_time)) break;
    next.at = std::move(step.at);
    next.n = cur.n;
    next.n += step.delta;
    next.rise = cur.rise + step.rise;
    next.drop = cur.drop + step.drop;
    out.crossings.push_back(next);
    cur = std::move(next);
  }
  return out;
}

std::vector<ReturnPiece> first_return_map(const Surface& s, const Slope& slope) {
  std::vector<ReturnPiece> out;
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    auto res = shift_interval(s, {e, FieldElement(s.tower(), Rational(0)), s.edge_length(e)}, slope, Direction::Forward);
    for (auto& p : res.pieces) out.push_back({std::move(p.source), std::move(p.image)});
  }
  return out;
}

}  // namespace polyflow
