// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/surface.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyflow {

enum class Direction { Forward, Reverse };

/// Flow direction (1, alpha) with 0 < alpha < 1.
///
/// Arc-length time is t = tau * sqrt(1 + alpha^2), where tau is the signed
/// horizontal displacement. tau is exact; the factor sqrt(1 + alpha^2) is
/// usually outside the tower, so times are carried as tau and compared
/// through squares.
class Slope {
 public:
  explicit Slope(FieldElement alpha);
  const FieldElement& alpha() const { return alpha_; }
  /// sqrt(1 + alpha^2) as a double (display only).
  double speed() const { return speed_; }
  /// True when |tau| * sqrt(1 + alpha^2) <= T (exact).
  bool within(const FieldElement& tau, const Rational& T) const;
  /// Smallest arc-length time as a double.
  double time_decimal(const FieldElement& tau) const { return tau.to_double() * speed_; }

 private:
  FieldElement alpha_;
  FieldElement one_plus_alpha2_;
  double speed_ = 1.0;
};

/// Point w_edge(y) on a vertical edge.
struct VerticalCoord {
  std::size_t edge = 0;
  FieldElement y;
};

/// Width and height classes crossed: n1 (unit widths), n2 (other widths),
/// n3 (other heights), n4 (unit heights); negative for reverse travel.
struct Counters {
  long n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  Counters& operator+=(const Counters& o) {
    n1 += o.n1;
    n2 += o.n2;
    n3 += o.n3;
    n4 += o.n4;
    return *this;
  }
  bool operator==(const Counters&) const = default;
};

/// Open interval (lo, hi) on a vertical edge.
struct EdgeInterval {
  std::size_t edge = 0;
  FieldElement lo;
  FieldElement hi;
  FieldElement length() const { return hi - lo; }
  bool contains(const VerticalCoord& p) const { return p.edge == edge && lo < p.y && p.y < hi; }
};

/// Raised when a trajectory meets a vertex (a glued rectangle corner).
class SingularHit : public std::runtime_error {
 public:
  SingularHit(std::size_t vertex, bool cone_point, FieldElement dtau, std::size_t face);
  std::size_t vertex() const { return vertex_; }
  bool cone_point() const { return cone_; }
  /// Horizontal displacement from the shift's start to the vertex.
  const FieldElement& dtau() const { return dtau_; }

 private:
  std::size_t vertex_;
  bool cone_;
  FieldElement dtau_;
};

struct PointShift {
  VerticalCoord at;
  FieldElement dtau;    // signed horizontal displacement
  Counters delta;
  FieldElement rise;    // signed vertical travel alpha * dtau
  FieldElement drop;    // signed total height of horizontal edges crossed
};

/// Throws std::invalid_argument("singular start ...") when p is a vertex or
/// off the edge, SingularHit when the shift meets a vertex.
PointShift shift_point(const Surface& s, const VerticalCoord& p, const Slope& slope, Direction dir);

struct ShiftPiece {
  EdgeInterval source;
  EdgeInterval image;
  Counters delta;
  FieldElement drop;
};

struct BreakPoint {
  FieldElement y;       // source height whose trajectory meets the vertex
  std::size_t vertex;
};

/// Pieces in increasing source order; one piece means no split.
struct ShiftOutcome {
  std::vector<ShiftPiece> pieces;
  std::vector<BreakPoint> breaks;
  FieldElement dtau;
  FieldElement rise;

  bool split() const { return pieces.size() > 1; }
  /// The piece containing the upper end of the source.
  const ShiftPiece& top() const { return pieces.back(); }
  const ShiftPiece& bottom() const { return pieces.front(); }
};

ShiftOutcome shift_interval(const Surface& s, const EdgeInterval& I, const Slope& slope, Direction dir);

struct Crossing {
  long index = 0;
  FieldElement tau;     // cumulative signed horizontal displacement
  VerticalCoord at;
  Counters n;
  FieldElement rise;    // cumulative
  FieldElement drop;    // cumulative; y - y0 = rise - drop
};

struct StopRule {
  std::optional<long> max_crossings;
  std::optional<Rational> max_time;  // arc-length horizon
};

struct TraceResult {
  std::vector<Crossing> crossings;
  bool truncated = false;           // stopped by a vertex
  std::string reason;
  std::optional<std::size_t> vertex;
};

/// Crossings after the start (index 1, 2, ...) until a stop rule fires or a
/// vertex truncates the trace. Throws std::invalid_argument for a vertex or
/// off-edge start.
TraceResult trace(const Surface& s, const VerticalCoord& start, const Slope& slope, Direction dir,
                  const StopRule& stop);

struct ReturnPiece {
  EdgeInterval source;
  EdgeInterval image;
};

/// Maximal subintervals of every vertical edge with constant one-shift
/// itinerary, with their images.
std::vector<ReturnPiece> first_return_map(const Surface& s, const Slope& slope);

}  // namespace polyflow
