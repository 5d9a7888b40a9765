// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/flow.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyflow {

/// Visiting-time constants for a polysquare surface with s squares and a
/// slope whose continued fraction digits are bounded by A.
struct ConstantsLedger {
  long A = 1;
  long s = 1;
  Rational c1;                  // 1 / (36 s^2 (A+2)^2)^(s+1)
  std::vector<Rational> delta;  // delta[i] = 1 / (36 s^2 (A+2)^2)^i, i = 0..s+1
  // Both admissible lower limits for c0 are sqrt(2) times these rationals.
  Rational forward_sum;         // sum_i 9 s^2 (A+2) / c1^i
  Rational reverse_sum;         // sum_i 9 s^2 (A+2) (36 s^2 (A+2)^2)^i / c1^s
  Integer c0;                   // ceil(sqrt(2) * max(forward_sum, reverse_sum))
  Rational c2;                  // 1 / ((A+2) c0)
  Rational c3;                  // 2 (A+2) c0^2

  /// floor(9 s^2 (A+2) / x) + 1 shifts.
  Integer window(const FieldElement& x) const;
};

ConstantsLedger constants(long A, long s);

/// Constants for the octagon surface with slope cbrt(3)/2. The large ones
/// are kept as base-10 logarithms; exponents too.
struct OctagonLedger {
  FieldElement alpha;           // cbrt(3)/2 in Q(sqrt2, cbrt3)
  FieldElement beta;            // sqrt(2)
  Rational c5;                  // certified, 0 < c5 < 1
  Integer c4;
  unsigned norm_exponent = 5;   // degree - 1
  double log10_c5 = 0;
  double log10_c10 = 0;         // 6^16 log10(c5 / 60)
  double log10_c10_exponent = 0;  // log10(5^16)
  double log10_c8 = 0;
  double log10_c9 = 0;          // log10(5^127)
  double log10_c11 = 0;         // c5 / c8^5
  double log10_c12 = 0;         // log10(5 c9)
  double log10_c13 = 0;
  double log10_c14 = 0;         // derived exponent c9 + c12 - 1
  double c14_printed = 14;      // exponent as printed for the halving step
  long edge_count = 7;

  /// floor(30^6 / (c5 x^5)) + 1 shifts.
  Integer window(const FieldElement& x) const;
  /// log10 |t| <= log10 c8 + c9 log10(1/x).
  bool visit_bound_holds(double log10_t, const FieldElement& x) const;
};

OctagonLedger octagon_constants();

/// log10 of a positive field element, from a certified enclosure.
double log10_of(const FieldElement& x);

enum class TerminationReason { Claim1Return, Claim2EdgeRepetition, Claim3Return, Claim4EdgeRepetition };
const char* reason_name(TerminationReason r);  // "claim1-return", ...

/// Raised when a cascade phase leaves the envelope the visiting-time
/// argument guarantees.
class HypothesisViolated : public std::runtime_error {
 public:
  explicit HypothesisViolated(const std::string& what) : std::runtime_error("hypothesis violated: " + what) {}
};

/// The interval a cascade phase starts from. Entry 0 is QR itself.
struct TopInterval {
  EdgeInterval interval;
  FieldElement tau;                      // displacement of its top endpoint from R
  Direction dir = Direction::Forward;    // direction of the phase that produced it
  long level = 0;                        // i in the forward or reverse sequence
};

enum class PhaseEnd { Kept, Collapsed, Return, Repetition };
const char* phase_end_name(PhaseEnd e);

struct PhaseRecord {
  Direction dir = Direction::Forward;
  std::size_t start = 0;  // index into tops
  long shifts = 0;
  Integer window;         // asserted shift budget
  PhaseEnd end = PhaseEnd::Kept;
  bool final_split = false;  // the last shift split
};

struct VisitCertificate {
  std::string mode;  // "polysquare" or "octagon"
  EdgeInterval qr;
  std::vector<TopInterval> tops;
  std::vector<PhaseRecord> phases;
  TerminationReason reason = TerminationReason::Claim1Return;
  // Returns: shift indices j' < j'' in the last phase (0 is its start).
  // Repetitions: indices into tops.
  long first = 0;
  long second = 0;
  FieldElement tau_star;  // t* = tau_star * sqrt(1 + alpha^2)
  long total_shifts = 0;
};

/// Top-interval cascade from QR (top endpoint R) until an interval return
/// or an edge repetition. Throws HypothesisViolated when a phase exceeds
/// its budget or a lower bound on a kept length fails.
VisitCertificate cascade_search(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const ConstantsLedger& ledger);
VisitCertificate cascade_search(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const OctagonLedger& ledger);

/// Re-executes the certificate's phases through shift_interval; returns
/// tau_star or throws std::runtime_error("replay mismatch ...").
FieldElement replay(const Surface& s, const Slope& slope, const VisitCertificate& cert);

/// The point reached from start after signed displacement tau, which must
/// be a crossing time.
VerticalCoord locate(const Surface& s, const VerticalCoord& start, const Slope& slope, const FieldElement& tau);

struct OracleVisit {
  FieldElement tau;
  VerticalCoord at;
  long crossings = 0;  // crossings examined
};

/// Smallest |t| with L(t) in the open interval qr, L(0) = qr.hi, by
/// interleaved forward and reverse tracing. Throws std::runtime_error
/// ("cap exceeded ...") past arc-length t_cap.
OracleVisit find_visit_oracle(const Surface& s, const EdgeInterval& qr, const Slope& slope, const Rational& t_cap);

/// |tau| sqrt(1 + alpha^2) <= c0 / x, exactly.
bool within_visit_bound(const ConstantsLedger& ledger, const Slope& slope, const FieldElement& tau,
                        const FieldElement& x);

struct EndpointCheck {
  FieldElement above_q;  // y* - lo
  FieldElement below_r;  // hi - y*
  bool inside = false;
  bool ok = false;
};

EndpointCheck endpoint_distance(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const FieldElement& tau_star, const ConstantsLedger& ledger);
EndpointCheck endpoint_distance(const Surface& s, const EdgeInterval& qr, const Slope& slope,
                                const FieldElement& tau_star, const OctagonLedger& ledger);

/// Running maximum gap of heights on one vertical edge, with 0 and the edge
/// length as the outer ends.
class GapTracker {
 public:
  explicit GapTracker(FieldElement length);
  /// False when y is already present or outside (0, length).
  bool insert(const FieldElement& y);
  const FieldElement& max_gap() const;
  std::size_t count() const { return heights_.size(); }

 private:
  FieldElement length_;
  std::set<FieldElement> heights_;
  std::multiset<FieldElement> gaps_;
};

FieldElement max_gap(const std::vector<FieldElement>& heights, const FieldElement& length);
FieldElement max_gap(const std::vector<Crossing>& crossings, std::size_t edge, const FieldElement& length);

/// Crossings of the two-sided segment around a start point in order of
/// |tau|; forward first on ties. A direction that meets a vertex stops.
class SegmentGrower {
 public:
  SegmentGrower(const Surface& s, const VerticalCoord& start, const Slope& slope);

  struct Event {
    FieldElement tau;
    VerticalCoord at;
  };
  /// |tau| of the next event, or nothing when both directions stopped.
  std::optional<FieldElement> peek_radius() const;
  Event next();
  /// True when a direction met a vertex at radius <= T (arc length).
  bool truncated_within(const Rational& T) const;
  long count() const { return count_; }

 private:
  struct Side {
    Direction dir;
    VerticalCoord at;
    FieldElement tau;
    std::optional<PointShift> pending;
    std::optional<FieldElement> hit;  // |tau| of the vertex met
  };
  void prepare(Side& side);

  const Surface* surface_;
  const Slope* slope_;
  Side fwd_, rev_;
  long count_ = 0;
};

struct GapRow {
  Rational T;
  FieldElement mg;
  long N = 0;               // heights on the edge
  bool truncated = false;   // a vertex cut the segment inside the horizon
};

struct GapProfile {
  std::size_t edge = 0;
  std::vector<GapRow> rows;
};

/// Maximum gaps on edge for each arc-length horizon T (ascending) of the
/// segment centred at start.
GapProfile gap_profile(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                       const std::vector<Rational>& horizons);

struct PassageRow {
  long n = 0;
  bool reached = false;
  FieldElement radius;  // least |tau| with mg <= 1/n
  double T = 0;         // radius * sqrt(1 + alpha^2)
  long N = 0;
  FieldElement mg;      // mg at the passage, or the final mg when unreached
};

/// Least segment radius at which mg on edge drops to 1/n, for each n;
/// gives up after max_events crossings.
std::vector<PassageRow> first_passage(const Surface& s, const Slope& slope, const VerticalCoord& start,
                                      std::size_t edge, const std::vector<long>& targets, long max_events);

struct GapStepCheck {
  FieldElement x;         // mg at T
  FieldElement target;
  Rational T;
  double allowed = 0;     // T + C / x
  double reached_at = 0;  // least horizon with mg <= target
  bool ok = false;
};

/// mg at T + c0/x is at most (1 - c2) x.
GapStepCheck check_gap_step(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                            const Rational& T, const ConstantsLedger& ledger);
/// mg at T + c3/x is at most x / 2.
GapStepCheck check_gap_halving(const Surface& s, const Slope& slope, const VerticalCoord& start, std::size_t edge,
                               const Rational& T, const ConstantsLedger& ledger);

struct FitInput {
  long n = 0;
  std::optional<double> T;
};

struct FitReport {
  std::vector<FitInput> rows;
  std::vector<double> c1;       // T(n) / n for reached rows
  double ratio = 0;             // max / min of c1
  std::optional<double> exponent;  // least-squares slope of log T against log n
  bool complete = false;
  std::string verdict;
};

/// Verdicts: "not dense below <final_mg>" when a target is missed, else
/// "consistent with linear" (ratio <= linear_factor), "polynomial"
/// (exponent <= exponent_cap) or "inconclusive".
FitReport superdensity_fit(const std::vector<FitInput>& rows, std::optional<std::string> final_mg = std::nullopt,
                           double linear_factor = 8.0, double exponent_cap = 6.0);

/// Closed square [x0, x0 + side] x [y0, y0 + side] inside one face.
struct AlignedSquare {
  std::size_t face = 0;
  FieldElement x0, y0;
  Rational side;
};

struct SquareVisit {
  bool found = false;
  FieldElement tau;   // displacement at the first point of the square
  double t = 0;
  FieldElement x, y;  // local coordinates of that point
  long crossings = 0;
  std::string note;
};

/// First forward time the geodesic from start meets the square.
SquareVisit aligned_square_visit(const Surface& s, const Slope& slope, const VerticalCoord& start,
                                 const AlignedSquare& square, const StopRule& horizon);

}  // namespace polyflow
