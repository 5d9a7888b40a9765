// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/density.hpp"
#include "polyflow/diophantine.hpp"
#include "polyflow/net.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace polyflow {

/// CSV and JSON emitters. Edges are printed 1-based. Exact columns hold
/// canonical field-element text; *_decimal columns are 15-digit shadows.
/// Arc-length times print as "(tau)*sqrt(1+alpha^2)".

inline constexpr int kSchemaVersion = 1;

std::string time_text(const FieldElement& tau);
/// Inverse of time_text; throws std::invalid_argument.
FieldElement parse_time_text(std::string_view text, const TowerSpec& tower);

/// index,t,t_decimal,edge,y,y_decimal,n1,n2,n3,n4 with the start as row 0.
std::string crossings_csv(const Slope& slope, const VerticalCoord& start, const TraceResult& trace);

struct CsvCrossing {
  long index = 0;
  FieldElement tau;
  std::size_t edge = 0;  // 0-based
  FieldElement y;
  Counters n;
};
std::vector<CsvCrossing> parse_crossings_csv(std::string_view text, const TowerSpec& tower);

/// T,T_decimal,mg,mg_decimal,N,truncated
std::string gap_profile_csv(const GapProfile& profile);

struct CsvGapRow {
  Rational T;
  FieldElement mg;
  long N = 0;
  bool truncated = false;
};
std::vector<CsvGapRow> parse_gap_profile_csv(std::string_view text, const TowerSpec& tower);

/// n,reached,radius,T_decimal,N,mg,mg_decimal
std::string passage_csv(const std::vector<PassageRow>& rows);

/// Fit input from a gap-profile CSV: T(n) is the least listed horizon with
/// mg <= 1/n. A passage CSV (header starting "n,reached") is read directly.
/// Without a tower, mg is compared through its decimal column.
std::vector<FitInput> fit_rows_from_csv(std::string_view text, const std::vector<long>& targets,
                                        const TowerSpec* tower, std::optional<std::string>* final_mg = nullptr);

std::string validation_json(const SurfaceParts& parts, const ValidationReport& report);
std::string fit_json(const FitReport& fit);
std::string certificate_json(const VisitCertificate& cert, const Slope& slope);
/// Throws std::invalid_argument on a malformed certificate.
VisitCertificate parse_certificate_json(std::string_view text, const TowerSpec& tower, FieldElement* alpha = nullptr);

struct VisitSummary {
  EdgeInterval qr;
  FieldElement x;
  OracleVisit oracle;
  VisitCertificate cascade;
  FieldElement replayed;
  bool within_bound = false;   // both times within the visit bound
  std::string bound_text;      // e.g. "c0/x = ..."
  EndpointCheck endpoint;
};
std::string visit_json(const Slope& slope, const VisitSummary& v);

struct DiophantineTable {
  std::string preset;
  long n_max = 0;
  std::optional<BadApproxReport> bad_approx;  // golden, sqrt2m1
  std::optional<EmpiricalC5> empirical;       // octagon
  std::optional<CertifiedC5> certified;
  bool passed = false;
};
std::string diophantine_json(const DiophantineTable& t);
std::string diophantine_text(const DiophantineTable& t);

}  // namespace polyflow
