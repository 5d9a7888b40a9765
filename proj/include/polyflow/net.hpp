// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/surface.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyflow {

/// Line-oriented surface description:
///
///   tower r^2=2, c^3=3
///   face 1 width 1 height 1/2*r + 1
///   glue V 1.R 2.L
///   glue H 1.T 1.B
///   slope alpha = 1/2*c
///
/// '#' starts a comment; whole-line comments are kept in the document.
struct NetDocument {
  TowerSpec tower;
  std::vector<Face> faces;
  std::vector<std::pair<EdgeRef, EdgeRef>> v_glue;  // (a.R, b.L)
  std::vector<std::pair<EdgeRef, EdgeRef>> h_glue;  // (a.T, b.B)
  std::vector<std::pair<std::string, FieldElement>> slopes;
  std::vector<std::string> comments;  // without the leading '#'
};

struct Diagnostic {
  int line = 0;    // 1-based
  int column = 0;  // 1-based byte column
  std::string message;
};

std::string to_string(const Diagnostic& d);  // "3:7: unknown generator name 'q'"

struct ParseResult {
  NetDocument doc;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Never throws on malformed input; every problem becomes a diagnostic.
ParseResult parse_net(std::string_view text);

/// Parses an expression over the tower's generator names. Throws
/// std::invalid_argument with a column on error.
FieldElement parse_expr(std::string_view text, const TowerSpec& tower);

/// Canonical text: comments, tower, faces by id, glues by face id, slopes
/// by name.
std::string serialize_net(const NetDocument& doc);

/// Canonical document for a surface; with_summary adds a comment giving the
/// face count, genus and total vertical edge length.
NetDocument to_document(const Surface& s, bool with_summary = false);
std::string serialize_net(const Surface& s, bool with_summary = false);

SurfaceParts to_parts(const NetDocument& doc);
/// Throws SurfaceError when the document does not describe a valid surface.
Surface to_surface(const NetDocument& doc);

/// Equality up to the order of faces, glues and slopes.
bool equivalent(const NetDocument& a, const NetDocument& b);

/// Same faces (by id, exact sizes) and the same identifications.
bool same_structure(const Surface& a, const Surface& b);

}  // namespace polyflow
