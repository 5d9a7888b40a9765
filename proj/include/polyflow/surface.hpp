// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyflow/field.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyflow {

enum class Side { Left, Right, Top, Bottom };
enum class Corner { BottomLeft, BottomRight, TopRight, TopLeft };

const char* side_letter(Side s);  // "L", "R", "T", "B"
Side opposite(Side s);

struct EdgeRef {
  int face = 0;  // face id
  Side side = Side::Left;
  bool operator==(const EdgeRef&) const = default;
};

struct Face {
  int id = 0;
  FieldElement width;
  FieldElement height;
};

/// Raw, unvalidated surface data. v_pairs are (Right of a, Left of b),
/// h_pairs are (Top of a, Bottom of b).
struct SurfaceParts {
  TowerSpec tower;
  std::vector<Face> faces;
  std::vector<std::pair<EdgeRef, EdgeRef>> v_pairs;
  std::vector<std::pair<EdgeRef, EdgeRef>> h_pairs;
};

enum class ViolationKind {
  NonPositiveSize,
  DuplicateFace,
  UnknownFace,
  ForeignTower,
  NonTranslation,
  DuplicateEdge,
  UnmatchedEdge,
  LengthMismatch,
  Disconnected,
  ConditionI,
  ConditionII,
  Empty,
};

const char* violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct VertexCorner {
  std::size_t face = 0;  // face index (position in faces)
  Corner corner = Corner::BottomLeft;
};

/// A glued vertex: cone angle = 2 pi * corner_count / 4.
struct VertexClass {
  std::vector<VertexCorner> corners;
  std::size_t corner_count() const { return corners.size(); }
  /// Cone angle as a multiple of 2 pi.
  Rational angle_over_2pi() const { return make_rational(static_cast<long>(corners.size()), 4); }
  bool singular() const { return corners.size() > 4; }
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  // Filled when the structure is sound enough to walk corners.
  long V = 0, E = 0, F = 0;
  std::optional<long> genus;
  std::vector<VertexClass> vertices;
};

ValidationReport validate(const SurfaceParts& parts);

class SurfaceError : public std::invalid_argument {
 public:
  explicit SurfaceError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

namespace detail {
struct SurfaceData;
}

/// Validated translation surface glued from rectangles by full-edge
/// identifications. Vertical edge k is the left side of the k-th face.
class Surface {
 public:
  /// Throws SurfaceError listing every violation.
  explicit Surface(SurfaceParts parts);

  const SurfaceParts& parts() const;
  const TowerSpec& tower() const;
  std::size_t face_count() const;
  const Face& face(std::size_t index) const;
  std::optional<std::size_t> face_index(int id) const;

  std::size_t right_of(std::size_t f) const;
  std::size_t left_of(std::size_t f) const;
  std::size_t top_of(std::size_t f) const;
  std::size_t bottom_of(std::size_t f) const;

  std::size_t edge_count() const { return face_count(); }
  const FieldElement& edge_length(std::size_t edge) const { return face(edge).height; }
  FieldElement total_vertical_length() const;
  FieldElement area() const;

  const std::vector<VertexClass>& vertices() const;
  std::size_t vertex_of(std::size_t face, Corner c) const;
  long genus() const;
  /// Vertex at the bottom (y = 0) or top (y = length) of vertical edge k.
  std::size_t edge_bottom_vertex(std::size_t edge) const { return vertex_of(edge, Corner::BottomLeft); }
  std::size_t edge_top_vertex(std::size_t edge) const { return vertex_of(edge, Corner::TopLeft); }

  /// True when every face is a unit square.
  bool is_polysquare() const;

  /// The same surface over a tower containing this one.
  Surface lift_to(const TowerSpec& tower) const;

 private:
  std::shared_ptr<const detail::SurfaceData> data_;
};

struct Cell {
  long x = 0;
  long y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Boundary pairing: v_glue (right side of a, left side of b) and h_glue
/// (top side of a, bottom side of b).
struct CellGluing {
  std::vector<std::pair<Cell, Cell>> v_glue;
  std::vector<std::pair<Cell, Cell>> h_glue;
};

/// Unit faces in row-major order (row, then column) with ids 1..s; shared
/// interior sides are glued to their geometric neighbour. Returned
/// violations include the region conditions on the cell set.
std::pair<SurfaceParts, std::vector<Violation>> polysquare_parts(const std::vector<Cell>& cells,
                                                                 const CellGluing& gluing);
Surface build_polysquare(const std::vector<Cell>& cells, const CellGluing& gluing);

/// Glues each maximal row (column) run's last right (top) side to its first
/// left (bottom) side.
CellGluing wraparound_gluing(const std::vector<Cell>& cells);

Surface unit_torus();
std::vector<Cell> l_shape_cells();
Surface l_shape();

/// The seven-rectangle regular-octagon surface; tower must contain a square
/// root of 2 (generator with x^2 = 2).
Surface build_octagon(const TowerSpec& tower = TowerSpec::sqrt2());

/// Billiard table from cells: unit faces with interior sides glued and the
/// remaining sides left as reflecting walls.
SurfaceParts table_from_cells(const std::vector<Cell>& cells);

/// Four reflected copies (identity, flip x, flip y, flip both) glued so
/// billiard orbits lift to straight-line flow. Unglued sides of the table
/// are walls; a table without walls throws std::invalid_argument
/// ("nothing to unfold").
Surface four_copy(const SurfaceParts& table);
Surface four_copy(const Surface& surface);

}  // namespace polyflow
