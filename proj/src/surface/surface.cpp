// SPDX-License-Identifier: Apache-2.0
#include "polyflow/surface.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace polyflow {

const char* side_letter(Side s) {
  switch (s) {
    case Side::Left: return "L";
    case Side::Right: return "R";
    case Side::Top: return "T";
    case Side::Bottom: return "B";
  }
  return "?";
}

Side opposite(Side s) {
  switch (s) {
    case Side::Left: return Side::Right;
    case Side::Right: return Side::Left;
    case Side::Top: return Side::Bottom;
    case Side::Bottom: return Side::Top;
  }
  return s;
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::NonPositiveSize: return "nonpositive size";
    case ViolationKind::DuplicateFace: return "duplicate face";
    case ViolationKind::UnknownFace: return "unknown face";
    case ViolationKind::ForeignTower: return "foreign tower";
    case ViolationKind::NonTranslation: return "non-translation gluing";
    case ViolationKind::DuplicateEdge: return "duplicate edge";
    case ViolationKind::UnmatchedEdge: return "unmatched edge";
    case ViolationKind::LengthMismatch: return "length mismatch";
    case ViolationKind::Disconnected: return "disconnected gluing";
    case ViolationKind::ConditionI: return "condition (i)";
    case ViolationKind::ConditionII: return "condition (ii)";
    case ViolationKind::Empty: return "empty surface";
  }
  return "?";
}

namespace {

std::string edge_text(const EdgeRef& e) { return std::to_string(e.face) + "." + side_letter(e.side); }

std::string join_messages(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += x.message;
  }
  return out;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Structure {
  std::vector<std::size_t> right, left, top, bottom;
};

std::size_t side_slot(Side s) { return static_cast<std::size_t>(s); }

// Structural checks; fills neighbour tables when the gluing is a complete
// matching of sides.
std::vector<Violation> check_structure(const SurfaceParts& p, std::map<int, std::size_t>& index, Structure& st,
                                       bool allow_unmatched) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string msg) { out.push_back({k, violation_name(k) + std::string(": ") + msg}); };
  if (p.faces.empty()) add(ViolationKind::Empty, "no faces");
  for (std::size_t i = 0; i < p.faces.size(); ++i) {
    const auto& f = p.faces[i];
    if (!index.emplace(f.id, i).second) add(ViolationKind::DuplicateFace, "face " + std::to_string(f.id));
    bool tower_ok = true;
    for (const auto* v : {&f.width, &f.height}) {
      if (v->tower().degree() != 1 && v->tower() != p.tower) {
        add(ViolationKind::ForeignTower, "face " + std::to_string(f.id) + " uses tower " + v->tower().to_string());
        tower_ok = false;
      }
    }
    if (!tower_ok) continue;
    if (f.width.sign() <= 0) add(ViolationKind::NonPositiveSize, "nonpositive width on face " + std::to_string(f.id));
    if (f.height.sign() <= 0) add(ViolationKind::NonPositiveSize, "nonpositive height on face " + std::to_string(f.id));
  }
  const std::size_t n = p.faces.size();
  std::vector<int> uses(4 * n, 0);
  st.right.assign(n, kNone);
  st.left.assign(n, kNone);
  st.top.assign(n, kNone);
  st.bottom.assign(n, kNone);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto process = [&](const std::pair<EdgeRef, EdgeRef>& pr, bool vertical) {
    const Side want_a = vertical ? Side::Right : Side::Top;
    const Side want_b = vertical ? Side::Left : Side::Bottom;
    std::string label = std::string(vertical ? "V " : "H ") + edge_text(pr.first) + " " + edge_text(pr.second);
    auto ia = index.find(pr.first.face), ib = index.find(pr.second.face);
    bool bad = false;
    if (ia == index.end()) {
      add(ViolationKind::UnknownFace, "face " + std::to_string(pr.first.face) + " in glue " + label);
      bad = true;
    }
    if (ib == index.end()) {
      add(ViolationKind::UnknownFace, "face " + std::to_string(pr.second.face) + " in glue " + label);
      bad = true;
    }
    if (pr.first.side != want_a || pr.second.side != want_b) {
      add(ViolationKind::NonTranslation,
          "glue " + label + " must pair " + side_letter(want_a) + " with " + side_letter(want_b));
      bad = true;
    }
    if (bad) return;
    std::size_t a = ia->second, b = ib->second;
    for (auto [f, s] : {std::pair{a, want_a}, std::pair{b, want_b}}) {
      if (++uses[4 * f + side_slot(s)] == 2)
        add(ViolationKind::DuplicateEdge, "side " + std::to_string(p.faces[f].id) + "." + side_letter(s) +
                                              " appears in more than one glue");
    }
    const auto& la = vertical ? p.faces[a].height : p.faces[a].width;
    const auto& lb = vertical ? p.faces[b].height : p.faces[b].width;
    bool towers_ok = (la.tower().degree() == 1 || la.tower() == p.tower) && (lb.tower().degree() == 1 || lb.tower() == p.tower);
    if (towers_ok && !(la == lb))
      add(ViolationKind::LengthMismatch, "glue " + label + " joins lengths " + to_string(la) + " and " + to_string(lb));
    if (vertical) {
      st.right[a] = b;
      st.left[b] = a;
    } else {
      st.top[a] = b;
      st.bottom[b] = a;
    }
    parent[find(a)] = find(b);
  };
  for (const auto& pr : p.v_pairs) process(pr, true);
  for (const auto& pr : p.h_pairs) process(pr, false);
  if (!allow_unmatched) {
    for (std::size_t f = 0; f < n; ++f)
      for (Side s : {Side::Left, Side::Right, Side::Top, Side::Bottom})
        if (uses[4 * f + side_slot(s)] == 0)
          add(ViolationKind::UnmatchedEdge, "side " + std::to_string(p.faces[f].id) + "." + side_letter(s) + " is not glued");
  }
  for (std::size_t f = 1; f < n; ++f) {
    if (find(f) != find(0)) {
      add(ViolationKind::Disconnected, "face " + std::to_string(p.faces[f].id) + " is not connected to face " +
                                           std::to_string(p.faces[0].id));
      break;
    }
  }
  return out;
}

// Corner cycles: BL(f) -> BR(left f) -> TR(bottom) -> TL(right) -> BL(top).
std::vector<VertexClass> walk_corners(const Structure& st, std::vector<std::size_t>& vertex_of) {
  const std::size_t n = st.right.size();
  vertex_of.assign(4 * n, kNone);
  std::vector<VertexClass> out;
  for (std::size_t f = 0; f < n; ++f) {
    for (int c = 0; c < 4; ++c) {
      if (vertex_of[4 * f + c] != kNone) continue;
      VertexClass vc;
      std::size_t cf = f;
      int cc = c;
      while (vertex_of[4 * cf + cc] == kNone) {
        vertex_of[4 * cf + cc] = out.size();
        vc.corners.push_back({cf, static_cast<Corner>(cc)});
        switch (static_cast<Corner>(cc)) {
          case Corner::BottomLeft: cf = st.left[cf]; cc = 1; break;
          case Corner::BottomRight: cf = st.bottom[cf]; cc = 2; break;
          case Corner::TopRight: cf = st.right[cf]; cc = 3; break;
          case Corner::TopLeft: cf = st.top[cf]; cc = 0; break;
        }
      }
      out.push_back(std::move(vc));
    }
  }
  return out;
}

bool blocks_walk(const std::vector<Violation>& v) {
  for (const auto& x : v)
    if (x.kind != ViolationKind::LengthMismatch && x.kind != ViolationKind::NonPositiveSize &&
        x.kind != ViolationKind::Disconnected && x.kind != ViolationKind::ConditionI &&
        x.kind != ViolationKind::ConditionII)
      return true;
  return false;
}

FieldElement to_tower(const FieldElement& x, const TowerSpec& t) {
  if (x.tower() == t) return x;
  if (x.tower().degree() == 1) return FieldElement(t, x.coords()[0]);
  return x.lift_to(t);
}

}  // namespace

ValidationReport validate(const SurfaceParts& parts) {
  ValidationReport rep;
  std::map<int, std::size_t> index;
  Structure st;
  rep.violations = check_structure(parts, index, st, false);
  rep.F = static_cast<long>(parts.faces.size());
  rep.E = 2 * rep.F;
  if (!blocks_walk(rep.violations)) {
    std::vector<std::size_t> vertex_of;
    rep.vertices = walk_corners(st, vertex_of);
    rep.V = static_cast<long>(rep.vertices.size());
    long chi = rep.V - rep.E + rep.F;
    if ((2 - chi) % 2 == 0 && chi <= 2) rep.genus = (2 - chi) / 2;
  }
  return rep;
}

SurfaceError::SurfaceError(std::vector<Violation> v)
    : std::invalid_argument("invalid surface: " + join_messages(v)), violations_(std::move(v)) {}

namespace detail {

struct SurfaceData {
  SurfaceParts parts;
  std::map<int, std::size_t> index;
  Structure st;
  std::vector<std::size_t> vertex_of;
  std::vector<VertexClass> vertices;
  long genus = 0;
  bool polysquare = false;
};

}  // namespace detail

Surface::Surface(SurfaceParts parts) {
  auto rep = validate(parts);
  if (!rep.ok()) throw SurfaceError(rep.violations);
  auto data = std::make_shared<detail::SurfaceData>();
  for (auto& f : parts.faces) {
    f.width = to_tower(f.width, parts.tower);
    f.height = to_tower(f.height, parts.tower);
  }
  check_structure(parts, data->index, data->st, false);
  data->vertices = walk_corners(data->st, data->vertex_of);
  data->genus = *rep.genus;
  data->polysquare = std::all_of(parts.faces.begin(), parts.faces.end(), [](const Face& f) {
    return f.width == FieldElement(1) && f.height == FieldElement(1);
  });
  data->parts = std::move(parts);
  data_ = std::move(data);
}

const SurfaceParts& Surface::parts() const { return data_->parts; }
const TowerSpec& Surface::tower() const { return data_->parts.tower; }
std::size_t Surface::face_count() const { return data_->parts.faces.size(); }
const Face& Surface::face(std::size_t index) const { return data_->parts.faces.at(index); }

std::optional<std::size_t> Surface::face_index(int id) const {
  auto it = data_->index.find(id);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Surface::right_of(std::size_t f) const { return data_->st.right[f]; }
std::size_t Surface::left_of(std::size_t f) const { return data_->st.left[f]; }
std::size_t Surface::top_of(std::size_t f) const { return data_->st.top[f]; }
std::size_t Surface::bottom_of(std::size_t f) const { return data_->st.bottom[f]; }

FieldElement Surface::total_vertical_length() const {
  FieldElement sum(tower(), Rational(0));
  for (const auto& f : data_->parts.faces) sum += f.height;
  return sum;
}

FieldElement Surface::area() const {
  FieldElement sum(tower(), Rational(0));
  for (const auto& f : data_->parts.faces) sum += f.width * f.height;
  return sum;
}

const std::vector<VertexClass>& Surface::vertices() const { return data_->vertices; }

std::size_t Surface::vertex_of(std::size_t face, Corner c) const {
  return data_->vertex_of[4 * face + static_cast<std::size_t>(c)];
}

long Surface::genus() const { return data_->genus; }

bool Surface::is_polysquare() const { return data_->polysquare; }

Surface Surface::lift_to(const TowerSpec& t) const {
  SurfaceParts p = data_->parts;
  for (auto& f : p.faces) {
    f.width = to_tower(f.width, t);
    f.height = to_tower(f.height, t);
  }
  p.tower = t;
  return Surface(std::move(p));
}

// ---------------------------------------------------------------- builders

std::pair<SurfaceParts, std::vector<Violation>> polysquare_parts(const std::vector<Cell>& cells,
                                                                 const CellGluing& gluing) {
  std::vector<Violation> region;
  auto add = [&](ViolationKind k, std::string msg) { region.push_back({k, violation_name(k) + std::string(": ") + msg}); };
  auto cell_text = [](const Cell& c) { return "cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; };

  std::vector<Cell> sorted = cells;
  // Row-major: row (y) first, then column (x).
  std::sort(sorted.begin(), sorted.end(), [](const Cell& a, const Cell& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) add(ViolationKind::ConditionI, cell_text(sorted[i]) + " overlaps itself (listed twice)");
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::map<Cell, int> id;
  for (std::size_t i = 0; i < sorted.size(); ++i) id[sorted[i]] = static_cast<int>(i) + 1;

  SurfaceParts p;
  for (std::size_t i = 0; i < sorted.size(); ++i) p.faces.push_back({static_cast<int>(i) + 1, FieldElement(1), FieldElement(1)});

  // Condition (ii): cells joined by chains of shared edges.
  if (!sorted.empty()) {
    std::map<Cell, bool> seen;
    std::vector<Cell> stack{sorted[0]};
    seen[sorted[0]] = true;
    while (!stack.empty()) {
      Cell c = stack.back();
      stack.pop_back();
      for (Cell nb : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}})
        if (id.count(nb) && !seen[nb]) {
          seen[nb] = true;
          stack.push_back(nb);
        }
    }
    for (const auto& c : sorted)
      if (!seen[c]) {
        add(ViolationKind::ConditionII, cell_text(c) + " is not joined to " + cell_text(sorted[0]) + " by a chain of shared edges");
        break;
      }
  }

  for (const auto& c : sorted) {
    Cell r{c.x + 1, c.y}, u{c.x, c.y + 1};
    if (id.count(r)) p.v_pairs.push_back({{id[c], Side::Right}, {id[r], Side::Left}});
    if (id.count(u)) p.h_pairs.push_back({{id[c], Side::Top}, {id[u], Side::Bottom}});
  }
  auto explicit_pair = [&](const std::pair<Cell, Cell>& g, bool vertical) {
    const char* kind = vertical ? "v_glue" : "h_glue";
    for (const Cell& c : {g.first, g.second})
      if (!id.count(c)) {
        add(ViolationKind::UnknownFace, std::string(kind) + " names missing " + cell_text(c));
        return;
      }
    Cell out_a = vertical ? Cell{g.first.x + 1, g.first.y} : Cell{g.first.x, g.first.y + 1};
    Cell out_b = vertical ? Cell{g.second.x - 1, g.second.y} : Cell{g.second.x, g.second.y - 1};
    if (id.count(out_a))
      add(ViolationKind::DuplicateEdge, std::string(kind) + " uses interior side of " + cell_text(g.first));
    if (id.count(out_b))
      add(ViolationKind::DuplicateEdge, std::string(kind) + " uses interior side of " + cell_text(g.second));
    if (vertical) p.v_pairs.push_back({{id[g.first], Side::Right}, {id[g.second], Side::Left}});
    else p.h_pairs.push_back({{id[g.first], Side::Top}, {id[g.second], Side::Bottom}});
  };
  for (const auto& g : gluing.v_glue) explicit_pair(g, true);
  for (const auto& g : gluing.h_glue) explicit_pair(g, false);
  return {std::move(p), std::move(region)};
}

Surface build_polysquare(const std::vector<Cell>& cells, const CellGluing& gluing) {
  auto [parts, region] = polysquare_parts(cells, gluing);
  if (!region.empty()) {
    auto rep = validate(parts);
    for (auto& v : rep.violations) region.push_back(std::move(v));
    throw SurfaceError(std::move(region));
  }
  return Surface(std::move(parts));
}

CellGluing wraparound_gluing(const std::vector<Cell>& cells) {
  std::map<Cell, bool> present;
  for (const auto& c : cells) present[c] = true;
  CellGluing g;
  std::vector<Cell> sorted;
  for (const auto& [c, _] : present) sorted.push_back(c);
  std::sort(sorted.begin(), sorted.end(), [](const Cell& a, const Cell& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  for (const auto& c : sorted) {
    if (!present.count({c.x - 1, c.y})) {
      Cell end = c;
      while (present.count({end.x + 1, end.y})) ++end.x;
      g.v_glue.push_back({end, c});
    }
  }
  for (const auto& c : sorted) {
    if (!present.count({c.x, c.y - 1})) {
      Cell end = c;
      while (present.count({end.x, end.y + 1})) ++end.y;
      g.h_glue.push_back({end, c});
    }
  }
  return g;
}

Surface unit_torus() { return build_polysquare({{0, 0}}, wraparound_gluing({{0, 0}})); }

std::vector<Cell> l_shape_cells() { return {{0, 0}, {1, 0}, {0, 1}}; }

Surface l_shape() {
  auto cells = l_shape_cells();
  return build_polysquare(cells, wraparound_gluing(cells));
}

Surface build_octagon(const TowerSpec& tower) {
  std::optional<FieldElement> r;
  for (std::size_t g = 0; g < tower.generators().size(); ++g) {
    const auto& gen = tower.generators()[g];
    if (gen.exponent == 2 && gen.radicand == 2) r = FieldElement::generator(tower, g);
  }
  if (!r) throw std::invalid_argument("octagon tower needs a generator with x^2 = 2");
  FieldElement one(tower, Rational(1));
  SurfaceParts p;
  p.tower = tower;
  // Street of height 1: faces 1..4; street of height sqrt2: faces 5..7.
  p.faces = {{1, one, one}, {2, *r, one}, {3, one, one}, {4, *r, one},
             {5, one, *r},  {6, *r, *r},  {7, one, *r}};
  const int right_to[] = {2, 3, 4, 1, 6, 7, 5};
  const int top_to[] = {7, 4, 5, 6, 1, 2, 3};
  for (int f = 1; f <= 7; ++f) {
    p.v_pairs.push_back({{f, Side::Right}, {right_to[f - 1], Side::Left}});
    p.h_pairs.push_back({{f, Side::Top}, {top_to[f - 1], Side::Bottom}});
  }
  return Surface(std::move(p));
}

SurfaceParts table_from_cells(const std::vector<Cell>& cells) {
  auto [parts, region] = polysquare_parts(cells, {});
  if (!region.empty()) throw SurfaceError(std::move(region));
  return parts;
}

Surface four_copy(const SurfaceParts& table) {
  std::map<int, std::size_t> index;
  Structure st;
  auto problems = check_structure(table, index, st, true);
  if (!problems.empty()) throw std::invalid_argument("non-rectangular input: " + join_messages(problems));
  const std::size_t n = table.faces.size();
  bool any_wall = false;
  for (std::size_t f = 0; f < n; ++f)
    if (st.right[f] == kNone || st.left[f] == kNone || st.top[f] == kNone || st.bottom[f] == kNone) any_wall = true;
  if (!any_wall) throw std::invalid_argument("nothing to unfold: input has no reflecting boundary");

  auto partner = [&](std::size_t f, Side s) {
    switch (s) {
      case Side::Left: return st.left[f];
      case Side::Right: return st.right[f];
      case Side::Top: return st.top[f];
      case Side::Bottom: return st.bottom[f];
    }
    return kNone;
  };
  // Copy k draws the table reflected in x when k & 1 and in y when k & 2.
  auto mirror = [](Side s, int k) {
    if ((k & 1) && (s == Side::Left || s == Side::Right)) return opposite(s);
    if ((k & 2) && (s == Side::Top || s == Side::Bottom)) return opposite(s);
    return s;
  };
  auto face_id = [&](int k, std::size_t f) { return static_cast<int>(k * n + f) + 1; };

  SurfaceParts out;
  out.tower = table.tower;
  for (int k = 0; k < 4; ++k)
    for (std::size_t f = 0; f < n; ++f)
      out.faces.push_back({face_id(k, f), to_tower(table.faces[f].width, table.tower), to_tower(table.faces[f].height, table.tower)});
  for (int k = 0; k < 4; ++k) {
    for (std::size_t f = 0; f < n; ++f) {
      for (Side drawn : {Side::Right, Side::Top}) {
        Side orig = mirror(drawn, k);
        std::size_t other = partner(f, orig);
        int target;
        if (other != kNone) {
          target = face_id(k, other);
        } else {
          int flipped = k ^ (drawn == Side::Right ? 1 : 2);
          target = face_id(flipped, f);
        }
        EdgeRef a{face_id(k, f), drawn}, b{target, opposite(drawn)};
        (drawn == Side::Right ? out.v_pairs : out.h_pairs).push_back({a, b});
      }
    }
  }
  return Surface(std::move(out));
}

Surface four_copy(const Surface& surface) { return four_copy(surface.parts()); }

}  // namespace polyflow
