// SPDX-License-Identifier: Apache-2.0
#include "polyflow/net.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace polyflow {

std::string to_string(const Diagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

namespace {

constexpr int kMaxDepth = 200;
constexpr std::size_t kMaxDigits = 4000;
constexpr std::size_t kMaxRadicandDigits = 30;

enum class Tok { Int, Name, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int col = 0;  // 1-based
};

struct ParseError {
  int col;
  std::string message;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    unsigned char c = static_cast<unsigned char>(line[i]);
    int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j - i > kMaxDigits) throw ParseError{col, "malformed rational: too many digits"};
      out.push_back({Tok::Int, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Tok::Name, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::string_view("+-*/()^=,.").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), col});
      ++i;
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02x", c);
      throw ParseError{col, std::string("unexpected character ") +
                                (std::isprint(c) ? "'" + std::string(1, static_cast<char>(c)) + "'" : buf)};
    }
  }
  int end_col = static_cast<int>(line.size()) + 1;
  out.push_back({Tok::End, "", end_col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool sym(char c) const { return peek().kind == Tok::Sym && peek().text[0] == c; }
  bool word(const char* w) const { return peek().kind == Tok::Name && peek().text == w; }
  void expect_sym(char c) {
    if (!sym(c)) fail(std::string("expected '") + c + "'");
    take();
  }
  void expect_word(const char* w) {
    if (!word(w)) fail(std::string("expected '") + w + "'");
    take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError{t.col, msg + (t.kind == Tok::End ? " at end of line" : ", found '" + t.text + "'")};
  }
  bool at_end() const { return peek().kind == Tok::End; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  ExprParser(Cursor& c, const TowerSpec& tower) : c_(c), tower_(tower) {}

  FieldElement expr(int depth = 0) {
    if (depth > kMaxDepth) c_.fail("expression nested too deeply");
    FieldElement v = term(depth);
    while (c_.sym('+') || c_.sym('-')) {
      bool plus = c_.take().text[0] == '+';
      FieldElement t = term(depth);
      v = plus ? v + t : v - t;
    }
    return v;
  }

 private:
  FieldElement term(int depth) {
    FieldElement v = unary(depth);
    while (c_.sym('*')) {
      c_.take();
      v = v * unary(depth);
    }
    return v;
  }

  FieldElement unary(int depth) {
    if (depth > kMaxDepth) c_.fail("expression nested too deeply");
    if (c_.sym('-')) {
      c_.take();
      return -unary(depth + 1);
    }
    return primary(depth);
  }

  FieldElement primary(int depth) {
    const Token& t = c_.peek();
    if (t.kind == Tok::Int) {
      Integer num{c_.take().text};
      Integer den = 1;
      if (c_.sym('/')) {
        int col = c_.peek().col;
        c_.take();
        if (c_.peek().kind != Tok::Int) throw ParseError{col, "malformed rational: denominator expected"};
        den = Integer{c_.take().text};
        if (den == 0) throw ParseError{col, "malformed rational: zero denominator"};
        if (c_.sym('/')) throw ParseError{c_.peek().col, "malformed rational: repeated '/'"};
      }
      return FieldElement(tower_, make_rational(num, den));
    }
    if (t.kind == Tok::Name) {
      auto idx = tower_.generator_index(t.text);
      if (!idx) throw ParseError{t.col, "unknown generator name '" + t.text + "'"};
      c_.take();
      return FieldElement::generator(tower_, *idx);
    }
    if (c_.sym('(')) {
      c_.take();
      FieldElement v = expr(depth + 1);
      c_.expect_sym(')');
      return v;
    }
    if (c_.sym('/')) throw ParseError{t.col, "malformed rational: numerator expected"};
    c_.fail("expected a number, a generator name or '('");
  }

  Cursor& c_;
  const TowerSpec& tower_;
};

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"tower", "face", "width", "height", "glue", "slope"};
  return r;
}

std::optional<Side> side_of(const std::string& s) {
  if (s == "L") return Side::Left;
  if (s == "R") return Side::Right;
  if (s == "T") return Side::Top;
  if (s == "B") return Side::Bottom;
  return std::nullopt;
}

long parse_id(Cursor& c, const char* what) {
  const Token& t = c.peek();
  if (t.kind != Tok::Int) c.fail(std::string("expected ") + what);
  if (t.text.size() > 9) throw ParseError{t.col, std::string(what) + " too large"};
  long v = std::stol(c.take().text);
  return v;
}

struct PendingGlue {
  bool vertical;
  EdgeRef a, b;
  int line, col_a, col_b;
};

EdgeRef parse_edgeref(Cursor& c, int& col) {
  col = c.peek().col;
  if (c.peek().kind != Tok::Int) throw ParseError{col, "unbalanced glue: expected two edge references"};
  long id = parse_id(c, "face id");
  c.expect_sym('.');
  const Token& t = c.peek();
  auto side = t.kind == Tok::Name ? side_of(t.text) : std::nullopt;
  if (!side) c.fail("expected a side L, R, T or B");
  c.take();
  return {static_cast<int>(id), *side};
}

struct RawLine {
  int number;
  std::string_view text;
};

}  // namespace

FieldElement parse_expr(std::string_view text, const TowerSpec& tower) {
  try {
    Cursor c(tokenize(text));
    ExprParser p(c, tower);
    FieldElement v = p.expr();
    if (!c.at_end()) c.fail("unexpected token after expression");
    return v;
  } catch (const ParseError& e) {
    throw std::invalid_argument("column " + std::to_string(e.col) + ": " + e.message);
  }
}

ParseResult parse_net(std::string_view text) {
  ParseResult res;
  NetDocument& doc = res.doc;
  auto diag = [&](int line, int col, std::string msg) { res.diagnostics.push_back({line, col, std::move(msg)}); };

  std::vector<RawLine> lines;
  {
    std::size_t start = 0;
    int n = 1;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      std::size_t end = nl == std::string_view::npos ? text.size() : nl;
      lines.push_back({n++, text.substr(start, end - start)});
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
    if (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  }

  // Pass 1: the tower, which every expression needs.
  bool have_tower = false;
  for (const auto& ln : lines) {
    std::size_t p = ln.text.find_first_not_of(" \t\r");
    if (p == std::string_view::npos || ln.text.substr(p, 5) != "tower") continue;
    try {
      Cursor c(tokenize(ln.text));
      if (!c.word("tower")) continue;
      c.take();
      if (have_tower) throw ParseError{static_cast<int>(p) + 1, "duplicate tower declaration"};
      std::vector<Generator> gens;
      std::vector<int> cols;
      for (;;) {
        const Token& name = c.peek();
        if (name.kind != Tok::Name) c.fail("expected a generator name");
        if (reserved().count(name.text)) throw ParseError{name.col, "reserved word '" + name.text + "' as generator"};
        Generator g;
        g.name = c.take().text;
        cols.push_back(name.col);
        c.expect_sym('^');
        const Token& e = c.peek();
        if (e.kind != Tok::Int || (e.text != "2" && e.text != "3")) c.fail("exponent must be 2 or 3");
        g.exponent = e.text[0] - '0';
        c.take();
        c.expect_sym('=');
        const Token& r = c.peek();
        if (r.kind != Tok::Int) c.fail("expected a positive integer radicand");
        if (r.text.size() > kMaxRadicandDigits) throw ParseError{r.col, "radicand too large"};
        g.radicand = Integer{c.take().text};
        gens.push_back(std::move(g));
        if (c.sym(',')) {
          c.take();
          continue;
        }
        if (!c.at_end()) c.fail("expected ',' or end of line");
        break;
      }
      have_tower = true;
      try {
        doc.tower = TowerSpec(std::move(gens));
      } catch (const std::exception& ex) {
        throw ParseError{cols.front(), ex.what()};
      }
    } catch (const ParseError& e) {
      diag(ln.number, e.col, e.message);
    }
  }

  std::map<int, int> face_line;
  std::vector<PendingGlue> glues;
  std::set<std::string> slope_names;
  for (const auto& ln : lines) {
    std::size_t p = ln.text.find_first_not_of(" \t\r");
    if (p == std::string_view::npos) continue;
    if (ln.text[p] == '#') {
      std::string_view body = ln.text.substr(p + 1);
      if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
      doc.comments.emplace_back(body);
      continue;
    }
    try {
      Cursor c(tokenize(ln.text));
      if (c.at_end()) continue;
      const Token& head = c.peek();
      if (head.kind != Tok::Name) c.fail("expected 'tower', 'face', 'glue' or 'slope'");
      if (head.text == "tower") continue;
      if (head.text == "face") {
        c.take();
        int id_col = c.peek().col;
        long id = parse_id(c, "face id");
        c.expect_word("width");
        int wcol = c.peek().col;
        ExprParser ep(c, doc.tower);
        FieldElement w = ep.expr();
        c.expect_word("height");
        int hcol = c.peek().col;
        FieldElement h = ep.expr();
        if (!c.at_end()) c.fail("unexpected token after face");
        if (w.sign() <= 0) throw ParseError{wcol, "nonpositive width"};
        if (h.sign() <= 0) throw ParseError{hcol, "nonpositive height"};
        if (face_line.count(static_cast<int>(id)))
          throw ParseError{id_col, "duplicate face id " + std::to_string(id) + " (first on line " +
                                       std::to_string(face_line[static_cast<int>(id)]) + ")"};
        face_line[static_cast<int>(id)] = ln.number;
        doc.faces.push_back({static_cast<int>(id), std::move(w), std::move(h)});
      } else if (head.text == "glue") {
        c.take();
        const Token& kind = c.peek();
        if (kind.kind != Tok::Name || (kind.text != "V" && kind.text != "H")) c.fail("expected V or H");
        bool vertical = c.take().text == "V";
        PendingGlue g{vertical, {}, {}, ln.number, 0, 0};
        g.a = parse_edgeref(c, g.col_a);
        g.b = parse_edgeref(c, g.col_b);
        if (!c.at_end()) throw ParseError{c.peek().col, "unbalanced glue: more than two edge references"};
        Side want_a = vertical ? Side::Right : Side::Top, want_b = vertical ? Side::Left : Side::Bottom;
        if (g.a.side != want_a || g.b.side != want_b)
          throw ParseError{g.col_a, std::string("unbalanced glue: ") + (vertical ? "V" : "H") + " pairs need a." +
                                        side_letter(want_a) + " b." + side_letter(want_b)};
        glues.push_back(g);
      } else if (head.text == "slope") {
        c.take();
        const Token& name = c.peek();
        if (name.kind != Tok::Name) c.fail("expected a slope name");
        std::string nm = c.take().text;
        if (slope_names.count(nm)) throw ParseError{name.col, "duplicate slope name '" + nm + "'"};
        c.expect_sym('=');
        ExprParser ep(c, doc.tower);
        FieldElement v = ep.expr();
        if (!c.at_end()) c.fail("unexpected token after slope");
        slope_names.insert(nm);
        doc.slopes.emplace_back(nm, std::move(v));
      } else {
        throw ParseError{head.col, "unknown directive '" + head.text + "'"};
      }
    } catch (const ParseError& e) {
      diag(ln.number, e.col, e.message);
    } catch (const std::exception& e) {
      diag(ln.number, 1, e.what());
    }
  }
  for (const auto& g : glues) {
    bool bad = false;
    if (!face_line.count(g.a.face)) {
      diag(g.line, g.col_a, "unknown face id " + std::to_string(g.a.face));
      bad = true;
    }
    if (!face_line.count(g.b.face)) {
      diag(g.line, g.col_b, "unknown face id " + std::to_string(g.b.face));
      bad = true;
    }
    if (bad) continue;
    (g.vertical ? doc.v_glue : doc.h_glue).emplace_back(g.a, g.b);
  }
  std::stable_sort(res.diagnostics.begin(), res.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return res;
}

namespace {

NetDocument canonical(NetDocument d) {
  std::sort(d.faces.begin(), d.faces.end(), [](const Face& a, const Face& b) { return a.id < b.id; });
  auto by_faces = [](const std::pair<EdgeRef, EdgeRef>& x, const std::pair<EdgeRef, EdgeRef>& y) {
    return std::pair(x.first.face, x.second.face) < std::pair(y.first.face, y.second.face);
  };
  std::sort(d.v_glue.begin(), d.v_glue.end(), by_faces);
  std::sort(d.h_glue.begin(), d.h_glue.end(), by_faces);
  std::sort(d.slopes.begin(), d.slopes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return d;
}

std::string ref_text(const EdgeRef& r) { return std::to_string(r.face) + "." + side_letter(r.side); }

}  // namespace

std::string serialize_net(const NetDocument& doc_in) {
  NetDocument doc = canonical(doc_in);
  std::ostringstream out;
  for (const auto& c : doc.comments) out << "#" << c << "\n";
  if (doc.tower.degree() > 1) out << "tower " << doc.tower.to_string() << "\n";
  for (const auto& f : doc.faces)
    out << "face " << f.id << " width " << to_string(f.width) << " height " << to_string(f.height) << "\n";
  for (const auto& [a, b] : doc.v_glue) out << "glue V " << ref_text(a) << " " << ref_text(b) << "\n";
  for (const auto& [a, b] : doc.h_glue) out << "glue H " << ref_text(a) << " " << ref_text(b) << "\n";
  for (const auto& [name, v] : doc.slopes) out << "slope " << name << " = " << to_string(v) << "\n";
  return out.str();
}

NetDocument to_document(const Surface& s, bool with_summary) {
  NetDocument d;
  const SurfaceParts& p = s.parts();
  d.tower = p.tower;
  d.faces = p.faces;
  d.v_glue = p.v_pairs;
  d.h_glue = p.h_pairs;
  if (with_summary) {
    d.comments.push_back(" faces " + std::to_string(s.face_count()) + ", vertical edges " +
                         std::to_string(s.edge_count()) + ", genus " + std::to_string(s.genus()));
    d.comments.push_back(" total vertical edge length " + to_string(s.total_vertical_length()));
  }
  return canonical(std::move(d));
}

std::string serialize_net(const Surface& s, bool with_summary) { return serialize_net(to_document(s, with_summary)); }

SurfaceParts to_parts(const NetDocument& doc) {
  SurfaceParts p;
  p.tower = doc.tower;
  p.faces = doc.faces;
  p.v_pairs = doc.v_glue;
  p.h_pairs = doc.h_glue;
  return p;
}

Surface to_surface(const NetDocument& doc) { return Surface(to_parts(doc)); }

bool equivalent(const NetDocument& a_in, const NetDocument& b_in) {
  NetDocument a = canonical(a_in), b = canonical(b_in);
  if (a.tower != b.tower || a.comments != b.comments) return false;
  if (a.faces.size() != b.faces.size() || a.slopes.size() != b.slopes.size()) return false;
  for (std::size_t i = 0; i < a.faces.size(); ++i)
    if (a.faces[i].id != b.faces[i].id || !(a.faces[i].width == b.faces[i].width) ||
        !(a.faces[i].height == b.faces[i].height))
      return false;
  for (std::size_t i = 0; i < a.slopes.size(); ++i)
    if (a.slopes[i].first != b.slopes[i].first || !(a.slopes[i].second == b.slopes[i].second)) return false;
  return a.v_glue == b.v_glue && a.h_glue == b.h_glue;
}

bool same_structure(const Surface& a, const Surface& b) {
  NetDocument x = to_document(a), y = to_document(b);
  return equivalent(x, y);
}

}  // namespace polyflow
