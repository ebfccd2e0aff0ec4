#pragma once

#include <string>

#include "brat/diagram.hpp"
#include "brat/relations.hpp"

namespace brat::io {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

// Line-oriented diagram text: `V <level> <id>` and
// `E <level> <id> <source-id> <range-id>`, '#' comments, levels nondecreasing,
// level 0 holds exactly one vertex.
Diagram parse_diagram(const std::string& text);
std::string emit_diagram(const Diagram& d);

// `S <level> <edge-id>` lines against a host diagram.
Subdiagram parse_subdiagram(const std::string& text, const Diagram& host);
std::string emit_subdiagram(const Diagram& host, const Subdiagram& s);

// `STRICT full|source` header, then `QV <level> <src-id> <dst-id>` and
// `QE <level> <src-id> <dst-id>` lines.
Quotient parse_quotient(const std::string& text, const Diagram& src,
                        const Diagram& dst);
std::string emit_quotient(const Diagram& src, const Diagram& dst,
                          const Quotient& q);

// `P <id>` point lines and `C <id> <id> ...` class lines; unlisted points
// are singletons.
EqRel parse_relation(const std::string& text);
std::string emit_relation(const EqRel& r);

// Relation file with `CHAIN <k>` section headers (k ascending from 0); the P
// lines are global, each section holds one relation's C lines.
std::vector<EqRel> parse_chain(const std::string& text);
std::string emit_chain(const std::vector<EqRel>& chain);

// `P <id>` point lines and `G <cycle-notation>` permutation lines, e.g.
// `G (x1 x2)(x3 x4)`.
struct ActionFile {
  std::vector<std::string> points;
  std::vector<std::vector<int>> generators;
};
ActionFile parse_action(const std::string& text);

// Exact `p/q` (or plain integer) rationals.
Rat parse_rational(const std::string& text);

// One DOT node per vertex with rank = level, one DOT edge per edge;
// highlighted subdiagram edges are drawn bold.
std::string emit_dot(const Diagram& d, const Subdiagram* highlight = nullptr);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace brat::io
