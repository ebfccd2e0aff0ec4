#include "brat/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace brat::io {

namespace {

// Splits into (line number, tokens), dropping '#' comments and blank lines.
std::vector<std::pair<int, std::vector<std::string>>> tokenize(
    const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) out.emplace_back(no, std::move(toks));
  }
  return out;
}

int parse_level(int no, const std::string& s) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(no, "bad level '" + s + "'");
  }
}

} // namespace

Diagram parse_diagram(const std::string& text) {
  Diagram d;
  int last_level = -1;
  std::vector<std::set<std::string>> vseen, eseen;
  for (const auto& [no, t] : tokenize(text)) {
    if (t[0] == "V") {
      if (t.size() != 3) throw ParseError(no, "V wants <level> <id>");
      int lvl = parse_level(no, t[1]);
      if (lvl < last_level) throw ParseError(no, "levels must be nondecreasing");
      if (d.verts.empty() && lvl != 0)
        throw ParseError(no, "the first vertex must be at level 0");
      if (lvl == 0 && !d.verts.empty() && !d.verts[0].empty())
        throw ParseError(no, "level 0 holds exactly one vertex");
      if (lvl > last_level + 1)
        throw ParseError(no, "level gap before level " + t[1]);
      while (static_cast<int>(d.verts.size()) <= lvl) {
        d.verts.emplace_back();
        vseen.emplace_back();
      }
      if (!vseen[lvl].insert(t[2]).second)
        throw ParseError(no, "duplicate vertex id '" + t[2] + "'");
      d.verts[lvl].push_back(t[2]);
      last_level = lvl;
    } else if (t[0] == "E") {
      if (t.size() != 5)
        throw ParseError(no, "E wants <level> <id> <source-id> <range-id>");
      int lvl = parse_level(no, t[1]);
      if (lvl < 1 || lvl >= static_cast<int>(d.verts.size()))
        throw ParseError(no, "edge level " + t[1] + " has no declared vertices");
      if (lvl < last_level) throw ParseError(no, "levels must be nondecreasing");
      while (d.edges.size() < static_cast<size_t>(lvl)) {
        d.edges.emplace_back();
        eseen.emplace_back();
      }
      if (!eseen[lvl - 1].insert(t[2]).second)
        throw ParseError(no, "duplicate edge id '" + t[2] + "'");
      if (!vseen[lvl - 1].count(t[3]))
        throw ParseError(no, "unknown source vertex '" + t[3] + "'");
      if (!vseen[lvl].count(t[4]))
        throw ParseError(no, "unknown range vertex '" + t[4] + "'");
      d.edges[lvl - 1].push_back({t[2], t[3], t[4]});
      last_level = lvl;
    } else {
      throw ParseError(no, "unknown directive '" + t[0] + "'");
    }
  }
  if (d.verts.empty()) throw ParseError(1, "empty diagram");
  while (d.edges.size() + 1 < d.verts.size()) d.edges.emplace_back();
  return d;
}

std::string emit_diagram(const Diagram& d) {
  std::ostringstream out;
  for (size_t n = 0; n < d.verts.size(); ++n) {
    for (const auto& v : d.verts[n]) out << "V " << n << " " << v << "\n";
    if (n >= 1)
      for (const auto& e : d.edges[n - 1])
        out << "E " << n << " " << e.id << " " << e.src << " " << e.dst
            << "\n";
  }
  return out.str();
}

Subdiagram parse_subdiagram(const std::string& text, const Diagram& host) {
  Subdiagram s;
  s.sel.resize(host.depth() >= 0 ? host.depth() : 0);
  for (const auto& [no, t] : tokenize(text)) {
    if (t[0] != "S" || t.size() != 3)
      throw ParseError(no, "subdiagram lines are `S <level> <edge-id>`");
    int lvl = parse_level(no, t[1]);
    if (lvl < 1 || lvl > host.depth())
      throw ParseError(no, "level " + t[1] + " outside the host");
    int e = host.edge_index(lvl, t[2]);
    if (e < 0) throw ParseError(no, "unknown edge '" + t[2] + "'");
    s.sel[lvl - 1].push_back(e);
  }
  for (auto& lvl : s.sel) {
    std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
  }
  return s;
}

std::string emit_subdiagram(const Diagram& host, const Subdiagram& s) {
  std::ostringstream out;
  for (size_t n = 1; n <= s.sel.size(); ++n)
    for (int e : s.sel[n - 1])
      out << "S " << n << " " << host.es(static_cast<int>(n))[e].id << "\n";
  return out.str();
}

Quotient parse_quotient(const std::string& text, const Diagram& src,
                        const Diagram& dst) {
  Quotient q;
  q.vmap.assign(src.verts.size(), {});
  q.emap.assign(src.edges.size(), {});
  for (size_t n = 0; n < src.verts.size(); ++n)
    q.vmap[n].assign(src.verts[n].size(), -1);
  for (size_t n = 0; n < src.edges.size(); ++n)
    q.emap[n].assign(src.edges[n].size(), -1);
  bool strict_seen = false;
  for (const auto& [no, t] : tokenize(text)) {
    if (t[0] == "STRICT") {
      if (t.size() != 2 || (t[1] != "full" && t[1] != "source"))
        throw ParseError(no, "STRICT wants full|source");
      q.strict = t[1] == "full" ? Strictness::full
                                : Strictness::source_fiber_only;
      strict_seen = true;
    } else if (t[0] == "QV" || t[0] == "QE") {
      if (t.size() != 4)
        throw ParseError(no, t[0] + " wants <level> <src-id> <dst-id>");
      int lvl = parse_level(no, t[1]);
      if (t[0] == "QV") {
        if (lvl > src.depth() || lvl > dst.depth())
          throw ParseError(no, "level outside the diagrams");
        int a = src.vertex_index(lvl, t[2]);
        int b = dst.vertex_index(lvl, t[3]);
        if (a < 0) throw ParseError(no, "unknown source vertex '" + t[2] + "'");
        if (b < 0) throw ParseError(no, "unknown target vertex '" + t[3] + "'");
        q.vmap[lvl][a] = b;
      } else {
        if (lvl < 1 || lvl > src.depth() || lvl > dst.depth())
          throw ParseError(no, "level outside the diagrams");
        int a = src.edge_index(lvl, t[2]);
        int b = dst.edge_index(lvl, t[3]);
        if (a < 0) throw ParseError(no, "unknown source edge '" + t[2] + "'");
        if (b < 0) throw ParseError(no, "unknown target edge '" + t[3] + "'");
        q.emap[lvl - 1][a] = b;
      }
    } else {
      throw ParseError(no, "unknown directive '" + t[0] + "'");
    }
  }
  if (!strict_seen) throw ParseError(1, "missing STRICT header");
  for (size_t n = 0; n < q.vmap.size(); ++n)
    for (size_t i = 0; i < q.vmap[n].size(); ++i)
      if (q.vmap[n][i] < 0)
        throw ParseError(1, "vertex " + src.verts[n][i] + " has no image");
  for (size_t n = 0; n < q.emap.size(); ++n)
    for (size_t i = 0; i < q.emap[n].size(); ++i)
      if (q.emap[n][i] < 0)
        throw ParseError(1, "edge " + src.edges[n][i].id + " has no image");
  return q;
}

std::string emit_quotient(const Diagram& src, const Diagram& dst,
                          const Quotient& q) {
  std::ostringstream out;
  out << "STRICT "
      << (q.strict == Strictness::full ? "full" : "source") << "\n";
  for (size_t n = 0; n < q.vmap.size(); ++n)
    for (size_t i = 0; i < q.vmap[n].size(); ++i)
      out << "QV " << n << " " << src.verts[n][i] << " "
          << dst.verts[n][q.vmap[n][i]] << "\n";
  for (size_t n = 0; n < q.emap.size(); ++n)
    for (size_t i = 0; i < q.emap[n].size(); ++i)
      out << "QE " << n + 1 << " " << src.edges[n][i].id << " "
          << dst.edges[n][q.emap[n][i]].id << "\n";
  return out.str();
}

namespace {

EqRel relation_from_lines(
    const std::vector<std::string>& points,
    const std::vector<std::vector<std::string>>& classes, int no) {
  try {
    return EqRel::from_classes(points, classes);
  } catch (const std::exception& e) {
    throw ParseError(no, e.what());
  }
}

} // namespace

EqRel parse_relation(const std::string& text) {
  std::vector<std::string> points;
  std::vector<std::vector<std::string>> classes;
  int last = 1;
  for (const auto& [no, t] : tokenize(text)) {
    last = no;
    if (t[0] == "P") {
      if (t.size() != 2) throw ParseError(no, "P wants <id>");
      points.push_back(t[1]);
    } else if (t[0] == "C") {
      if (t.size() < 2) throw ParseError(no, "C wants at least one point");
      classes.emplace_back(t.begin() + 1, t.end());
    } else {
      throw ParseError(no, "unknown directive '" + t[0] + "'");
    }
  }
  if (points.empty()) throw ParseError(last, "no P lines");
  return relation_from_lines(points, classes, last);
}

std::string emit_relation(const EqRel& r) {
  std::ostringstream out;
  for (const auto& p : r.points) out << "P " << p << "\n";
  for (const auto& cls : r.classes())
    if (cls.size() > 1) {
      out << "C";
      for (int x : cls) out << " " << r.points[x];
      out << "\n";
    }
  return out.str();
}

std::vector<EqRel> parse_chain(const std::string& text) {
  std::vector<std::string> points;
  std::vector<std::vector<std::vector<std::string>>> sections;
  int last = 1;
  for (const auto& [no, t] : tokenize(text)) {
    last = no;
    if (t[0] == "P") {
      if (t.size() != 2) throw ParseError(no, "P wants <id>");
      if (!sections.empty())
        throw ParseError(no, "P lines must precede the CHAIN sections");
      points.push_back(t[1]);
    } else if (t[0] == "CHAIN") {
      if (t.size() != 2 ||
          parse_level(no, t[1]) != static_cast<int>(sections.size()))
        throw ParseError(no, "CHAIN sections must be numbered from 0");
      sections.emplace_back();
    } else if (t[0] == "C") {
      if (sections.empty()) throw ParseError(no, "C line before any CHAIN");
      if (t.size() < 2) throw ParseError(no, "C wants at least one point");
      sections.back().emplace_back(t.begin() + 1, t.end());
    } else {
      throw ParseError(no, "unknown directive '" + t[0] + "'");
    }
  }
  if (points.empty()) throw ParseError(last, "no P lines");
  if (sections.empty()) throw ParseError(last, "no CHAIN sections");
  std::vector<EqRel> chain;
  for (const auto& sec : sections)
    chain.push_back(relation_from_lines(points, sec, last));
  return chain;
}

std::string emit_chain(const std::vector<EqRel>& chain) {
  std::ostringstream out;
  if (chain.empty()) return "";
  for (const auto& p : chain[0].points) out << "P " << p << "\n";
  for (size_t k = 0; k < chain.size(); ++k) {
    out << "CHAIN " << k << "\n";
    for (const auto& cls : chain[k].classes())
      if (cls.size() > 1) {
        out << "C";
        for (int x : cls) out << " " << chain[k].points[x];
        out << "\n";
      }
  }
  return out.str();
}

ActionFile parse_action(const std::string& text) {
  ActionFile af;
  std::map<std::string, int> pos;
  for (const auto& [no, t] : tokenize(text)) {
    if (t[0] == "P") {
      if (t.size() != 2) throw ParseError(no, "P wants <id>");
      if (!pos.emplace(t[1], static_cast<int>(af.points.size())).second)
        throw ParseError(no, "duplicate point '" + t[1] + "'");
      af.points.push_back(t[1]);
    } else if (t[0] == "G") {
      std::string body;
      for (size_t i = 1; i < t.size(); ++i) body += t[i] + " ";
      std::vector<int> perm(af.points.size());
      for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      size_t i = 0;
      while (i < body.size()) {
        while (i < body.size() && (body[i] == ' ')) ++i;
        if (i >= body.size()) break;
        if (body[i] != '(') throw ParseError(no, "expected '(' in cycle");
        size_t close = body.find(')', i);
        if (close == std::string::npos)
          throw ParseError(no, "unclosed cycle");
        std::istringstream cs(body.substr(i + 1, close - i - 1));
        std::vector<int> cyc;
        std::string name;
        while (cs >> name) {
          auto it = pos.find(name);
          if (it == pos.end())
            throw ParseError(no, "unknown point '" + name + "'");
          cyc.push_back(it->second);
        }
        for (size_t k = 0; k < cyc.size(); ++k)
          perm[cyc[k]] = cyc[(k + 1) % cyc.size()];
        i = close + 1;
      }
      af.generators.push_back(std::move(perm));
    } else {
      throw ParseError(no, "unknown directive '" + t[0] + "'");
    }
  }
  if (af.points.empty()) throw ParseError(1, "no P lines");
  return af;
}

Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int p(text.substr(0, slash)), q(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rat(p, q);
  } catch (const std::exception&) {
    throw ParseError(1, "bad rational '" + text + "'");
  }
}

std::string emit_dot(const Diagram& d, const Subdiagram* highlight) {
  std::ostringstream out;
  out << "digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n";
  auto node = [](int n, const std::string& id) {
    return "\"L" + std::to_string(n) + ":" + id + "\"";
  };
  for (size_t n = 0; n < d.verts.size(); ++n) {
    out << "  { rank=same;";
    for (const auto& v : d.verts[n])
      out << " " << node(static_cast<int>(n), v) << ";";
    out << " }\n";
    for (const auto& v : d.verts[n])
      out << "  " << node(static_cast<int>(n), v) << " [label=\"" << v
          << "\"];\n";
  }
  for (size_t n = 1; n < d.verts.size(); ++n)
    for (size_t e = 0; e < d.edges[n - 1].size(); ++e) {
      const auto& ed = d.edges[n - 1][e];
      bool hot = highlight && highlight->contains(static_cast<int>(n),
                                                  static_cast<int>(e));
      out << "  " << node(static_cast<int>(n) - 1, ed.src) << " -> "
          << node(static_cast<int>(n), ed.dst) << " [label=\"" << ed.id
          << "\"" << (hot ? ", style=bold, penwidth=2" : "") << "];\n";
    }
  out << "}\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

} // namespace brat::io
