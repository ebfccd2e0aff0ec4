#include "brat/commands.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "brat/absorption.hpp"
#include "brat/af.hpp"
#include "brat/fixtures.hpp"
#include "brat/io.hpp"
#include "brat/transforms.hpp"

namespace brat {

namespace {

void out_or_file(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    io::write_file(path, text);
}

int stage_line(const std::string& name, bool pass, const std::string& detail) {
  std::cout << "STAGE " << name << (pass ? " PASS " : " FAIL ") << detail
            << "\n";
  return pass ? 0 : 1;
}

// The deterministic two-point absorption pipeline backing the absorption
// subcommands.
struct Pipeline {
  EqRel k;
  TransverseDiagrams td;
  Diagram host;
  Embedding yemb;
  AbsorptionScaffold sc;
};

Pipeline make_pipeline(int depth, unsigned seed) {
  Pipeline p;
  auto g = relation_from_group_action({"y1", "y2"}, {{1, 0}});
  if (!g.ok) throw AbsorptionError(g.reason);
  p.k = g.orbits;
  std::vector<EqRel> chain(depth + 1, EqRel::discrete({"y1", "y2"}));
  p.td = transverse_diagrams(chain, p.k);
  if (!p.td.report.ok()) throw AbsorptionError(p.td.report.joined());
  std::tie(p.host, p.yemb) = demo_host(p.td.d.d);
  p.sc = plant_replicas(p.host, p.yemb, p.td.d.d, p.td.dprime.d, p.td.q, seed);
  return p;
}

std::vector<long> parse_longs(const std::string& csv) {
  std::vector<long> out;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stol(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Bratteli diagram and finite equivalence relation toolkit"};
  app.require_subcommand(1);

  std::string in_file, in_file2, sub_file, out_file, out_d, out_dp, out_q;
  std::string cuts_csv, cap_a_csv, cap_b_csv, eps_str = "1/1048576";
  std::string demo_kind;
  int level = 1, depth = 6, star_level = -1;
  unsigned seed = 0;
  int step_budget = kDefaultStepBudget;
  long enum_cap = kDefaultEnumCap;
  std::vector<int> skip_k;

  auto* validate = app.add_subcommand("validate", "check a diagram file");
  validate->add_option("file", in_file)->required();

  auto* paths = app.add_subcommand("paths", "path counts per vertex");
  paths->add_option("file", in_file)->required();
  paths->add_option("--level", level)->required();
  paths->add_option("--enum-cap", enum_cap);

  auto* tel = app.add_subcommand("telescope", "contract between cut levels");
  tel->add_option("file", in_file)->required();
  tel->add_option("--cuts", cuts_csv)->required();
  tel->add_option("--out", out_file);

  auto* mic = app.add_subcommand("microscope", "split one level in two");
  mic->add_option("file", in_file)->required();
  mic->add_option("--level", level)->required();
  mic->add_option("--out", out_file);

  auto* cap = app.add_subcommand("capacity", "meet vertex/multiplicity bounds");
  cap->add_option("file", in_file)->required();
  cap->add_option("--cap-a", cap_a_csv)->required();
  cap->add_option("--cap-b", cap_b_csv)->required();
  cap->add_option("--step-budget", step_budget);
  cap->add_option("--out", out_file);

  auto* simple = app.add_subcommand("simple", "positivity windows");
  simple->add_option("file", in_file)->required();

  auto* thin = app.add_subcommand("thin", "subdiagram thinness bound");
  thin->add_option("file", in_file)->required();
  thin->add_option("--sub", sub_file)->required();
  thin->add_option("--depth", depth)->required();
  thin->add_option("--eps", eps_str);

  auto* rjoin = app.add_subcommand("rel-join", "join of two relations");
  rjoin->add_option("r", in_file)->required();
  rjoin->add_option("s", in_file2)->required();
  rjoin->add_option("--out", out_file);

  auto* rtrans = app.add_subcommand("rel-transversal", "transversality check");
  rtrans->add_option("r", in_file)->required();
  rtrans->add_option("s", in_file2)->required();

  auto* rfilt = app.add_subcommand("rel-filtration", "transverse cores");
  rfilt->add_option("chain", in_file)->required();
  rfilt->add_option("s", in_file2)->required();
  rfilt->add_option("--out", out_file);

  auto* raction = app.add_subcommand("rel-from-action", "orbit relation");
  raction->add_option("file", in_file)->required();
  raction->add_option("--out", out_file);

  auto* bdiag = app.add_subcommand("build-diagram", "diagram of a chain");
  bdiag->add_option("chain", in_file)->required();
  bdiag->add_option("--out", out_file);

  auto* tbuild = app.add_subcommand("transverse-build", "paired diagrams");
  tbuild->add_option("chain", in_file)->required();
  tbuild->add_option("s", in_file2)->required();
  tbuild->add_option("--out-d", out_d);
  tbuild->add_option("--out-dprime", out_dp);
  tbuild->add_option("--out-q", out_q);

  auto* plant = app.add_subcommand("plant", "spine and replicas (two-point)");
  plant->add_option("--depth", depth);
  plant->add_option("--seed", seed);

  auto* absorb = app.add_subcommand("absorb", "rewrite (two-point)");
  absorb->add_option("--depth", depth);
  absorb->add_option("--seed", seed);
  absorb->add_option("--out", out_file);

  auto* alpha = app.add_subcommand("alpha", "shift map (two-point)");
  alpha->add_option("--depth", depth);
  alpha->add_option("--seed", seed);

  auto* vstar = app.add_subcommand("verify-star", "closure check (two-point)");
  vstar->add_option("--depth", depth);
  vstar->add_option("--seed", seed);
  vstar->add_option("--level", star_level);
  vstar->add_option("--skip-k", skip_k);

  auto* demo = app.add_subcommand("demo", "end-to-end pipeline");
  demo->add_option("kind", demo_kind)->required();
  demo->add_option("--depth", depth);
  demo->add_option("--level", star_level);

  auto* dot = app.add_subcommand("dot", "DOT export");
  dot->add_option("file", in_file)->required();
  dot->add_option("--sub", sub_file);
  dot->add_option("--out", out_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      auto rep = validate_diagram(d);
      return stage_line("validate", rep.ok(),
                        rep.ok() ? "depth " + std::to_string(d.depth())
                                 : rep.joined());
    }
    if (paths->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      auto pc = count_paths(d, level);
      for (size_t v = 0; v < pc.counts.size(); ++v)
        std::cout << "COUNT " << d.vs(level)[v] << " " << pc.counts[v].str()
                  << "\n";
      std::cout << "TOTAL " << pc.total().str() << "\n";
      return 0;
    }
    if (tel->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      std::vector<int> cuts;
      for (long c : parse_longs(cuts_csv)) cuts.push_back(static_cast<int>(c));
      auto [t, rm] = telescope(d, cuts);
      out_or_file(out_file, io::emit_diagram(t));
      return 0;
    }
    if (mic->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      auto [m, rm] = microscope(d, level);
      out_or_file(out_file, io::emit_diagram(m));
      return 0;
    }
    if (cap->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      CapacityRequest req{parse_longs(cap_a_csv), parse_longs(cap_b_csv)};
      auto [r, rm] = ensure_capacity(d, req, step_budget);
      out_or_file(out_file, io::emit_diagram(r));
      auto rep = check_capacity(r, req);
      return stage_line("capacity", rep.ok(),
                        rep.ok() ? "depth " + std::to_string(r.depth())
                                 : rep.joined());
    }
    if (simple->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      auto sw = simplicity_window(d);
      for (size_t n = 0; n < sw.window.size(); ++n)
        std::cout << "WINDOW " << n << " " << sw.window[n] << "\n";
      return stage_line("simple", sw.ok(),
                        sw.ok() ? "windows at every level"
                                : std::to_string(sw.failed_levels.size()) +
                                      " levels without a window");
    }
    if (thin->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      auto s = io::parse_subdiagram(io::read_file(sub_file), d);
      Rat eps = io::parse_rational(eps_str);
      Rat bound = thinness_bound(d, s, depth);
      return stage_line("thin", bound <= eps, bound.str());
    }
    if (rjoin->parsed()) {
      auto r = io::parse_relation(io::read_file(in_file));
      auto s = io::parse_relation(io::read_file(in_file2));
      out_or_file(out_file, io::emit_relation(join(r, s)));
      return 0;
    }
    if (rtrans->parsed()) {
      auto r = io::parse_relation(io::read_file(in_file));
      auto s = io::parse_relation(io::read_file(in_file2));
      auto tr = find_transversal(r, s);
      if (!tr.ok) {
        std::string detail = tr.reason;
        if (tr.bad)
          detail += " at (" + r.points[tr.bad->first] + "," +
                    r.points[tr.bad->second] + ")";
        return stage_line("transversal", false, detail);
      }
      auto sizes = class_size_check(r, s);
      return stage_line("transversal", sizes.ok(),
                        sizes.ok() ? std::to_string(tr.witness.h.size()) +
                                         " composable pairs"
                                   : sizes.joined());
    }
    if (rfilt->parsed()) {
      auto chain = io::parse_chain(io::read_file(in_file));
      auto s = io::parse_relation(io::read_file(in_file2));
      auto tr = find_transversal(chain.back(), s);
      if (!tr.ok) return stage_line("filtration", false, tr.reason);
      auto cores = transverse_filtration(chain, s, tr.witness);
      out_or_file(out_file, io::emit_chain(cores));
      return stage_line("filtration", true,
                        std::to_string(cores.size()) + " levels");
    }
    if (raction->parsed()) {
      auto af = io::parse_action(io::read_file(in_file));
      auto g = relation_from_group_action(af.points, af.generators);
      if (!g.ok)
        return stage_line("action", false,
                          g.reason + " (" +
                              (g.fixed_point >= 0 ? af.points[g.fixed_point]
                                                  : "") +
                              " fixed by " + g.fixing_element + ")");
      out_or_file(out_file, io::emit_relation(g.orbits));
      return stage_line("action", true,
                        std::to_string(g.orbits.class_count()) + " orbits");
    }
    if (bdiag->parsed()) {
      auto chain = io::parse_chain(io::read_file(in_file));
      auto fd = diagram_from_filtration(chain);
      out_or_file(out_file, io::emit_diagram(fd.d));
      return 0;
    }
    if (tbuild->parsed()) {
      auto chain = io::parse_chain(io::read_file(in_file));
      auto s = io::parse_relation(io::read_file(in_file2));
      auto td = transverse_diagrams(chain, s);
      if (!out_d.empty()) io::write_file(out_d, io::emit_diagram(td.d.d));
      if (!out_dp.empty())
        io::write_file(out_dp, io::emit_diagram(td.dprime.d));
      if (!out_q.empty())
        io::write_file(out_q, io::emit_quotient(td.d.d, td.dprime.d, td.q));
      return stage_line("transverse-build", td.report.ok(),
                        td.report.ok()
                            ? "depth " + std::to_string(td.d.d.depth()) +
                                  (td.shifted ? ", chain shifted" : "")
                            : td.report.joined());
    }
    if (plant->parsed()) {
      auto p = make_pipeline(depth, seed);
      std::cout << "SPINE";
      for (size_t n = 0; n < p.sc.spine.size(); ++n)
        std::cout << " " << p.host.es(static_cast<int>(n) + 1)[p.sc.spine[n]].id;
      std::cout << "\n";
      return stage_line("plant", true,
                        std::to_string(p.sc.replicas.size()) +
                            " replicas, thinness " + p.sc.thin_lp.str());
    }
    if (absorb->parsed()) {
      auto p = make_pipeline(depth, seed);
      auto res = build_absorption_diagram(p.sc);
      out_or_file(out_file, io::emit_diagram(res.rewritten));
      return stage_line("absorb", true,
                        std::to_string(res.rewritten.vs(depth).size()) +
                            " terminal vertices");
    }
    if (alpha->parsed()) {
      auto p = make_pipeline(depth, seed);
      auto res = build_absorption_diagram(p.sc);
      auto ar = shift_map_alpha(res, p.sc, p.k, p.td.d.coding);
      return stage_line("alpha", ar.report.ok(),
                        ar.report.ok()
                            ? std::to_string(ar.graph.size()) + " paths"
                            : ar.report.joined());
    }
    if (vstar->parsed()) {
      auto p = make_pipeline(depth, seed);
      auto res = build_absorption_diagram(p.sc);
      int lvl = star_level < 0 ? std::max(1, depth - 2) : star_level;
      auto sr = verify_star(res, p.sc, lvl, skip_k);
      std::cout << "MARGIN " << sr.min_margin << " " << depth << "\n";
      for (const auto& w : sr.unreached) std::cout << "UNREACHED " << w << "\n";
      std::string detail = std::string(sr.sound ? "sound" : "unsound") +
                           ", level " + std::to_string(lvl) +
                           (sr.complete ? " complete" : " incomplete");
      if (!sr.report.ok()) detail += ": " + sr.report.joined();
      return stage_line("star", sr.sound && sr.complete, detail);
    }
    if (demo->parsed()) {
      if (demo_kind != "two-point") {
        std::cerr << "unknown demo '" << demo_kind << "'\n";
        return 2;
      }
      auto dr = two_point_demo(depth, star_level);
      for (const auto& st : dr.stages)
        stage_line(st.name, st.pass, st.detail);
      std::cout << "MARGIN " << dr.margin << " " << depth << "\n";
      return dr.all_pass() ? 0 : 1;
    }
    if (dot->parsed()) {
      auto d = io::parse_diagram(io::read_file(in_file));
      std::optional<Subdiagram> s;
      if (!sub_file.empty())
        s = io::parse_subdiagram(io::read_file(sub_file), d);
      out_or_file(out_file, io::emit_dot(d, s ? &*s : nullptr));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

} // namespace brat
