#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lgtk/an.hpp"
#include "lgtk/lafforgue.hpp"
#include "lgtk/monodromy.hpp"
#include "lgtk/monotone_paths.hpp"
#include "lgtk/subdivisions.hpp"

namespace lgtk::cli {

namespace {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- serialization -------------------------------------------------------

json rat_vec(std::span<const Rat> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json int_vec(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

json polytope_json(const Polytope& p, bool faces) {
  json j;
  j["ambient_dim"] = p.ambient_dim();
  j["dim"] = p.dim();
  j["vertices"] = json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(rat_vec(v));
  j["facets"] = json::array();
  for (const auto& f : p.facets()) j["facets"].push_back({{"normal", rat_vec(f.normal)}, {"offset", to_string(f.offset)}});
  j["equations"] = json::array();
  for (const auto& e : p.equations()) j["equations"].push_back({{"normal", rat_vec(e.normal)}, {"offset", to_string(e.offset)}});
  if (faces) j["f_vector"] = p.face_lattice().f_vector();
  return j;
}

json subdivision_json(const Subdivision& s) {
  json cells = json::array();
  for (const auto& c : s.cells) cells.push_back({{"vertices", c.vertices}, {"marked", c.marked}});
  return {{"cells", cells}, {"height", rat_vec(s.height)}};
}

// OFF of a polytope of dimension <= 3, in coordinates of an affine basis.
std::string polytope_off(const Polytope& p) {
  if (p.dim() > 3) throw InputError("OFF output needs dimension <= 3, got " + std::to_string(p.dim()));
  const auto& v = p.vertices();
  std::vector<RatVec> diffs;
  for (const auto& x : v) diffs.push_back(sub(x, v.front()));
  auto reduced = diffs;
  const auto pivots = rref(reduced);
  std::vector<std::array<double, 3>> xyz;
  for (const auto& x : v) {
    std::array<double, 3> c{0, 0, 0};
    for (std::size_t i = 0; i < pivots.size(); ++i) c[i] = x[pivots[i]].get_d();
    xyz.push_back(c);
  }
  std::vector<std::vector<int>> faces;
  auto cycle = [&](const std::vector<int>& members) {
    std::map<int, std::vector<int>> adj;
    const std::set<int> in(members.begin(), members.end());
    for (const auto& [a, b] : p.edges())
      if (in.count(a) && in.count(b)) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    std::vector<int> c{members.front()};
    int prev = -1;
    while (c.size() < members.size()) {
      const auto& nb = adj[c.back()];
      const int next = nb[0] != prev ? nb[0] : nb[1];
      prev = c.back();
      c.push_back(next);
    }
    return c;
  };
  auto centroid = [&](const std::vector<int>& ids) {
    std::array<double, 3> c{0, 0, 0};
    for (int i : ids)
      for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += xyz[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] / static_cast<double>(ids.size());
    return c;
  };
  if (p.dim() == 2) {
    std::vector<int> all(v.size());
    std::iota(all.begin(), all.end(), 0);
    faces.push_back(cycle(all));
  } else if (p.dim() == 3) {
    std::vector<int> all(v.size());
    std::iota(all.begin(), all.end(), 0);
    const auto mid = centroid(all);
    for (const auto& f : p.incidence()) {
      auto c = cycle(f);
      const auto& a = xyz[static_cast<std::size_t>(c[0])];
      const auto& b = xyz[static_cast<std::size_t>(c[1])];
      const auto& d = xyz[static_cast<std::size_t>(c[2])];
      const std::array<double, 3> u{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, w{d[0] - b[0], d[1] - b[1], d[2] - b[2]};
      const std::array<double, 3> n{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
      const auto fc = centroid(f);
      if (n[0] * (fc[0] - mid[0]) + n[1] * (fc[1] - mid[1]) + n[2] * (fc[2] - mid[2]) < 0) std::reverse(c.begin(), c.end());
      faces.push_back(c);
    }
  }
  std::ostringstream os;
  os << "OFF\n" << v.size() << ' ' << faces.size() << ' ' << p.edges().size() << '\n' << std::setprecision(17);
  for (const auto& c : xyz) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (const auto& f : faces) {
    os << f.size();
    for (int i : f) os << ' ' << i;
    os << '\n';
  }
  return os.str();
}

json tree_json(const VanishingTree& t) {
  json edges = json::array();
  for (const auto& e : t.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"label", e.label}, {"stage", e.stage}});
  return edges;
}

json insertion_json(const CyclicInsertion& ins) { return {{"s1", ins.s1}, {"s2", ins.s2}, {"s3", ins.s3}}; }

// ---- input ---------------------------------------------------------------

PointConfiguration read_configuration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw InputError(path + ": expected {\"lattice_rank\": d, \"points\": [...]}");
  std::vector<RatVec> points;
  for (const auto& row : j["points"]) {
    if (!row.is_array()) throw InputError(path + ": each point must be an array");
    RatVec p;
    for (const auto& x : row) {
      if (x.is_number_integer()) p.emplace_back(x.get<long>());
      else if (x.is_string()) p.push_back(parse_rat(x.get<std::string>()));
      else throw InputError(path + ": coordinates must be integers or \"num/den\" strings");
    }
    points.push_back(std::move(p));
  }
  auto config = make_configuration(points);
  if (j.contains("lattice_rank") && j["lattice_rank"].get<std::size_t>() != config.lattice_rank)
    throw InputError(path + ": lattice_rank does not match the points");
  return config;
}

// Interval {0, ..., n+1} in order, or nullopt.
std::optional<int> interval_size(const PointConfiguration& c) {
  if (c.lattice_rank != 1) return std::nullopt;
  for (std::size_t i = 0; i < c.points.size(); ++i)
    if (c.points[i][0] != Rat(static_cast<long>(i))) return std::nullopt;
  return static_cast<int>(c.points.size()) - 2;
}

RatVec sharpening(const PointConfiguration& c, const std::vector<int>& sharpen) {
  if (sharpen.empty()) throw InputError("--sharpen needs at least one point index");
  RatVec g(c.points.size(), Rat(0));
  for (int i : sharpen) {
    if (i < 0 || static_cast<std::size_t>(i) >= g.size()) throw InputError("--sharpen index out of range");
    g[static_cast<std::size_t>(i)] += 1;
  }
  return g;
}

// ---- commands ------------------------------------------------------------

struct Options {
  std::string config, format = "json", output;
  bool faces = false;
  std::vector<int> sharpen, breakpoints;
  int n = 0;
  double s = 0, epsilon = 1e-3, gap_ratio = 3, tolerance = 1e-9;
  std::uint64_t seed = 1;
  int trials = 1;
  unsigned threads = 0;
  bool s_given = false;
};

std::string emit_polytope(const Polytope& p, const json& extra, const Options& o) {
  if (o.format == "off") return polytope_off(p);
  if (o.format != "json") throw InputError("format must be json or off");
  json j = extra;
  j["polytope"] = polytope_json(p, o.faces);
  return j.dump(2) + "\n";
}

std::string cmd_secondary(const Options& o) {
  const auto c = read_configuration(o.config);
  const auto sec = secondary_polytope(c);
  json tri = json::array();
  for (const auto& t : sec.triangulations) tri.push_back(subdivision_json(t));
  return emit_polytope(sec.polytope, {{"triangulations", tri}}, o);
}

std::string cmd_triangulations(const Options& o) {
  const auto c = read_configuration(o.config);
  json out = json::array();
  for (const auto& t : enumerate_regular_triangulations(c)) {
    auto j = subdivision_json(t);
    j["gkz"] = rat_vec(gkz_vector(c, t));
    out.push_back(j);
  }
  return json{{"count", out.size()}, {"triangulations", out}}.dump(2) + "\n";
}

std::string cmd_lafforgue(const Options& o) {
  const auto c = read_configuration(o.config);
  const auto laf = lafforgue_polytope(c);
  json extra = json::object();
  if (const auto n = interval_size(c)) {
    json facets = json::array();
    for (const auto& f : an_pointed_facet_labels(*n, laf))
      facets.push_back({{"normal", int_vec(f.inner_normal)}, {"type", to_string(f.label.type)}, {"index", f.label.index}});
    extra["facets"] = facets;
  }
  return emit_polytope(laf, extra, o);
}

json paths_json(const std::vector<MonotonePath>& paths, const SecondaryPolytope* sec) {
  json out = json::array();
  for (const auto& p : paths) {
    json j{{"vertices", p.vertices}, {"coherent", p.coherent}, {"point", rat_vec(p.point)}};
    if (sec) {
      j["steps"] = json::array();
      for (int v : p.vertices) j["steps"].push_back(subdivision_json(sec->triangulations[static_cast<std::size_t>(v)]));
    }
    out.push_back(j);
  }
  return out;
}

std::string cmd_mpp(const Options& o) {
  const auto c = read_configuration(o.config);
  const auto sec = secondary_polytope(c);
  const auto mpp = monotone_path_polytope(sec.polytope, sharpening(c, o.sharpen));
  return emit_polytope(mpp.polytope, {{"paths", paths_json(mpp.paths, nullptr)}, {"vertex_path", mpp.vertex_path}}, o);
}

std::string cmd_paths(const Options& o) {
  const auto c = read_configuration(o.config);
  const auto sec = secondary_polytope(c);
  const auto mpp = monotone_path_polytope(sec.polytope, sharpening(c, o.sharpen));
  return json{{"paths", paths_json(mpp.paths, &sec)}}.dump(2) + "\n";
}

DegenerationJ degeneration(const Options& o) {
  for (int b : o.breakpoints)
    if (b < 2 || b > o.n) throw InputError("--J takes interior breakpoints in 2..n");
  return make_degeneration(o.n, o.breakpoints);
}

std::string cmd_an_tree(const Options& o) {
  const auto j = degeneration(o);
  const auto ins = canonical_insertions(j);
  const auto tree = vanishing_tree(j, ins);
  if (o.format == "dot") return to_dot(tree);
  if (o.format != "json") throw InputError("format must be json or dot");
  json stages = json::array();
  std::vector<int> counts(static_cast<std::size_t>(j.stages()), 0);
  for (const auto& e : tree.edges) ++counts[static_cast<std::size_t>(e.stage - 1)];
  for (const auto& s : ins) stages.push_back(insertion_json(s));
  json out{{"n", j.n}, {"J", j.k}, {"stages", stages}, {"stage_edge_counts", counts}, {"edges", tree_json(tree)}};
  return out.dump(2) + "\n";
}

std::string cmd_an_quiver(const Options& o) {
  const auto q = quiver_from_J(degeneration(o));
  if (o.format == "dot") return to_dot(q);
  if (o.format != "json") throw InputError("format must be json or dot");
  json arrows = json::array();
  for (const auto& [t, h] : q.arrows()) arrows.push_back({t, h});
  return json{{"n", q.n}, {"orientation", q.o}, {"arrows", arrows}}.dump(2) + "\n";
}

std::string cmd_an_perversity(const Options& o) {
  const auto j = degeneration(o);
  const auto p = perversity(j);
  json out{{"n", j.n}, {"J", j.k}, {"perversity", p}};
  if (j.n <= 6) {
    std::vector<int> shifted(p.size(), 0);
    for (std::size_t i = 1; i < p.size(); ++i) shifted[i] = p[i - 1];
    const auto y = yoneda_dimensions(j);
    const auto ys = yoneda_dimensions(j, shifted);
    out["ext_total"] = y.total;
    out["strong"] = y.strong();
    out["shifted_perversity"] = shifted;
    out["strong_shifted"] = ys.strong();
  }
  return out.dump(2) + "\n";
}

json report_json(const MonodromyReport& r) {
  json stages = json::array();
  for (const auto& st : r.stages) {
    auto j = insertion_json(st.insertion);
    j["stage"] = st.stage;
    j["order"] = st.paths;
    j["cyclic"] = st.cyclic;
    j["edges_match"] = st.edges_match;
    j["cluster_moduli"] = {st.cluster_low, st.cluster_high};
    stages.push_back(j);
  }
  json out{{"n", r.family.j.n}, {"J", r.family.j.k}, {"s", r.family.s}, {"stages", stages},
           {"numeric_tree", tree_json(r.numeric)}, {"match", r.match}, {"min_step", r.min_step}};
  if (r.predicted) out["predicted_tree"] = tree_json(*r.predicted);
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

int cmd_monodromy(const Options& o, std::string& text) {
  const auto j = degeneration(o);
  if (o.trials == 1) {
    const double s = o.s_given ? o.s : choose_s(j, o.seed);
    MonodromyOptions mo;
    mo.epsilon = o.epsilon;
    mo.track.gap_ratio = o.gap_ratio;
    mo.track.tolerance = o.tolerance;
    auto j_out = report_json(analyze_monodromy(regeneration(j, s, o.seed), mo));
    j_out["seed"] = o.seed;
    text = j_out.dump(2) + "\n";
    return j_out["match"].get<bool>() ? kOk : kNumericError;
  }
  const auto rep = verify_theorem(j, o.trials, o.seed, o.threads, o.s_given ? std::optional<double>(o.s) : std::nullopt);
  json out{{"n", j.n},         {"J", j.k},           {"trials", rep.trials},   {"validated", rep.validated},
           {"matched", rep.matched}, {"shuffles", rep.shuffles}, {"s", rep.s}, {"failures", rep.failures}};
  text = out.dump(2) + "\n";
  return rep.failures.empty() ? kOk : kNumericError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secondary, Lafforgue and monotone path polytopes; A_n vanishing trees and monodromy"};
  app.require_subcommand(1);
  Options o;
  app.add_option("-o,--output", o.output, "write the artifact to this file");

  auto with_config = [&](CLI::App* sub, bool off) {
    sub->add_option("config", o.config, "configuration JSON")->required();
    if (off) {
      sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "off"}));
      sub->add_flag("--faces", o.faces, "include the f-vector");
    }
  };
  auto with_j = [&](CLI::App* sub, bool dot) {
    sub->add_option("--n", o.n)->required()->check(CLI::Range(1, 64));
    sub->add_option("--J", o.breakpoints, "interior breakpoints, e.g. 2,4")->delimiter(',');
    if (dot) sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "dot"}));
  };

  auto* secondary = app.add_subcommand("secondary", "secondary polytope with its triangulations");
  with_config(secondary, true);
  auto* triangulations = app.add_subcommand("triangulations", "regular triangulations with GKZ vectors");
  with_config(triangulations, false);
  auto* lafforgue = app.add_subcommand("lafforgue", "Lafforgue polytope");
  with_config(lafforgue, true);
  auto* mpp = app.add_subcommand("mpp", "monotone path polytope of the secondary polytope");
  with_config(mpp, true);
  mpp->add_option("--sharpen", o.sharpen, "point indices of the sharpening set")->delimiter(',')->required();
  auto* paths = app.add_subcommand("paths", "monotone edge paths as triangulation sequences");
  with_config(paths, false);
  paths->add_option("--sharpen", o.sharpen)->delimiter(',')->required();

  auto* an = app.add_subcommand("an", "A_n combinatorics");
  an->require_subcommand(1);
  auto* tree = an->add_subcommand("tree", "vanishing tree of the canonical insertions");
  with_j(tree, true);
  auto* quiver = an->add_subcommand("quiver", "quiver of the degeneration");
  with_j(quiver, true);
  auto* perv = an->add_subcommand("perversity", "perversity and Ext data");
  with_j(perv, false);

  auto* mono = app.add_subcommand("monodromy", "numeric stage insertions of a regenerated pencil");
  with_j(mono, false);
  auto* s_opt = mono->add_option("--s", o.s, "degeneration parameter (default: chosen)")->check(CLI::PositiveNumber);
  mono->add_option("--seed", o.seed);
  mono->add_option("--trials", o.trials)->check(CLI::Range(1, 100000));
  mono->add_option("--epsilon", o.epsilon)->check(CLI::PositiveNumber);
  mono->add_option("--gap-ratio", o.gap_ratio)->check(CLI::Range(1.0, 1e6));
  mono->add_option("--tolerance", o.tolerance)->check(CLI::PositiveNumber);
  mono->add_option("--threads", o.threads, "worker threads (default: LGTK_THREADS or all cores)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  o.s_given = s_opt->count() > 0;

  std::string text;
  int status = kOk;
  try {
    if (secondary->parsed()) text = cmd_secondary(o);
    else if (triangulations->parsed()) text = cmd_triangulations(o);
    else if (lafforgue->parsed()) text = cmd_lafforgue(o);
    else if (mpp->parsed()) text = cmd_mpp(o);
    else if (paths->parsed()) text = cmd_paths(o);
    else if (tree->parsed()) text = cmd_an_tree(o);
    else if (quiver->parsed()) text = cmd_an_quiver(o);
    else if (perv->parsed()) text = cmd_an_perversity(o);
    else if (mono->parsed()) status = cmd_monodromy(o, text);
  } catch (const TrackingError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const SeparationError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::runtime_error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }

  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!(f << text)) {
      err << "cannot write " << o.output << "\n";
      return kInputError;
    }
  }
  return status;
}

}  // namespace lgtk::cli
