#pragma once

// Experiment runner behind the command-line tool: config parsing, game set-up,
// analyses and the on-disk artifact bundle.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fireret/analysis.hpp"
#include "fireret/cayley.hpp"
#include "fireret/game.hpp"
#include "fireret/graph_io.hpp"
#include "fireret/strategies.hpp"
#include "fireret/transport.hpp"

namespace fireret {

/// Keys prefixed with `<id>.` describe the source game of `transport:<id>:..`.
struct SourceConfig {
  std::string model;
  std::string strategy = "empty";
  std::size_t wall_clearance = 0;
  bool wall_require_finite = true;
  std::string map;
};

struct ExperimentConfig {
  std::string model;
  std::string graph;
  std::size_t radius = 0;
  std::string fire;
  std::size_t reach = 1;
  std::string strategy = "empty";
  std::optional<std::string> bound;
  std::size_t horizon = 0;
  std::set<std::string> analysis{"containment"};
  std::size_t c_max = 3;
  std::size_t wall_clearance = 0;
  bool wall_require_finite = true;
  std::vector<std::size_t> snapshot_turns;
  std::string snapshot_format = "svg";
  std::string out;
  std::map<std::string, SourceConfig> sources;
  /// Line on which each key was set.
  std::map<std::string, std::size_t> lines;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::size_t to_size(const std::string& v, const std::string& what) {
  std::size_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw Error(what + " must be a non-negative integer, got '" + v + "'");
  return x;
}

inline bool to_bool(const std::string& v, const std::string& what) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(what + " must be true or false, got '" + v + "'");
}

inline std::vector<std::size_t> to_turns(const std::string& v) {
  std::vector<std::size_t> out;
  if (v.empty()) return out;
  for (auto& s : split(v, ',')) out.push_back(to_size(s, "snapshot turn"));
  return out;
}

struct BallSpec {
  std::string center;
  std::size_t radius = 0;
};

inline std::optional<BallSpec> parse_ball(const std::string& fire) {
  if (!fire.starts_with("ball:")) return std::nullopt;
  const auto rest = fire.substr(5);
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon == 0) throw Error("fire must be ball:<center>:<radius>");
  return BallSpec{rest.substr(0, colon), to_size(rest.substr(colon + 1), "fire radius")};
}

struct StrategySpec {
  std::string kind;
  std::vector<std::string> args;
};

inline StrategySpec parse_strategy(const std::string& s) {
  auto parts = split(s, ':');
  StrategySpec spec{parts[0], {parts.begin() + 1, parts.end()}};
  static const std::map<std::string, std::size_t> arity{
      {"empty", 0}, {"greedy", 1}, {"wall", 3}, {"oneshot", 2}, {"transport", 3}};
  auto it = arity.find(spec.kind);
  if (it == arity.end()) throw Error("unknown strategy '" + s + "'");
  if (spec.args.size() != it->second)
    throw Error("strategy " + spec.kind + " takes " + std::to_string(it->second) + " arguments");
  if (spec.kind == "greedy") to_size(spec.args[0], "greedy budget");
  if (spec.kind == "wall") {
    to_size(spec.args[1], "wall thickness");
    to_size(spec.args[2], "wall degree");
  }
  if (spec.kind == "oneshot") to_size(spec.args[1], "wall thickness");
  if (spec.kind == "transport") {
    if (to_size(spec.args[1], "transport c") < 1) throw Error("transport c must be ≥ 1");
    to_size(spec.args[2], "transport q");
  }
  return spec;
}

}  // namespace detail

/// Flat `key=value` text; several pairs may share a line, `#` starts a
/// comment. `overrides` replace or add keys after parsing (used by sweeps).
inline ExperimentConfig parse_config(const std::string& text,
                                     const std::map<std::string, std::string>& overrides = {}) {
  std::vector<std::tuple<std::string, std::string, std::size_t>> entries;
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error("line " + std::to_string(number) + ": expected key=value, got '" + tok + "'");
      entries.emplace_back(tok.substr(0, eq), tok.substr(eq + 1), number);
    }
  }
  for (auto& [k, v] : overrides) entries.emplace_back(k, v, 0);

  ExperimentConfig cfg;
  bool horizon_set = false;
  for (auto& [key, value, number] : entries) {
    const std::string where = number ? "line " + std::to_string(number) + ": " : "override " + key + ": ";
    try {
      if (auto dot = key.find('.'); dot != std::string::npos) {
        auto& src = cfg.sources[key.substr(0, dot)];
        const auto sub = key.substr(dot + 1);
        if (sub == "model") src.model = value;
        else if (sub == "strategy") src.strategy = value;
        else if (sub == "wall_clearance") src.wall_clearance = detail::to_size(value, key);
        else if (sub == "wall_require_finite") src.wall_require_finite = detail::to_bool(value, key);
        else if (sub == "map") src.map = value;
        else throw Error("unknown key '" + key + "'");
      } else if (key == "model") {
        parse_model(value);
        cfg.model = value;
      } else if (key == "graph") {
        if (value != "line" && value != "grid" && !value.starts_with("file:"))
          throw Error("graph must be line, grid or file:<path>");
        cfg.graph = value;
      } else if (key == "radius") {
        cfg.radius = detail::to_size(value, "radius");
        if (cfg.radius < 1) throw Error("radius must be ≥ 1");
      } else if (key == "fire") {
        detail::parse_ball(value);
        if (value.empty()) throw Error("fire must not be empty");
        cfg.fire = value;
      } else if (key == "reach") {
        cfg.reach = detail::to_size(value, "reach");
        if (cfg.reach < 1) throw Error("reach must be ≥ 1");
      } else if (key == "strategy") {
        detail::parse_strategy(value);
        cfg.strategy = value;
      } else if (key == "bound") {
        Bound::parse(value);
        cfg.bound = value;
      } else if (key == "horizon") {
        cfg.horizon = detail::to_size(value, "horizon");
        if (cfg.horizon < 1) throw Error("horizon must be ≥ 1");
        horizon_set = true;
      } else if (key == "analysis") {
        static const std::set<std::string> known{"containment", "retaining", "ends", "growth",
                                                 "transport-certify"};
        cfg.analysis.clear();
        for (auto& a : detail::split(value, ',')) {
          if (a == "none") continue;
          if (!known.count(a)) throw Error("unknown analysis '" + a + "'");
          cfg.analysis.insert(a);
        }
      } else if (key == "c_max") {
        cfg.c_max = detail::to_size(value, "c_max");
        if (cfg.c_max < 1) throw Error("c_max must be ≥ 1");
      } else if (key == "wall_clearance") {
        cfg.wall_clearance = detail::to_size(value, "wall_clearance");
      } else if (key == "wall_require_finite") {
        cfg.wall_require_finite = detail::to_bool(value, "wall_require_finite");
      } else if (key == "snapshot_turns") {
        cfg.snapshot_turns = detail::to_turns(value);
      } else if (key == "snapshot_format") {
        if (value != "svg" && value != "ascii" && value != "both" && value != "none")
          throw Error("snapshot_format must be svg, ascii, both or none");
        cfg.snapshot_format = value;
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
    cfg.lines[key] = number;
  }

  auto at = [&](const std::string& key) {
    auto it = cfg.lines.find(key);
    return it == cfg.lines.end() ? std::string() : "line " + std::to_string(it->second) + ": ";
  };
  if (cfg.model.empty() == cfg.graph.empty()) throw Error("exactly one of model and graph must be set");
  if (cfg.radius == 0 && !cfg.graph.starts_with("file:")) throw Error("missing required key 'radius'");
  const auto strat = detail::parse_strategy(cfg.strategy);
  if (strat.kind == "transport") {
    auto it = cfg.sources.find(strat.args[0]);
    if (it == cfg.sources.end() || it->second.model.empty())
      throw Error(at("strategy") + "transport source '" + strat.args[0] + "' needs " + strat.args[0] + ".model");
    detail::parse_strategy(it->second.strategy);
    if (detail::parse_strategy(it->second.strategy).kind == "transport")
      throw Error(at("strategy") + "transport sources cannot be transported runs");
    if (cfg.model.empty()) throw Error(at("strategy") + "transport targets need a group model");
    if (cfg.reach != 1) throw Error(at("reach") + "transport targets play at reach 1");
    const auto q = detail::to_size(strat.args[2], "transport q");
    if (cfg.fire.empty()) cfg.fire = "ball:e:" + std::to_string(q);
    auto b = detail::parse_ball(cfg.fire);
    if (!b || b->radius != q) throw Error(at("fire") + "transport target fire must be ball:<h0>:" + strat.args[2]);
  }
  for (auto& [id, src] : cfg.sources) {
    if (src.model.empty()) throw Error("source '" + id + "' needs " + id + ".model");
    if (strat.kind != "transport" || strat.args[0] != id) throw Error("source '" + id + "' is not used by the strategy");
  }
  if (cfg.fire.empty()) throw Error("missing required key 'fire'");
  if (auto b = detail::parse_ball(cfg.fire); b && cfg.radius > 0 && b->radius + cfg.reach >= cfg.radius)
    throw Error(at("fire") + "initial fire radius " + std::to_string(b->radius) + " plus reach leaves no room inside radius " +
                std::to_string(cfg.radius));
  if ((strat.kind == "wall" || strat.kind == "oneshot") && cfg.model.empty())
    throw Error(at("strategy") + "wall strategies need a group model");
  if (!horizon_set) cfg.horizon = std::max<std::size_t>(2 * cfg.radius, 1);
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path,
                                    const std::map<std::string, std::string>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), overrides);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

enum class SnapshotFormat { ascii, svg };

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Concentric BFS layers around the initial fire, evenly spaced by vertex id.
inline std::vector<std::array<double, 2>> radial_layout(const Graph& g, const VertexSet& center) {
  auto dist = bfs_distances(g, center);
  std::int64_t far = 0;
  for (auto d : dist) far = std::max(far, d);
  std::map<std::int64_t, std::vector<Vertex>> layers;
  for (Vertex v = 0; v < g.size(); ++v) layers[dist[v] == kUnreached ? far + 1 : dist[v]].push_back(v);
  std::vector<std::array<double, 2>> xy(g.size());
  for (auto& [r, vs] : layers) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(vs.size());
      const double rr = vs.size() == 1 && r == 0 ? 0.0 : static_cast<double>(r) + (r == 0 ? 0.5 : 0.0);
      xy[vs[i]] = {rr * std::cos(a), rr * std::sin(a)};
    }
  }
  return xy;
}

}  // namespace detail

/// State at the end of `turn`: burned = X_turn, protected = (W_1..W_turn) minus
/// X_turn. ASCII uses '#', '/', '.' and needs an integer grid layout.
inline std::string render_snapshot(const Graph& g, const GameTranscript& t, std::size_t turn,
                                   SnapshotFormat format) {
  if (turn > t.turns())
    throw Error("snapshot turn " + std::to_string(turn) + " beyond the last turn " + std::to_string(t.turns()));
  const VertexSet& burned = t.fire(turn);
  const VertexSet guarded = t.protected_through(turn) - burned;
  std::ostringstream out;
  if (format == SnapshotFormat::ascii) {
    if (!g.grid_layout()) throw Error("ascii snapshots need a grid graph");
    std::map<std::pair<long, long>, char> cell;
    long x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool first = true;
    for (Vertex v = 0; v < g.size(); ++v) {
      const long x = std::lround(g.layout()[v][0]), y = std::lround(g.layout()[v][1]);
      cell[{x, y}] = burned.contains(v) ? '#' : guarded.contains(v) ? '/' : '.';
      if (first || x < x0) x0 = x;
      if (first || x > x1) x1 = x;
      if (first || y < y0) y0 = y;
      if (first || y > y1) y1 = y;
      first = false;
    }
    for (long y = y1; y >= y0; --y) {
      std::string row;
      for (long x = x0; x <= x1; ++x) {
        auto it = cell.find({x, y});
        row += it == cell.end() ? ' ' : it->second;
      }
      while (!row.empty() && row.back() == ' ') row.pop_back();
      out << row << '\n';
    }
    return out.str();
  }

  const bool grid = g.grid_layout();
  const auto xy = g.has_layout() ? g.layout() : detail::radial_layout(g, t.initial_fire());
  const double unit = grid ? 12.0 : 40.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (std::size_t v = 0; v < xy.size(); ++v) {
    lo_x = v ? std::min(lo_x, xy[v][0]) : xy[v][0];
    hi_x = v ? std::max(hi_x, xy[v][0]) : xy[v][0];
    lo_y = v ? std::min(lo_y, xy[v][1]) : xy[v][1];
    hi_y = v ? std::max(hi_y, xy[v][1]) : xy[v][1];
  }
  auto px = [&](double x) { return (x - lo_x + 1) * unit; };
  auto py = [&](double y) { return (hi_y - y + 1) * unit; };
  const double w = (hi_x - lo_x + 2) * unit, h = (hi_y - lo_y + 2) * unit;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(w) << "\" height=\"" << detail::fmt(h)
      << "\" viewBox=\"0 0 " << detail::fmt(w) << ' ' << detail::fmt(h) << "\">\n"
      << "<defs><pattern id=\"hatch\" width=\"4\" height=\"4\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\"><rect width=\"4\" height=\"4\" fill=\"#ffffff\"/>"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"4\" stroke=\"#1f4e9c\" stroke-width=\"2\"/></pattern></defs>\n"
      << "<title>turn " << turn << "</title>\n";
  if (!grid) {
    out << "<g stroke=\"#bbbbbb\" stroke-width=\"1\">\n";
    for (Vertex v = 0; v < g.size(); ++v)
      for (Vertex u : g.neighbors(v))
        if (v < u)
          out << "<line x1=\"" << detail::fmt(px(xy[v][0])) << "\" y1=\"" << detail::fmt(py(xy[v][1])) << "\" x2=\""
              << detail::fmt(px(xy[u][0])) << "\" y2=\"" << detail::fmt(py(xy[u][1])) << "\"/>\n";
    out << "</g>\n";
  }
  out << "<g stroke=\"#444444\" stroke-width=\"0.5\">\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    const char* fill = burned.contains(v) ? "#c0392b" : guarded.contains(v) ? "url(#hatch)" : "#ffffff";
    const double cx = px(xy[v][0]), cy = py(xy[v][1]);
    if (grid)
      out << "<rect x=\"" << detail::fmt(cx - unit / 2) << "\" y=\"" << detail::fmt(cy - unit / 2) << "\" width=\""
          << detail::fmt(unit) << "\" height=\"" << detail::fmt(unit) << "\" fill=\"" << fill << "\"/>\n";
    else
      out << "<circle cx=\"" << detail::fmt(cx) << "\" cy=\"" << detail::fmt(cy) << "\" r=\""
          << detail::fmt(unit * 0.2) << "\" fill=\"" << fill << "\"><title>" << g.label(v) << "</title></circle>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

enum class RunMode { generate, simulate, analyze, transport };

/// Files of one run, keyed by name, plus the verdict that sets the exit code.
struct Bundle {
  std::map<std::string, std::string> files;
  VerdictKind verdict = VerdictKind::inconclusive;
  std::string summary;
  int exit_code = 3;
};

inline int exit_code_for(VerdictKind k) {
  switch (k) {
    case VerdictKind::contained:
    case VerdictKind::retained: return 0;
    case VerdictKind::escaped: return 2;
    case VerdictKind::inconclusive: return 3;
  }
  return 3;
}

namespace detail {

class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  std::string str() const {
    std::string s;
    for (auto& [k, v] : rows_) s += k + ": " + v + "\n";
    return s;
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct Setup {
  std::shared_ptr<CayleyBall> cayley;
  std::shared_ptr<const Graph> graph;
};

inline Setup build_graph(const ExperimentConfig& cfg) {
  Setup s;
  if (!cfg.model.empty()) {
    s.cayley = std::make_shared<CayleyBall>(cayley_ball(parse_model(cfg.model), cfg.radius));
    s.graph = std::shared_ptr<const Graph>(s.cayley, &s.cayley->graph);
  } else if (cfg.graph == "line") {
    s.graph = std::make_shared<const Graph>(line_truncation(static_cast<std::int64_t>(cfg.radius)));
  } else if (cfg.graph == "grid") {
    s.graph = std::make_shared<const Graph>(grid_graph(2 * cfg.radius + 1, 2 * cfg.radius + 1));
  } else {
    const auto path = cfg.graph.substr(5);
    std::ifstream in(path);
    if (!in) throw Error("cannot read graph file '" + path + "'");
    s.graph = std::make_shared<const Graph>(read_adjacency_list(in));
  }
  return s;
}

inline Vertex resolve_vertex(const Graph& g, const CayleyBall* b, const std::string& id) {
  if (auto v = g.find(id)) return *v;
  if (b) return b->vertex(id);
  throw Error("unknown vertex id '" + id + "'");
}

inline VertexSet resolve_fire(const Graph& g, const CayleyBall* b, const std::string& fire) {
  if (auto spec = parse_ball(fire)) return ball(g, g.set_of({resolve_vertex(g, b, spec->center)}), spec->radius);
  VertexSet x(g.size());
  for (auto& id : split(fire, ';')) x.insert(resolve_vertex(g, b, id));
  return x;
}

struct BuiltStrategy {
  std::unique_ptr<Strategy> strategy;
  std::optional<WallPlan> plan;
  std::optional<VertexSet> wall;
};

inline BuiltStrategy build_strategy(const std::string& text, const CayleyBall* b, const VertexSet& x0,
                                    std::size_t clearance, bool require_finite) {
  const auto spec = parse_strategy(text);
  BuiltStrategy out;
  if (spec.kind == "empty") {
    out.strategy = std::make_unique<EmptyStrategy>();
  } else if (spec.kind == "greedy") {
    out.strategy = std::make_unique<GreedyStrategy>(to_size(spec.args[0], "greedy budget"));
  } else {
    if (!b) throw Error("wall strategies need a group model");
    WallOptions opt;
    opt.clearance = clearance;
    opt.require_finite = require_finite;
    const auto sub = b->model->require_subgroup(spec.args[0]);
    const auto l = to_size(spec.args[1], "wall thickness");
    // Degree 0 means a finite subgroup: a single wall suffices.
    if (spec.kind == "wall" && to_size(spec.args[2], "wall degree") > 0) {
      out.plan = choose_wall_translate(*b, sub, l, to_size(spec.args[2], "wall degree"), x0, opt);
      out.strategy = std::make_unique<WallStrategy>(*out.plan);
    } else {
      auto s = one_shot_wall(*b, sub, l, x0, opt);
      out.wall = s.wall();
      out.strategy = std::make_unique<OneShotWall>(std::move(s));
    }
  }
  return out;
}

inline std::string join_turns(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

inline void report_plan(Report& r, const GameTranscript& t, const WallPlan& p) {
  r.add("wall_translate", p.translate_label);
  r.add("wall_size", p.wall.size());
  r.add("wall_K1", p.k1);
  r.add("wall_K", p.k);
  r.add("wall_F", p.f);
  r.add("wall_faithful_horizon", p.faithful_horizon);
  bool schedule_ok = true;
  for (std::size_t n = 1; n < p.m_sizes.size(); ++n) schedule_ok = schedule_ok && p.m_sizes[n] <= p.schedule(n);
  r.add("wall_M_within_schedule", schedule_ok ? "yes" : "no");
  bool ahead = true;
  for (std::size_t n = 1; n <= t.turns(); ++n) ahead = ahead && !t.protection(n).intersects(t.fire(n - 1));
  r.add("wall_ahead_of_fire", ahead ? "yes" : "no");
}

}  // namespace detail

/// Plays the configured game and runs the requested analyses. Output is a
/// pure function of the config.
inline Bundle run_experiment(const ExperimentConfig& cfg, RunMode mode = RunMode::analyze) {
  Bundle bundle;
  detail::Report r;
  const auto strat = detail::parse_strategy(cfg.strategy);
  if (mode == RunMode::transport && strat.kind != "transport")
    throw Error("the transport command needs strategy=transport:<source>:<c>:<q>");

  if (mode == RunMode::generate) {
    auto s = detail::build_graph(cfg);
    std::ostringstream adj;
    write_adjacency_list(adj, *s.graph);
    bundle.files["graph.adj"] = adj.str();
    r.add("model", cfg.model.empty() ? cfg.graph : cfg.model);
    r.add("vertices", s.graph->size());
    r.add("edges", s.graph->edge_count());
    r.add("boundary", s.graph->boundary().size());
    r.add("degree_bound", s.graph->degree_bound());
    if (s.cayley) {
      std::string layers;
      for (std::size_t i = 0; i < s.cayley->layer_sizes.size(); ++i)
        layers += (i ? "," : "") + std::to_string(s.cayley->layer_sizes[i]);
      r.add("sphere_sizes", layers);
    }
    bundle.files["report.txt"] = r.str();
    bundle.verdict = VerdictKind::contained;
    bundle.exit_code = 0;
    bundle.summary = "generated " + std::to_string(s.graph->size()) + " vertices";
    return bundle;
  }

  GameConfig gc;
  gc.reach = cfg.reach;
  gc.horizon = cfg.horizon;
  if (cfg.bound) gc.bound = Bound::parse(*cfg.bound);

  detail::Setup setup;
  GameTranscript t;
  std::optional<WallPlan> plan;
  std::optional<VertexSet> one_shot;
  std::optional<TransportReport> certificate;
  std::optional<QiReport> qi;

  if (strat.kind == "transport") {
    const auto& src = cfg.sources.at(strat.args[0]);
    const auto c = detail::to_size(strat.args[1], "transport c");
    const auto q = detail::to_size(strat.args[2], "transport q");
    auto gb = std::make_shared<CayleyBall>(cayley_ball(parse_model(src.model), cfg.radius));
    auto g = std::shared_ptr<const Graph>(gb, &gb->graph);
    QIPair pair;
    if (src.map.empty()) {
      setup.graph = std::make_shared<const Graph>(companion_graph(*gb, *parse_model(cfg.model)));
      pair = label_correspondence(g, setup.graph, c);
    } else {
      setup.cayley = std::make_shared<CayleyBall>(cayley_ball(parse_model(cfg.model), cfg.radius));
      setup.graph = std::shared_ptr<const Graph>(setup.cayley, &setup.cayley->graph);
      std::ifstream in(src.map);
      if (!in) throw Error("cannot read vertex map '" + src.map + "'");
      pair = read_vertex_map(in, g, setup.graph, c);
    }
    const Graph& h = *setup.graph;
    const auto center = detail::parse_ball(cfg.fire)->center;
    const Vertex h0 = setup.cayley ? detail::resolve_vertex(h, setup.cayley.get(), center)
                                   : detail::resolve_vertex(h, gb.get(), center);
    if (pair.psi[h0] == kNoVertex) throw Error("psi undefined at the target fire centre");
    const VertexSet x0 = ball(*g, g->set_of({pair.psi[h0]}), 2 * c * (q + 2));
    auto built = detail::build_strategy(src.strategy, gb.get(), x0, src.wall_clearance, src.wall_require_finite);
    auto reach1 = sanitize_strategy(*g, run_game(*g, x0, *built.strategy, [&] {
                                      GameConfig s;
                                      s.horizon = 2 * c * cfg.horizon;
                                      return s;
                                    }()));
    auto [vs, a] = compress_for_reach(reach1.chosen, reach1.bound, 2 * c);
    GameConfig sc;
    sc.reach = 2 * c;
    sc.horizon = cfg.horizon;
    sc.bound = a;
    const auto source = run_game(*g, x0, ScriptedStrategy(vs, a), sc);
    TransportedStrategy ts(source, pair, h0, q);
    t = run_game(h, ts.target_initial_fire(), ts, gc);

    std::ostringstream csv;
    write_transcript_csv(csv, *g, source);
    bundle.files["source_transcript.csv"] = csv.str();
    r.add("source_model", src.model);
    r.add("source_strategy", built.strategy->describe());
    r.add("source_status", to_string(source.status));
    r.add("source_turns", source.turns());
    r.add("qi_c", c);
    r.add("qi_delta", pair.delta);
    if (mode == RunMode::transport || cfg.analysis.count("transport-certify")) {
      qi = verify_qi(pair);
      certificate = certify_transport(source, t, pair, q, h0);
    }
  } else {
    setup = detail::build_graph(cfg);
    const VertexSet x0 = detail::resolve_fire(*setup.graph, setup.cayley.get(), cfg.fire);
    auto built =
        detail::build_strategy(cfg.strategy, setup.cayley.get(), x0, cfg.wall_clearance, cfg.wall_require_finite);
    plan = built.plan;
    one_shot = built.wall;
    t = run_game(*setup.graph, x0, *built.strategy, gc);
  }
  const Graph& g = *setup.graph;

  r.add("model", cfg.model.empty() ? cfg.graph : cfg.model);
  r.add("radius", cfg.radius);
  r.add("vertices", g.size());
  r.add("fire", cfg.fire);
  r.add("reach", cfg.reach);
  r.add("strategy", cfg.strategy);
  r.add("bound", t.bound.describe());
  r.add("horizon", cfg.horizon);
  r.add("status", to_string(t.status));
  r.add("turns", t.turns());
  r.add("burned", t.final_fire().size());
  r.add("protected", (t.all_protected() - t.final_fire()).size());
  if (plan) detail::report_plan(r, t, *plan);
  if (one_shot) r.add("wall_size", one_shot->size());

  std::ostringstream csv;
  write_transcript_csv(csv, g, t);
  bundle.files["transcript.csv"] = csv.str();

  const bool analyze = mode != RunMode::simulate;
  const bool judge = !analyze || cfg.analysis.count("containment") || cfg.analysis.count("retaining");
  Verdict verdict = containment_verdict(t);
  if (analyze && cfg.analysis.count("retaining")) verdict = retaining_verdict(g, t, cfg.c_max);
  if (certificate) {
    r.add("qi_verified", qi->pass ? "pass" : "fail: " + qi->first_violation);
    r.add("qi_minimal_c", qi->minimal_c);
    r.add("transport_item1", certificate->item1 ? "pass" : "fail");
    r.add("transport_item2", certificate->item2 ? "pass" : "fail");
    r.add("transport_formula", certificate->formula ? "pass" : "fail");
    r.add("transport_faithful_turns", certificate->turns.size());
    r.add("transport_certificate", certificate->pass ? "pass" : "fail: " + certificate->first_violation);
  }
  const bool certified = !certificate || (certificate->pass && qi->pass);
  if (judge) {
    r.add("verdict", to_string(verdict.kind));
    r.add("verdict_reason", verdict.reason);
    bundle.summary = to_string(verdict.kind);
    if (verdict.domination) {
      r.add("C", verdict.domination->c);
      r.add("domination_range", verdict.domination->n_hi);
      bundle.summary += ", C=" + std::to_string(verdict.domination->c);
    }
    if (verdict.basepoint) r.add("basepoint", g.label(*verdict.basepoint));
    r.add("unburned", verdict.unburned);
    bundle.exit_code = exit_code_for(verdict.kind);
  } else {
    bundle.exit_code = 0;
  }
  if (certificate) {
    bundle.summary += std::string(bundle.summary.empty() ? "" : ", ") + "transport " + (certified ? "certified" : "not certified");
    if (!certified) bundle.exit_code = 3;
  }
  if (analyze && cfg.analysis.count("ends")) r.add("ends", ends_estimate(g, t.all_protected() - t.final_fire()));
  if (analyze && cfg.analysis.count("growth")) {
    auto n_max = distance_to_boundary(g, t.initial_fire()).value_or(g.size());
    const auto beta_g = growth_function(g, t.initial_fire(), n_max);
    std::ostringstream gcsv;
    write_growth_csv(gcsv, beta_g, "G");
    if (verdict.basepoint) {
      const VertexSet u = fire_closure(g, t).complement();
      const auto beta_u = growth_function(g, g.set_of({*verdict.basepoint}), n_max, &u);
      for (std::size_t n = 0; n < beta_u.beta.size(); ++n) gcsv << "U," << n << ',' << beta_u.beta[n] << '\n';
    }
    bundle.files["growth.csv"] = gcsv.str();
    if (beta_g.beta.size() >= 5) {
      try {
        auto fit = degree_fit(beta_g);
        r.add("growth_degree", detail::fmt(fit.degree));
        r.add("growth_exponential", fit.exponential ? "yes" : "no");
      } catch (const Error& e) {
        r.add("growth_degree", std::string("n/a (") + e.what() + ")");
      }
    }
  }

  if (cfg.snapshot_format != "none") {
    std::vector<std::size_t> turns = cfg.snapshot_turns.empty() ? std::vector<std::size_t>{0, t.turns()}
                                                                 : cfg.snapshot_turns;
    std::vector<std::size_t> skipped;
    for (auto n : std::set<std::size_t>(turns.begin(), turns.end())) {
      if (n > t.turns()) {
        skipped.push_back(n);
        continue;
      }
      const auto stem = "snapshot_turn" + std::to_string(n);
      if (cfg.snapshot_format != "ascii") bundle.files[stem + ".svg"] = render_snapshot(g, t, n, SnapshotFormat::svg);
      if (cfg.snapshot_format != "svg" && g.grid_layout())
        bundle.files[stem + ".txt"] = render_snapshot(g, t, n, SnapshotFormat::ascii);
    }
    if (!skipped.empty()) r.add("snapshots_skipped", detail::join_turns(skipped));
  }

  bundle.files["report.txt"] = r.str();
  bundle.verdict = verdict.kind;
  return bundle;
}

/// Writes each file through a temporary name and a rename.
inline void write_bundle(const Bundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (auto& [name, bytes] : b.files) {
    const auto final_path = dir / name;
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error("cannot write '" + tmp.string() + "'");
      out << bytes;
    }
    std::filesystem::rename(tmp, final_path);
  }
}

struct SweepRun {
  std::string id;
  std::map<std::string, std::string> overrides;
  int exit_code = 1;
  std::string summary;
  std::string error;
};

/// Cartesian product of `key -> v1|v2|...`, in key order.
inline std::vector<SweepRun> sweep_grid(const std::map<std::string, std::string>& axes) {
  std::vector<SweepRun> runs(1);
  for (auto& [key, values] : axes) {
    std::vector<SweepRun> next;
    for (auto& run : runs)
      for (auto& v : detail::split(values, '|')) {
        auto r = run;
        r.overrides[key] = v;
        next.push_back(std::move(r));
      }
    runs = std::move(next);
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run%03zu", i);
    runs[i].id = buf;
  }
  return runs;
}

/// Runs every grid point concurrently, each into `out/<id>`, and writes
/// `out/sweep.csv`.
inline std::vector<SweepRun> run_sweep(const std::string& base_text, const std::map<std::string, std::string>& axes,
                                       const std::filesystem::path& out, RunMode mode = RunMode::analyze) {
  auto runs = sweep_grid(axes);
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (auto& run : runs) {
    if (jobs.size() >= width) {
      jobs.front().get();
      jobs.erase(jobs.begin());
    }
    jobs.push_back(std::async(std::launch::async, [&run, &base_text, &out, mode] {
      try {
        auto cfg = parse_config(base_text, run.overrides);
        auto b = run_experiment(cfg, mode);
        write_bundle(b, out / run.id);
        run.exit_code = b.exit_code;
        run.summary = b.summary;
      } catch (const std::exception& e) {
        run.exit_code = 1;
        run.error = e.what();
      }
    }));
  }
  for (auto& j : jobs) j.get();
  std::ostringstream csv;
  csv << "run";
  for (auto& [key, values] : axes) csv << ',' << key;
  csv << ",exit_code,summary\n";
  for (auto& run : runs) {
    csv << run.id;
    for (auto& [key, v] : run.overrides) csv << ',' << detail::csv_field(v);
    csv << ',' << run.exit_code << ',' << detail::csv_field(run.error.empty() ? run.summary : "error: " + run.error) << '\n';
  }
  Bundle index;
  index.files["sweep.csv"] = csv.str();
  write_bundle(index, out);
  return runs;
}

}  // namespace fireret
