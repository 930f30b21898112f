#pragma once

// Shared set-ups for the unit tests and the acceptance runner.

#include <memory>

#include "fireret/analysis.hpp"
#include "fireret/cayley.hpp"
#include "fireret/game.hpp"
#include "fireret/strategies.hpp"
#include "fireret/transport.hpp"

namespace scenarios {

using namespace fireret;

inline GameConfig config(std::size_t reach, std::size_t horizon) {
  GameConfig c;
  c.reach = reach;
  c.horizon = horizon;
  return c;
}

/// Z^2 (standard generators) paired with Z^2 (x, y, xy) on the same vertex
/// set, identity maps, c = 2.
struct Z2Pair {
  std::shared_ptr<CayleyBall> ball;
  std::shared_ptr<const Graph> g;
  std::shared_ptr<const Graph> h;
  QIPair pair;
};

inline Z2Pair z2_pair(std::size_t radius) {
  Z2Pair p;
  p.ball = std::make_shared<CayleyBall>(cayley_ball(parse_model("Z^d:2"), radius));
  p.g = std::shared_ptr<const Graph>(p.ball, &p.ball->graph);
  p.h = std::make_shared<const Graph>(companion_graph(*p.ball, *parse_model("Z2alt")));
  p.pair = label_correspondence(p.g, p.h, 2);
  return p;
}

/// Source: one-shot wall on the x-axis direction played at reach 1, then
/// compressed to reach 2c. Target: the transported strategy at reach 1.
struct TransportRun {
  Z2Pair z;
  std::size_t q = 2;
  Vertex h0 = 0;
  VertexSet wall;
  GameTranscript source_reach1;
  GameTranscript source;
  GameTranscript target;
};

inline TransportRun z2_transport(std::size_t radius = 56, std::size_t horizon = 12, std::size_t q = 2) {
  TransportRun r;
  r.z = z2_pair(radius);
  r.q = q;
  const auto& pair = r.z.pair;
  const Graph& g = *r.z.g;
  const Graph& h = *r.z.h;
  r.h0 = h.at("(0,0)");
  const VertexSet x0 = ball(g, g.set_of({pair.psi[r.h0]}), 2 * pair.c * (q + 2));

  WallOptions opt;
  opt.require_finite = false;
  auto wall = one_shot_wall(*r.z.ball, r.z.ball->model->require_subgroup("coord0"), 0, x0, opt);
  r.wall = wall.wall();
  r.source_reach1 = sanitize_strategy(g, run_game(g, x0, wall, config(1, 2 * pair.c * horizon)));
  auto [vs, a] = compress_for_reach(r.source_reach1.chosen, r.source_reach1.bound, 2 * pair.c);
  GameConfig sc = config(2 * pair.c, horizon);
  sc.bound = a;
  r.source = run_game(g, x0, ScriptedStrategy(vs, a), sc);

  TransportedStrategy ts(r.source, pair, r.h0, q);
  r.target = run_game(h, ts.target_initial_fire(), ts, config(1, horizon));
  return r;
}

/// F2 radius 8, X0 = {e}, one-shot wall at a^2.
struct F2Run {
  std::shared_ptr<CayleyBall> ball;
  VertexSet wall;
  GameTranscript t;
};

inline F2Run f2_one_shot(std::size_t radius = 8) {
  F2Run r;
  r.ball = std::make_shared<CayleyBall>(cayley_ball(parse_model("F:2"), radius));
  const Graph& g = r.ball->graph;
  WallOptions opt;
  opt.clearance = 1;
  auto s = one_shot_wall(*r.ball, r.ball->model->require_subgroup("trivial"), 0, g.set_of({0}), opt);
  r.wall = s.wall();
  r.t = run_game(g, g.set_of({0}), s, config(1, 2 * radius));
  return r;
}

/// F2 x Z radius 8, C = <t>, X0 = {e}, polynomial wall with d = 1.
struct WallRun {
  std::shared_ptr<CayleyBall> ball;
  std::size_t l = 0;
  WallPlan plan;
  GameTranscript t;
};

inline WallRun f2xz_wall(std::size_t l, std::size_t radius = 8) {
  WallRun r;
  r.ball = std::make_shared<CayleyBall>(cayley_ball(parse_model("F2xZ"), radius));
  r.l = l;
  const Graph& g = r.ball->graph;
  r.plan = choose_wall_translate(*r.ball, r.ball->model->require_subgroup("t"), l, 1, g.set_of({0}));
  WallStrategy s(r.plan);
  r.t = run_game(g, g.set_of({0}), s, config(1, 2 * radius));
  return r;
}

}  // namespace scenarios
