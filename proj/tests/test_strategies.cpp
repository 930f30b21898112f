#include <gtest/gtest.h>

#include "fireret/strategies.hpp"
#include "scenarios.hpp"

using namespace fireret;
using scenarios::config;

namespace {

CayleyBall model_ball(const char* spec, std::size_t r) { return cayley_ball(parse_model(spec), r); }

}  // namespace

TEST(EstimateK1, LineGrowth) {
  auto fz = model_ball("F2xZ", 8);
  EXPECT_EQ(estimate_K1(fz, fz.model->require_subgroup("t"), 0, 1).k1, 3u);
  auto z2 = model_ball("Z^d:2", 8);
  EXPECT_EQ(estimate_K1(z2, z2.model->require_subgroup("coord0"), 0, 1).k1, 3u);
}

TEST(EstimateK1, ThickWall) {
  // From (e,0): |B(n) ∩ L| = (2n+1) + 4(2n-1) = 10n - 3, so the ceiling reaches 10.
  auto fz = model_ball("F2xZ", 8);
  auto est = estimate_K1(fz, fz.model->require_subgroup("t"), 1, 1);
  EXPECT_EQ(est.k1, 10u);
}

TEST(EstimateK1, DegreeTooSmall) {
  auto fz = model_ball("F2xZ", 8);
  try {
    estimate_K1(fz, fz.model->require_subgroup("t"), 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("too small"), std::string::npos);
  }
}

TEST(WallPlan, Schedule) {
  WallPlan p;
  p.degree = 1;
  p.f = 4;
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(p.schedule(n), 4 * n);
  p.degree = 2;
  p.f = 5;
  EXPECT_EQ(p.schedule(3), 60u);
  EXPECT_EQ(p.bound()(3), 30u);
}

TEST(ChooseWallTranslate, F2xZ) {
  auto fz = model_ball("F2xZ", 8);
  const auto t = fz.model->require_subgroup("t");
  const VertexSet x0 = fz.graph.set_of({fz.identity()});

  auto thin = choose_wall_translate(fz, t, 0, 1, x0);
  EXPECT_EQ(thin.translate_label, "(a,0)");
  EXPECT_EQ(thin.k1, 3u);
  EXPECT_EQ(thin.k, 6u);
  EXPECT_EQ(thin.f, 7u);

  auto thick = choose_wall_translate(fz, t, 1, 1, x0);
  EXPECT_EQ(thick.translate_label, "(aa,0)");
  EXPECT_EQ(thick.f, 21u);
  EXPECT_EQ(set_distance(fz.graph, x0, thick.wall), 1u);

  // The a^2 translate of the bare axis sits at distance 2.
  auto a2 = translated_neighborhood(fz, t, 0, fz.vertex("(aa,0)"));
  EXPECT_EQ(set_distance(fz.graph, x0, a2), 2u);

  for (auto* plan : {&thin, &thick}) {
    for (std::size_t i = 1; i < plan->enumeration_distance.size(); ++i)
      EXPECT_LE(plan->enumeration_distance[i - 1], plan->enumeration_distance[i]);
    for (std::size_t n = 1; n < plan->m_sizes.size(); ++n) EXPECT_LT(plan->m_sizes[n], plan->schedule(n));
  }
}

TEST(ChooseWallTranslate, TooSmall) {
  auto fz = model_ball("F2xZ", 2);
  const VertexSet x0 = ball(fz.graph, fz.graph.set_of({fz.identity()}), 1);
  try {
    choose_wall_translate(fz, fz.model->require_subgroup("t"), 0, 1, x0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "truncation too small for wall placement");
  }
  EXPECT_THROW(choose_wall_translate(fz, fz.model->require_subgroup("t"), 0, 0, x0), Error);
}

TEST(WallStrategy, F2xZRunKeepsTheWallAhead) {
  for (std::size_t l : {0u, 1u}) {
    auto run = scenarios::f2xz_wall(l);
    const Graph& g = run.ball->graph;
    const auto& t = run.t;
    VertexSet emitted(g.size());
    for (std::size_t n = 1; n <= t.turns(); ++n) {
      EXPECT_LE(t.protection(n).size(), run.plan.f);
      EXPECT_FALSE(t.protection(n).intersects(t.fire(n - 1)));
      EXPECT_FALSE(t.protection(n).intersects(emitted));
      emitted |= t.protection(n);
    }
    EXPECT_TRUE(emitted.is_subset_of(run.plan.wall));
    // Wall vertices within reach of the fire were protected before it arrived.
    auto dist = bfs_distances(g, t.initial_fire());
    for (Vertex w : run.plan.wall) {
      if (dist[w] > static_cast<std::int64_t>(t.turns())) continue;
      EXPECT_TRUE(t.protected_through(static_cast<std::size_t>(dist[w])).contains(w)) << g.label(w);
    }
    // Past the wall (words starting with the translate's letter) nothing burns.
    auto& prod = dynamic_cast<const ProductModel&>(*run.ball->model);
    for (Vertex v : t.final_fire()) {
      auto w = prod.split(run.ball->elements[v]).first.code;
      EXPECT_TRUE(w.empty() || w[0] != 1) << g.label(v);
    }
    bool safe = false;
    for (auto& comp : deep_components(g, emitted)) safe = safe || !comp.intersects(fire_closure(g, t));
    EXPECT_TRUE(safe);
  }
}

TEST(WallStrategy, BreachIsReported) {
  auto fz = model_ball("F2xZ", 4);
  WallPlan p;
  p.degree = 1;
  p.f = 2;
  p.wall = fz.graph.set_of({fz.identity()});
  p.enumeration = {fz.identity()};
  WallStrategy s(p);
  try {
    run_game(fz.graph, fz.graph.set_of({fz.identity()}), s, config(1, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "wall breached at turn 1");
  }
}

TEST(OneShotWall, FreeGroup) {
  auto f2 = model_ball("F:2", 6);
  const VertexSet x0 = f2.graph.set_of({f2.identity()});
  auto near = one_shot_wall(f2, f2.model->require_subgroup("trivial"), 0, x0);
  EXPECT_EQ(near.wall(), f2.graph.set_of({f2.vertex("a")}));

  auto run = scenarios::f2_one_shot();
  const Graph& g = run.ball->graph;
  EXPECT_EQ(run.wall, g.set_of({run.ball->vertex("aa")}));
  EXPECT_EQ(run.t.protection(1), run.wall);
  std::size_t nonempty = 0;
  for (auto& w : run.t.chosen) nonempty += !w.empty();
  EXPECT_EQ(nonempty, 1u);
  bool safe = false;
  for (auto& comp : deep_components(g, run.wall)) safe = safe || !comp.intersects(run.t.final_fire());
  EXPECT_TRUE(safe);
}

TEST(OneShotWall, InfiniteDihedral) {
  auto d = model_ball("free(C:2,C:2)", 8);
  const VertexSet x0 = d.graph.set_of({d.identity()});
  auto s = one_shot_wall(d, d.model->require_subgroup("factor0"), 0, x0);
  EXPECT_EQ(s.wall().size(), 2u);
  auto t = run_game(d.graph, x0, s, config(1, 16));
  EXPECT_EQ(ends_estimate(d.graph, s.wall()), 2u);
  bool safe = false;
  for (auto& comp : deep_components(d.graph, s.wall())) safe = safe || !comp.intersects(fire_closure(d.graph, t));
  EXPECT_TRUE(safe);
}

TEST(OneShotWall, WideFireSearchesOutward) {
  auto f2 = model_ball("F:2", 6);
  const VertexSet x0 = f2.graph.set_of({f2.vertex("A"), f2.identity(), f2.vertex("a")});
  auto s = one_shot_wall(f2, f2.model->require_subgroup("trivial"), 0, x0);
  EXPECT_EQ(s.wall(), f2.graph.set_of({f2.vertex("aaa")}));
}

TEST(OneShotWall, Preconditions) {
  auto fz = model_ball("F2xZ", 6);
  const VertexSet x0 = fz.graph.set_of({fz.identity()});
  EXPECT_THROW(one_shot_wall(fz, fz.model->require_subgroup("t"), 0, x0), Error);
  WallOptions opt;
  opt.require_finite = false;
  EXPECT_NO_THROW(one_shot_wall(fz, fz.model->require_subgroup("t"), 0, x0, opt));
  auto f2 = model_ball("F:2", 2);
  EXPECT_THROW(one_shot_wall(f2, f2.model->require_subgroup("trivial"), 0, ball(f2.graph, f2.graph.set_of({0}), 1)),
               Error);
}

TEST(Baselines, Empty) {
  auto line = line_truncation(10);
  auto t = run_game(line, line.set_of({line.at("0")}), EmptyStrategy(), config(1, 30));
  for (std::size_t n = 0; n <= t.turns(); ++n) EXPECT_EQ(t.fire(n).size(), 2 * n + 1);
}

TEST(Baselines, GreedyTwoContainsAtOnce) {
  auto line = line_truncation(10);
  auto t = run_game(line, line.set_of({line.at("0")}), GreedyStrategy(2), config(1, 30));
  EXPECT_EQ(t.status, GameStatus::stabilized);
  EXPECT_EQ(t.turns(), 1u);
  EXPECT_EQ(t.final_fire().size(), 1u);
}

TEST(Baselines, GreedyOneClosesTheSecondSide) {
  // One guard per turn: the lower-id side first, then the open front.
  auto line = line_truncation(10);
  auto t = run_game(line, line.set_of({line.at("0")}), GreedyStrategy(1), config(1, 20));
  EXPECT_EQ(t.protection(1), line.set_of({line.at("-1")}));
  EXPECT_EQ(t.protection(2), line.set_of({line.at("2")}));
  EXPECT_EQ(t.status, GameStatus::stabilized);
  EXPECT_EQ(t.final_fire(), line.set_of({line.at("0"), line.at("1")}));
}
