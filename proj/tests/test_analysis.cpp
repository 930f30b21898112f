#include <gtest/gtest.h>

#include <cmath>

#include "fireret/analysis.hpp"
#include "scenarios.hpp"

using namespace fireret;
using scenarios::config;

namespace {

GrowthFunction beta_of(const char* model, std::size_t radius) {
  auto b = cayley_ball(parse_model(model), radius);
  return growth_function(b.graph, b.graph.set_of({b.identity()}), radius);
}

GrowthFunction line_growth(std::size_t radius) {
  auto g = line_truncation(static_cast<std::int64_t>(radius));
  return growth_function(g, g.set_of({g.at("0")}), radius);
}

}  // namespace

TEST(GrowthFunction, ClosedForms) {
  auto z2 = beta_of("Z^d:2", 10);
  ASSERT_EQ(z2.faithful_max(), 10u);
  for (std::uint64_t n = 0; n <= 10; ++n) EXPECT_EQ(z2(n), 2 * n * n + 2 * n + 1);
  auto f2 = beta_of("F:2", 7);
  for (std::uint64_t n = 0, p = 1; n <= 7; ++n, p *= 3) EXPECT_EQ(f2(n), 2 * p - 1);
  auto p5 = path_graph(5);
  auto b = growth_function(p5, p5.set_of({0}), 8);
  for (std::uint64_t n = 0; n <= 8; ++n) EXPECT_EQ(b(n), std::min<std::uint64_t>(n + 1, 5));
  EXPECT_THROW(z2(11), Error);
  EXPECT_THROW(growth_function(p5, p5.empty_set(), 3), Error);
}

TEST(GrowthFunction, RestrictedCount) {
  auto g = line_truncation(10);
  VertexSet right(g.size());
  for (int x = 0; x <= 10; ++x) right.insert(g.at(std::to_string(x)));
  auto b = growth_function(g, g.set_of({g.at("0")}), 10, &right);
  for (std::uint64_t n = 0; n <= 10; ++n) EXPECT_EQ(b(n), n + 1);
}

TEST(GrowthDominates, Examples) {
  auto z1 = line_growth(100);
  auto z2 = beta_of("Z^d:2", 30);
  auto up = growth_dominates(z1, z2, 3);
  ASSERT_TRUE(up.has_value());
  EXPECT_EQ(up->c, 1u);
  EXPECT_EQ(growth_dominates(z2, z1, 3), std::nullopt);
  // At n = 30 with C = 3: 1861 > 3 * (2 * 93 + 1) + 3 = 564.
  EXPECT_EQ(z2(30), 1861u);
  EXPECT_EQ(3 * z1(93) + 3, 564u);
  auto self = growth_dominates(z2, z2, 3);
  ASSERT_TRUE(self.has_value());
  EXPECT_EQ(self->c, 1u);
}

TEST(GrowthDominates, RangeShrinksWithC) {
  auto z1 = line_growth(9);
  auto z2 = beta_of("Z^d:2", 30);
  auto d = growth_dominates(z1, z1, 3);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->n_hi, 8u);
  GrowthFunction tiny;
  tiny.beta = {1};
  EXPECT_THROW(growth_dominates(z2, tiny, 3), Error);
}

TEST(GrowthDominates, TransitiveOnCertificates) {
  auto z1 = line_growth(200);
  auto alt = beta_of("Z2alt", 30);
  auto z2 = beta_of("Z^d:2", 60);
  auto a = growth_dominates(z1, alt, 3);
  auto b = growth_dominates(alt, z2, 3);
  auto c = growth_dominates(z1, z2, 9);
  ASSERT_TRUE(a && b && c);
}

TEST(DegreeFit, Examples) {
  auto z2 = degree_fit(beta_of("Z^d:2", 10));
  EXPECT_NEAR(z2.degree, 2.0, 0.1);
  EXPECT_FALSE(z2.exponential);
  EXPECT_NEAR(degree_fit(line_growth(20)).degree, 1.0, 0.1);
  EXPECT_NEAR(degree_fit(beta_of("Z^d:3", 10)).degree, 3.0, 0.15);
  EXPECT_TRUE(degree_fit(beta_of("F:2", 7)).exponential);
  GrowthFunction few;
  few.beta = {1, 3, 5};
  EXPECT_THROW(degree_fit(few), Error);
}

TEST(DegreeFit, MutualDominationAgrees) {
  auto z2 = beta_of("Z^d:2", 40);
  auto alt = beta_of("Z2alt", 40);
  ASSERT_TRUE(growth_dominates(z2, alt, 3));
  ASSERT_TRUE(growth_dominates(alt, z2, 3));
  EXPECT_NEAR(degree_fit(z2).degree, degree_fit(alt).degree, 0.2);
}

TEST(ContainmentVerdict, Examples) {
  auto line = line_truncation(10);
  const VertexSet x0 = line.set_of({line.at("0")});
  auto walled = run_game(line, x0, ScriptedStrategy({line.set_of({line.at("-1"), line.at("1")})}, Bound::constant(2)),
                         config(1, 20));
  EXPECT_EQ(containment_verdict(walled).kind, VerdictKind::contained);
  auto open = run_game(line, x0, EmptyStrategy(), config(1, 20));
  EXPECT_EQ(containment_verdict(open).kind, VerdictKind::escaped);
  auto slow = run_game(line_truncation(100), line_truncation(100).set_of({100}), EmptyStrategy(), config(1, 5));
  EXPECT_EQ(containment_verdict(slow).kind, VerdictKind::inconclusive);
}

TEST(RetainingVerdict, FreeGroupOneShot) {
  auto run = scenarios::f2_one_shot();
  const Graph& g = run.ball->graph;
  auto v = retaining_verdict(g, run.t, 3);
  ASSERT_EQ(v.kind, VerdictKind::retained) << v.reason;
  ASSERT_TRUE(v.domination.has_value());
  EXPECT_LE(v.domination->c, 2u);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_FALSE(v.witness->intersects(fire_closure(g, run.t)));
  for (std::size_t n = 0; n <= run.t.turns(); ++n) EXPECT_FALSE(v.witness->intersects(run.t.fire(n)));
  // U is the subtree at a^2: |B(a^2, n) ∩ U| = (3^(n+1) - 1) / 2.
  const VertexSet u = fire_closure(g, run.t).complement();
  auto beta_u = growth_function(g, g.set_of({*v.basepoint}), 8, &u);
  for (std::uint64_t n = 0, p = 3; n <= beta_u.faithful_max(); ++n, p *= 3) EXPECT_EQ(beta_u(n), (p - 1) / 2);
}

TEST(RetainingVerdict, EmptyStrategyEscapes) {
  auto b = cayley_ball(parse_model("F:2"), 6);
  auto t = run_game(b.graph, b.graph.set_of({0}), EmptyStrategy(), config(1, 12));
  EXPECT_EQ(retaining_verdict(b.graph, t, 3).kind, VerdictKind::escaped);
}

TEST(RetainingVerdict, ContainedRunIsRetained) {
  auto line = line_truncation(20);
  auto t = run_game(line, line.set_of({line.at("0")}),
                    ScriptedStrategy({line.set_of({line.at("-1"), line.at("1")})}, Bound::constant(2)), config(1, 20));
  auto v = retaining_verdict(line, t, 3);
  ASSERT_EQ(v.kind, VerdictKind::retained) << v.reason;
  EXPECT_EQ(v.domination->c, 1u);
}

TEST(RetainingVerdict, WallRunsOnF2xZ) {
  for (std::size_t l : {0u, 1u}) {
    auto run = scenarios::f2xz_wall(l);
    auto v = retaining_verdict(run.ball->graph, run.t, 3);
    EXPECT_EQ(v.kind, VerdictKind::retained) << v.reason;
  }
}

TEST(EndsEstimate, Examples) {
  auto line = line_truncation(5);
  EXPECT_EQ(ends_estimate(line, line.set_of({line.at("0")})), 2u);
  auto f2 = cayley_ball(parse_model("F:2"), 5);
  EXPECT_EQ(ends_estimate(f2.graph, f2.graph.set_of({0})), 4u);
  auto z2 = cayley_ball(parse_model("Z^d:2"), 6);
  EXPECT_EQ(ends_estimate(z2.graph, z2.graph.set_of({z2.vertex("(0,0)")})), 1u);
}

TEST(CoarseSeparation, Examples) {
  auto fz = cayley_ball(parse_model("F2xZ"), 8);
  auto axis = subgroup_neighborhood(fz, fz.model->require_subgroup("t"), 0);
  EXPECT_TRUE(coarse_separation_check(fz.graph, axis, 1));
  auto z2 = cayley_ball(parse_model("Z^d:2"), 8);
  EXPECT_FALSE(coarse_separation_check(z2.graph, z2.graph.set_of({0}), 1));
  auto line = line_truncation(5);
  EXPECT_TRUE(coarse_separation_check(line, line.set_of({line.at("0")}), 2));
  EXPECT_THROW(coarse_separation_check(line, line.set_of({line.at("0")}), 5), Error);
  EXPECT_THROW(coarse_separation_check(path_graph(4), path_graph(4).set_of({1}), 1), Error);
}

TEST(TranslationWitness, FreeGroupWall) {
  auto run = scenarios::f2_one_shot(9);
  const Graph& g = run.ball->graph;
  auto v = retaining_verdict(g, run.t, 3);
  ASSERT_TRUE(v.witness.has_value());
  const VertexSet u = fire_closure(g, run.t).complement();
  auto w = translation_witness(g, run.wall, u, *v.witness, 0);
  EXPECT_TRUE(w.ok) << w.failure;
  EXPECT_GE(w.k, 1u);
}

TEST(TranslationWitness, F2xZWall) {
  auto run = scenarios::f2xz_wall(0, 10);
  const Graph& g = run.ball->graph;
  auto v = retaining_verdict(g, run.t, 3);
  ASSERT_TRUE(v.witness.has_value());
  const VertexSet u = fire_closure(g, run.t).complement();
  auto w = translation_witness(g, run.plan.wall, u, *v.witness, 0);
  EXPECT_TRUE(w.ok) << w.failure;
}
