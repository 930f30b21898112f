#include <gtest/gtest.h>

#include <sstream>

#include "fireret/transport.hpp"
#include "scenarios.hpp"

using namespace fireret;
using scenarios::config;

TEST(VerifyQi, IdentityOnIdenticalGraphs) {
  for (auto g : {std::make_shared<const Graph>(grid_graph(7, 7)), std::make_shared<const Graph>(line_truncation(6)),
                 std::make_shared<const Graph>(cycle_graph(9))}) {
    auto rep = verify_qi(label_correspondence(g, g, 1));
    EXPECT_TRUE(rep.pass) << rep.first_violation;
    EXPECT_EQ(rep.minimal_c, 1u);
  }
}

TEST(VerifyQi, AlternateGeneratorsOfZ2) {
  auto z = scenarios::z2_pair(16);
  auto rep = verify_qi(z.pair);
  EXPECT_TRUE(rep.pass) << rep.first_violation;
  EXPECT_EQ(rep.minimal_c, 2u);
  EXPECT_EQ(z.pair.delta, 6u);

  auto strict = z.pair;
  strict.c = 1;
  auto fail = verify_qi(strict);
  EXPECT_FALSE(fail.pass);
  EXPECT_NE(fail.first_violation.find("lower"), std::string::npos);
}

TEST(VerifyQi, ConstantMapCollapsesDistances) {
  auto g = std::make_shared<const Graph>(line_truncation(10));
  auto p = make_qi_pair(g, g, std::vector<Vertex>(g->size(), g->at("0")),
                        std::vector<Vertex>(g->size(), g->at("0")), 2);
  auto rep = verify_qi(p);
  EXPECT_FALSE(rep.pass);
  EXPECT_NE(rep.first_violation.find("lower inequality"), std::string::npos);
}

TEST(VerifyQi, UndefinedInteriorVertex) {
  auto g = std::make_shared<const Graph>(line_truncation(4));
  std::vector<Vertex> phi(g->size());
  for (Vertex v = 0; v < g->size(); ++v) phi[v] = v;
  auto psi = phi;
  phi[g->at("0")] = kNoVertex;
  EXPECT_THROW(verify_qi(make_qi_pair(g, g, phi, psi, 1)), Error);
}

TEST(VertexMap, ReadsPairs) {
  auto g = std::make_shared<const Graph>(path_graph(3));
  auto h = std::make_shared<const Graph>(path_graph(3));
  std::istringstream in("# g h\nv0 v2\nv1 v1\nv2 v0\n");
  auto p = read_vertex_map(in, g, h, 1);
  EXPECT_EQ(p.phi[0], 2u);
  EXPECT_EQ(p.psi[2], 0u);
  std::istringstream bad("v0 v9\n");
  EXPECT_THROW(read_vertex_map(bad, g, h, 1), Error);
}

TEST(TransportedBound, Examples) {
  EXPECT_EQ(transported_bound(Bound::constant(1), 2, 6)(1), 40310784u);
  EXPECT_EQ(transported_bound(Bound::constant(1), 2, 6)(7), 40310784u);
  auto fk = Bound::function([](std::size_t k) { return k; }, "k");
  for (std::size_t k = 1; k <= 50; ++k) EXPECT_EQ(transported_bound(fk, 1, 4)(k), (4 * k - 1) * 256);
  EXPECT_EQ(transported_bound(Bound::constant(0), 3, 8)(5), 0u);
}

TEST(TransportedBound, SandwichAndMonotonicity) {
  auto fk = Bound::function([](std::size_t k) { return k; }, "k");
  for (std::size_t c : {1u, 2u})
    for (std::size_t delta : {2u, 4u, 6u}) EXPECT_EQ(sandwich_violation(fk, c, delta, 100), std::nullopt);
  auto fk2 = Bound::function([](std::size_t k) { return k + 1; }, "k+1");
  for (std::size_t k = 1; k <= 30; ++k) {
    EXPECT_LE(transported_bound(fk, 2, 4)(k), transported_bound(fk2, 2, 4)(k));
    EXPECT_LE(transported_bound(fk, 2, 4)(k), transported_bound(fk, 2, 5)(k));
  }
  // Without monotonicity the upper half can fail: b_2 = 9 * 16 but f_4 = 0.
  auto down = Bound::list({0, 0, 9});
  EXPECT_EQ(sandwich_violation(down, 1, 2, 3), 2u);
}

TEST(TransportedChoice, SingletonBall) {
  auto z = scenarios::z2_pair(10);
  auto p = z.pair;
  p.c = 1;
  const Graph& g = *z.g;
  const Graph& h = *z.h;
  const VertexSet y0 = ball(h, h.set_of({h.at("(0,0)")}), 1);
  const VertexSet w = g.set_of({g.at("(3,0)")});
  EXPECT_EQ(transported_choice(p, w, y0), ball(h, h.set_of({h.at("(3,0)")}), 3) - y0);
  EXPECT_TRUE(transported_choice(p, g.empty_set(), y0).empty());
}

TEST(CertifyTransport, EmptySourceStrategy) {
  auto z = scenarios::z2_pair(40);
  const Graph& g = *z.g;
  const Graph& h = *z.h;
  const Vertex h0 = h.at("(0,0)");
  const std::size_t q = 1;
  const VertexSet x0 = ball(g, g.set_of({z.pair.psi[h0]}), 2 * 2 * (q + 2));
  auto source = run_game(g, x0, EmptyStrategy(), config(4, 6));
  TransportedStrategy ts(source, z.pair, h0, q);
  auto target = run_game(h, ts.target_initial_fire(), ts, config(1, 6));
  for (auto& qk : target.chosen) EXPECT_TRUE(qk.empty());
  auto rep = certify_transport(source, target, z.pair, q, h0);
  EXPECT_TRUE(rep.pass) << rep.first_violation;
  EXPECT_EQ(rep.turns.size(), 6u);
}

TEST(CertifyTransport, OneShotWallSource) {
  auto run = scenarios::z2_transport();
  auto rep = certify_transport(run.source, run.target, run.z.pair, run.q, run.h0);
  EXPECT_TRUE(rep.pass) << rep.first_violation;
  EXPECT_GE(rep.turns.size(), 6u);
  EXPECT_GT(rep.turns.front().q_size, 0u);
  for (auto& t : rep.turns) EXPECT_LE(t.q_size, t.q_cap);
  EXPECT_FALSE(run.target.protection(1).empty());
  EXPECT_TRUE(bound_check(run.target, TransportedStrategy(run.source, run.z.pair, run.h0, run.q).bound()));
}

TEST(CertifyTransport, DroppedVertexIsDetected) {
  auto run = scenarios::z2_transport();
  const Graph& h = *run.z.h;
  GameTranscript bad = run.target;
  bad.chosen[0].erase(bad.chosen[0].front());
  bad.burned = replay(h, bad.initial_fire(), bad.chosen, 1, bad.turns());
  auto rep = certify_transport(run.source, bad, run.z.pair, run.q, run.h0);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.formula);
  EXPECT_NE(rep.first_violation.find("turn 1"), std::string::npos);
}

TEST(CertifyTransport, UnprotectedTargetBreaksThePullback) {
  // A wall across the whole ball holds the source fire below it; a target
  // that protects nothing burns into the wall's image.
  auto z = scenarios::z2_pair(90);
  const Graph& g = *z.g;
  const Graph& h = *z.h;
  const Vertex h0 = h.at("(0,0)");
  const std::size_t q = 2;
  const VertexSet x0 = ball(g, g.set_of({z.pair.psi[h0]}), 16);
  VertexSet wall(g.size());
  for (int x = -72; x <= 72; ++x) wall.insert(g.at("(" + std::to_string(x) + ",17)"));
  auto source = run_game(g, x0, ScriptedStrategy({wall}, Bound::constant(wall.size())), config(4, 20));
  auto target = run_game(h, ball(h, h.set_of({h0}), q), EmptyStrategy(), config(1, 20));
  auto rep = certify_transport(source, target, z.pair, q, h0);
  EXPECT_FALSE(rep.item2);
  ASSERT_TRUE(rep.first_item2_violation.has_value());
  EXPECT_FALSE(rep.complement_inclusion);
}

TEST(CertifyTransport, Preconditions) {
  auto run = scenarios::z2_transport(56, 12);
  auto other = run.target;
  other.horizon = 5;
  EXPECT_THROW(certify_transport(run.source, other, run.z.pair, run.q, run.h0), Error);
  // Non-ball source fire is rejected by the strategy.
  const Graph& g = *run.z.g;
  auto odd = run_game(g, g.set_of({g.at("(0,0)")}), EmptyStrategy(), config(4, 3));
  EXPECT_THROW(TransportedStrategy(odd, run.z.pair, run.h0, run.q), Error);
  // Reach must be 2c.
  auto slow = run_game(g, run.source.initial_fire(), EmptyStrategy(), config(1, 3));
  EXPECT_THROW(TransportedStrategy(slow, run.z.pair, run.h0, run.q), Error);
}
