#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fireret/graph.hpp"
#include "fireret/graph_io.hpp"

using namespace fireret;

namespace {

VertexSet ids(const Graph& g, std::initializer_list<const char*> labels) {
  VertexSet s(g.size());
  for (auto l : labels) s.insert(g.at(l));
  return s;
}

Graph random_graph(std::mt19937& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  return Graph(n, e);
}

}  // namespace

TEST(VertexSet, AlgebraAndIteration) {
  VertexSet a(130, {1, 64, 129});
  VertexSet b(130, {64, 100});
  EXPECT_EQ((a | b).to_vector(), (std::vector<Vertex>{1, 64, 100, 129}));
  EXPECT_EQ((a & b).to_vector(), (std::vector<Vertex>{64}));
  EXPECT_EQ((a - b).to_vector(), (std::vector<Vertex>{1, 129}));
  EXPECT_EQ(a.complement().size(), 127u);
  EXPECT_TRUE(a.intersects(b));
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(VertexSet(5).front(), kNoVertex);
  EXPECT_THROW(a.insert(130), Error);
  EXPECT_THROW(a |= VertexSet(10), Error);
}

TEST(Graph, NormalisesEdges) {
  std::vector<Edge> e{{0, 1}, {1, 0}, {1, 1}, {1, 2}};
  Graph g(3, e);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree_bound(), 2u);
  EXPECT_THROW(g.declare_degree_bound(1), Error);
  std::vector<Edge> bad{{0, 5}};
  EXPECT_THROW(Graph(3, bad), Error);
}

TEST(Ball, Examples) {
  auto p5 = path_graph(5);
  EXPECT_EQ(ball(p5, ids(p5, {"v2"}), 1), ids(p5, {"v1", "v2", "v3"}));
  EXPECT_EQ(ball(p5, ids(p5, {"v0", "v4"}), 1), ids(p5, {"v0", "v1", "v3", "v4"}));
  auto c6 = cycle_graph(6);
  EXPECT_EQ(ball(c6, ids(c6, {"v0"}), 3), c6.all());
  EXPECT_TRUE(ball(p5, p5.empty_set(), 3).empty());
  EXPECT_EQ(ball(p5, ids(p5, {"v3"}), 0), ids(p5, {"v3"}));
}

TEST(SetDistance, Examples) {
  auto p5 = path_graph(5);
  EXPECT_EQ(set_distance(p5, ids(p5, {"v0"}), ids(p5, {"v4"})), 4u);
  EXPECT_EQ(set_distance(p5, ids(p5, {"v0", "v2"}), ids(p5, {"v3"})), 1u);
  EXPECT_EQ(set_distance(p5, ids(p5, {"v1"}), ids(p5, {"v1", "v4"})), 0u);
  EXPECT_THROW(set_distance(p5, p5.empty_set(), ids(p5, {"v1"})), Error);
  std::vector<Edge> none;
  Graph two(2, none);
  EXPECT_EQ(set_distance(two, two.set_of({0}), two.set_of({1})), std::nullopt);
}

TEST(SetDiameter, Examples) {
  auto p5 = path_graph(5);
  EXPECT_EQ(set_diameter(p5, p5.all()), 4u);
  EXPECT_EQ(set_diameter(p5, ids(p5, {"v3"})), 0u);
  EXPECT_EQ(set_diameter(cycle_graph(6), cycle_graph(6).all()), 3u);
  std::vector<Edge> none;
  Graph two(2, none);
  EXPECT_THROW(set_diameter(two, two.all()), Error);
}

TEST(Components, Examples) {
  auto p5 = path_graph(5);
  auto parts = components_after_removal(p5, ids(p5, {"v2"}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], ids(p5, {"v0", "v1"}));
  EXPECT_EQ(parts[1], ids(p5, {"v3", "v4"}));
  ASSERT_EQ(components_after_removal(p5, p5.empty_set()).size(), 1u);
  EXPECT_TRUE(components_after_removal(p5, p5.all()).empty());
}

TEST(DeepComponents, Examples) {
  auto line = line_truncation(5);
  EXPECT_EQ(deep_components(line, ids(line, {"0"})).size(), 2u);
  auto one = deep_components(line, ids(line, {"5"}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 10u);
  EXPECT_TRUE(one[0].contains(line.at("-5")));

  auto grid = grid_graph(11, 11);
  VertexSet column(grid.size());
  for (int y = -5; y <= 5; ++y) column.insert(grid.at("(0," + std::to_string(y) + ")"));
  EXPECT_EQ(deep_components(grid, column).size(), 2u);

  EXPECT_TRUE(deep_components(path_graph(5), path_graph(5).empty_set()).empty());
}

TEST(GraphProperties, RandomInstances) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 40, 0.06);
    std::uniform_int_distribution<Vertex> pick(0, 39);
    VertexSet s = g.set_of({pick(rng), pick(rng)});
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(ball(g, s, a + b), ball(g, ball(g, s, a), b));

    VertexSet x = g.set_of({pick(rng)}), y = g.set_of({pick(rng)});
    Vertex z = pick(rng);
    auto dxy = set_distance(g, x, y);
    auto dxz = set_distance(g, x, g.set_of({z}));
    auto dzy = set_distance(g, g.set_of({z}), y);
    if (dxz && dzy) {
      ASSERT_TRUE(dxy.has_value());
      EXPECT_LE(*dxy, *dxz + *dzy);
    }

    VertexSet removed(g.size());
    for (int i = 0; i < 5; ++i) removed.insert(pick(rng));
    VertexSet seen(g.size());
    for (auto& c : components_after_removal(g, removed)) {
      EXPECT_FALSE(c.intersects(seen));
      EXPECT_FALSE(c.intersects(removed));
      seen |= c;
    }
    EXPECT_EQ(seen, removed.complement());
  }
}

TEST(GraphIO, RoundTrip) {
  const std::string text =
      "# a path with a marked end\n"
      "a: b\n"
      "b: c\n"
      "\n"
      "c:\n"
      "boundary: c\n";
  auto g = parse_adjacency_list(text);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.boundary().contains(g.at("c")));
  std::ostringstream out;
  write_adjacency_list(out, g);
  auto h = parse_adjacency_list(out.str());
  EXPECT_EQ(h.edge_count(), 2u);
  EXPECT_EQ(h.boundary(), g.boundary());
}

TEST(GraphIO, Errors) {
  EXPECT_THROW(parse_adjacency_list("a: b\n"), Error);
  EXPECT_THROW(parse_adjacency_list("a:\na:\n"), Error);
  EXPECT_THROW(parse_adjacency_list("a:\nboundary: a\nb:\n"), Error);
  try {
    parse_adjacency_list("a:\nb: zz\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Graph, InducedKeepsBoundaryAndLayout) {
  auto grid = grid_graph(5, 5);
  auto keep = ball(grid, grid.set_of({grid.at("(0,0)")}), 2);
  auto [sub, remap] = grid.induced(keep);
  EXPECT_EQ(sub.size(), 13u);
  EXPECT_TRUE(sub.grid_layout());
  EXPECT_EQ(sub.boundary().size(), 4u);
  EXPECT_EQ(remap[grid.at("(2,2)")], kNoVertex);
}
