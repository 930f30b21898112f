#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fireret/graph.hpp"
#include "fireret/groups.hpp"

namespace fireret {

/// Ball of radius R around the identity in the Cayley graph of a model.
///
/// Vertex ids follow BFS discovery order from the identity (vertex 0), so the
/// ids of each layer are contiguous. Every vertex keeps its BFS-tree parent,
/// which yields a geodesic word for it.
struct CayleyBall {
  ModelPtr model;
  std::size_t radius = 0;
  Graph graph;
  std::vector<Element> elements;
  std::vector<std::size_t> word_length;
  std::vector<std::size_t> layer_sizes;
  std::vector<Vertex> parent;
  std::vector<std::size_t> parent_gen;
  std::unordered_map<Element, Vertex, ElementHash> index;

  Vertex identity() const { return 0; }

  std::optional<Vertex> find(const Element& x) const {
    auto it = index.find(x);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  Vertex at(const Element& x) const {
    auto v = find(x);
    if (!v) throw Error("element " + model->format(x) + " outside the truncation");
    return *v;
  }
  /// Vertex of an element given as text ("e", "aab", "(1,2)", ...).
  Vertex vertex(const std::string& text) const { return at(model->parse(text)); }

  /// Geodesic generator word from the identity to v.
  std::vector<std::size_t> word(Vertex v) const {
    std::vector<std::size_t> w;
    while (v != identity()) {
      w.push_back(parent_gen[v]);
      v = parent[v];
    }
    return {w.rbegin(), w.rend()};
  }
};

inline CayleyBall cayley_ball(ModelPtr model, std::size_t radius) {
  CayleyBall b;
  b.model = model;
  b.radius = radius;
  const auto& m = *model;
  const auto ngen = m.generators().size();

  b.elements.push_back(m.identity());
  b.word_length.push_back(0);
  b.parent.push_back(kNoVertex);
  b.parent_gen.push_back(0);
  b.index.emplace(m.identity(), 0);
  b.layer_sizes.push_back(1);
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= radius; ++len) {
    const std::size_t layer_end = b.elements.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t s = 0; s < ngen; ++s) {
        Element y = m.multiply(b.elements[i], s);
        if (b.index.contains(y)) continue;
        const auto id = static_cast<Vertex>(b.elements.size());
        b.index.emplace(y, id);
        b.elements.push_back(std::move(y));
        b.word_length.push_back(len);
        b.parent.push_back(static_cast<Vertex>(i));
        b.parent_gen.push_back(s);
      }
    }
    if (b.elements.size() == layer_end) break;  // finite group exhausted
    b.layer_sizes.push_back(b.elements.size() - layer_end);
    layer_begin = layer_end;
  }

  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::vector<Vertex> shell;
  labels.reserve(b.elements.size());
  for (std::size_t v = 0; v < b.elements.size(); ++v) {
    labels.push_back(m.format(b.elements[v]));
    for (std::size_t s = 0; s < ngen; ++s) {
      auto it = b.index.find(m.multiply(b.elements[v], s));
      if (it != b.index.end() && it->second > v) edges.emplace_back(static_cast<Vertex>(v), it->second);
    }
    if (b.word_length[v] == radius) shell.push_back(static_cast<Vertex>(v));
  }
  b.graph = Graph(b.elements.size(), edges, std::move(labels), shell);
  b.graph.declare_degree_bound(std::max(ngen, b.graph.degree_bound()));

  if (m.coordinates(b.elements[0])) {
    std::vector<std::array<double, 2>> xy;
    xy.reserve(b.elements.size());
    for (auto& e : b.elements) xy.push_back(*m.coordinates(e));
    b.graph.set_layout(std::move(xy), true);
  }
  return b;
}

/// { g*s : s in S }; throws listing every product that leaves the ball.
inline VertexSet translate_set(const CayleyBall& b, const Element& g, const VertexSet& s) {
  VertexSet out(b.graph.size());
  std::string escaped;
  for (Vertex v : s) {
    Element y = b.model->apply_word(g, b.word(v));
    if (auto w = b.find(y))
      out.insert(*w);
    else
      escaped += (escaped.empty() ? "" : ", ") + b.model->format(y);
  }
  if (!escaped.empty()) throw Error("translate escapes truncation: " + escaped);
  return out;
}

/// Ball vertices within distance l of the subgroup's members in the ball.
inline VertexSet subgroup_neighborhood(const CayleyBall& b, const SubgroupSpec& c, std::size_t l) {
  if (l >= b.radius) throw Error("wall thicker than truncation");
  VertexSet members(b.graph.size());
  for (Vertex v = 0; v < b.graph.size(); ++v)
    if (c.contains(b.elements[v])) members.insert(v);
  return ball(b.graph, members, l);
}

/// gL within the ball, where L is the l-neighbourhood of the subgroup: BFS of
/// depth l from the ball elements x with g^-1 x in the subgroup. `g` must be
/// a vertex of the ball.
inline VertexSet translated_neighborhood(const CayleyBall& b, const SubgroupSpec& c, std::size_t l,
                                         Vertex g) {
  const auto& m = *b.model;
  const auto ginv = m.apply_word(m.identity(), m.inverse_word(b.word(g)));
  VertexSet members(b.graph.size());
  for (Vertex v = 0; v < b.graph.size(); ++v)
    if (c.contains(m.apply_word(ginv, b.word(v)))) members.insert(v);
  return ball(b.graph, members, l);
}

}  // namespace fireret
