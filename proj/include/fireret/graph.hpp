#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fireret/vertex_set.hpp"

namespace fireret {

using Edge = std::pair<Vertex, Vertex>;

/// Finite undirected graph on dense vertex ids 0..n-1.
///
/// Immutable after construction. Adjacency is stored in CSR form, sorted and
/// deduplicated; self-loops are dropped. The optional boundary marks the shell
/// of a truncation of an infinite graph. Labels are the external ids used by
/// the text formats; a 2D layout is kept when the generator knows one.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, std::span<const Edge> edges, std::vector<std::string> labels = {},
        std::span<const Vertex> boundary = {})
      : labels_(std::move(labels)), boundary_(n) {
    std::vector<std::vector<Vertex>> adj(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw Error("edge endpoint out of range");
      if (u == v) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
      auto& a = adj[v];
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      offsets_[v + 1] = offsets_[v] + a.size();
      degree_bound_ = std::max(degree_bound_, a.size());
    }
    targets_.reserve(offsets_[n]);
    for (auto& a : adj) targets_.insert(targets_.end(), a.begin(), a.end());
    for (Vertex b : boundary) boundary_.insert(b);
    if (labels_.empty()) {
      labels_.reserve(n);
      for (std::size_t v = 0; v < n; ++v) labels_.push_back(std::to_string(v));
    }
    if (labels_.size() != n) throw Error("label count does not match vertex count");
    index_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!index_.emplace(labels_[v], static_cast<Vertex>(v)).second)
        throw Error("duplicate vertex label '" + labels_[v] + "'");
    }
  }

  std::size_t size() const { return labels_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t edge_count() const { return targets_.size() / 2; }

  /// Max degree. May be raised to the degree bound of the infinite graph the
  /// truncation came from, never lowered below the observed maximum.
  std::size_t degree_bound() const { return degree_bound_; }
  void declare_degree_bound(std::size_t bound) {
    if (bound < degree_bound_) throw Error("declared degree bound below observed max degree");
    degree_bound_ = bound;
  }

  const VertexSet& boundary() const { return boundary_; }

  const std::string& label(Vertex v) const { return labels_.at(v); }
  std::optional<Vertex> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Vertex at(const std::string& label) const {
    auto v = find(label);
    if (!v) throw Error("unknown vertex id '" + label + "'");
    return *v;
  }

  VertexSet empty_set() const { return VertexSet(size()); }
  VertexSet all() const { return VertexSet::full(size()); }
  VertexSet set_of(std::initializer_list<Vertex> vs) const { return VertexSet(size(), vs); }
  VertexSet set_of(std::span<const Vertex> vs) const { return VertexSet(size(), vs); }

  bool has_layout() const { return !layout_.empty(); }
  const std::vector<std::array<double, 2>>& layout() const { return layout_; }
  /// Grid layouts use integer coordinates and unlock ASCII rendering.
  bool grid_layout() const { return grid_layout_; }
  void set_layout(std::vector<std::array<double, 2>> xy, bool integer_grid) {
    if (xy.size() != size()) throw Error("layout size mismatch");
    layout_ = std::move(xy);
    grid_layout_ = integer_grid;
  }

  /// Induced subgraph on `keep`; the returned map sends old ids to new ids
  /// (kNoVertex for dropped vertices). Boundary and layout are carried over.
  std::pair<Graph, std::vector<Vertex>> induced(const VertexSet& keep) const {
    std::vector<Vertex> remap(size(), kNoVertex);
    std::vector<std::string> labels;
    Vertex next = 0;
    for (Vertex v : keep) {
      remap[v] = next++;
      labels.push_back(labels_[v]);
    }
    std::vector<Edge> edges;
    std::vector<Vertex> shell;
    for (Vertex v : keep) {
      for (Vertex w : neighbors(v))
        if (v < w && keep.contains(w)) edges.emplace_back(remap[v], remap[w]);
      if (boundary_.contains(v)) shell.push_back(remap[v]);
    }
    Graph g(next, edges, std::move(labels), shell);
    if (has_layout()) {
      std::vector<std::array<double, 2>> xy;
      for (Vertex v : keep) xy.push_back(layout_[v]);
      g.set_layout(std::move(xy), grid_layout_);
    }
    return {std::move(g), std::move(remap)};
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  VertexSet boundary_;
  std::size_t degree_bound_ = 0;
  std::vector<std::array<double, 2>> layout_;
  bool grid_layout_ = false;
};

inline constexpr std::int64_t kUnreached = -1;

/// Multi-source BFS distances. Vertices in `blocked` are never entered (a
/// blocked source is still a source). Exploration stops at `max_depth` when
/// it is non-negative.
inline std::vector<std::int64_t> bfs_distances(const Graph& g, const VertexSet& sources,
                                               std::int64_t max_depth = -1,
                                               const VertexSet* blocked = nullptr) {
  std::vector<std::int64_t> dist(g.size(), kUnreached);
  std::vector<Vertex> frontier;
  for (Vertex s : sources) {
    dist[s] = 0;
    frontier.push_back(s);
  }
  std::vector<Vertex> next;
  for (std::int64_t d = 1; !frontier.empty() && (max_depth < 0 || d <= max_depth); ++d) {
    next.clear();
    for (Vertex u : frontier) {
      for (Vertex w : g.neighbors(u)) {
        if (dist[w] != kUnreached) continue;
        if (blocked && blocked->contains(w)) continue;
        dist[w] = d;
        next.push_back(w);
      }
    }
    frontier.swap(next);
  }
  return dist;
}

/// { v : dist(center, v) <= radius }.
inline VertexSet ball(const Graph& g, const VertexSet& center, std::size_t radius) {
  VertexSet out(g.size());
  auto dist = bfs_distances(g, center, static_cast<std::int64_t>(radius));
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[v] != kUnreached) out.insert(v);
  return out;
}

/// Minimum pairwise distance; std::nullopt means no connecting path.
inline std::optional<std::size_t> set_distance(const Graph& g, const VertexSet& x,
                                               const VertexSet& y) {
  if (x.empty() || y.empty()) throw Error("empty set has no distance");
  auto dist = bfs_distances(g, x);
  std::optional<std::size_t> best;
  for (Vertex v : y) {
    if (dist[v] == kUnreached) continue;
    auto d = static_cast<std::size_t>(dist[v]);
    if (!best || d < *best) best = d;
  }
  return best;
}

inline std::size_t set_diameter(const Graph& g, const VertexSet& x) {
  if (x.empty()) throw Error("empty set has no diameter");
  std::size_t diam = 0;
  for (Vertex s : x) {
    auto dist = bfs_distances(g, g.set_of({s}));
    for (Vertex t : x) {
      if (dist[t] == kUnreached)
        throw Error("diameter undefined: '" + g.label(s) + "' and '" + g.label(t) +
                    "' lie in different components");
      diam = std::max(diam, static_cast<std::size_t>(dist[t]));
    }
  }
  return diam;
}

/// Components of the subgraph induced on V \ removed, ordered by smallest member.
inline std::vector<VertexSet> components_after_removal(const Graph& g, const VertexSet& removed) {
  std::vector<VertexSet> out;
  VertexSet seen = removed;
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < g.size(); ++root) {
    if (seen.contains(root)) continue;
    VertexSet comp(g.size());
    seen.insert(root);
    stack.push_back(root);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.insert(u);
      for (Vertex w : g.neighbors(u)) {
        if (seen.contains(w)) continue;
        seen.insert(w);
        stack.push_back(w);
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

/// Components that reach the truncation boundary; the finite-scale stand-in
/// for unbounded components. Empty when the graph has no boundary.
inline std::vector<VertexSet> deep_components(const Graph& g, const VertexSet& removed) {
  std::vector<VertexSet> out;
  if (g.boundary().empty()) return out;
  for (auto& c : components_after_removal(g, removed))
    if (c.intersects(g.boundary())) out.push_back(std::move(c));
  return out;
}

/// Smallest distance from `x` to the boundary (nullopt if there is no
/// boundary or it is unreachable). Balls around `x` of radius at most this
/// value are complete copies of the corresponding balls in the infinite graph.
inline std::optional<std::size_t> distance_to_boundary(const Graph& g, const VertexSet& x) {
  if (g.boundary().empty() || x.empty()) return std::nullopt;
  return set_distance(g, x, g.boundary());
}

// Small builders used by tests, configs and docs.

/// Path v0 - v1 - ... - v(n-1), no boundary, labels "v<i>".
inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("v" + std::to_string(i));
    if (i + 1 < n) e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  }
  return Graph(n, e, std::move(labels));
}

/// Cycle on n vertices, labels "v<i>".
inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("v" + std::to_string(i));
    e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
  }
  return Graph(n, e, std::move(labels));
}

/// Truncation of Z to [-radius, radius]; labels are the integers, boundary the
/// two endpoints.
inline Graph line_truncation(std::int64_t radius) {
  std::vector<Edge> e;
  std::vector<std::string> labels;
  std::vector<std::array<double, 2>> xy;
  const auto n = static_cast<std::size_t>(2 * radius + 1);
  for (std::int64_t x = -radius; x <= radius; ++x) {
    labels.push_back(std::to_string(x));
    xy.push_back({static_cast<double>(x), 0.0});
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  std::vector<Vertex> shell{0, static_cast<Vertex>(n - 1)};
  Graph g(n, e, std::move(labels), shell);
  g.set_layout(std::move(xy), true);
  return g;
}

/// w x h grid with the outer shell as boundary; labels "(x,y)" with the
/// centre cell at the origin when the side lengths are odd.
inline Graph grid_graph(std::size_t w, std::size_t h) {
  const auto ox = static_cast<std::int64_t>(w / 2);
  const auto oy = static_cast<std::int64_t>(h / 2);
  std::vector<std::string> labels;
  std::vector<std::array<double, 2>> xy;
  std::vector<Edge> e;
  std::vector<Vertex> shell;
  auto id = [w](std::size_t x, std::size_t y) { return static_cast<Vertex>(y * w + x); };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto cx = static_cast<std::int64_t>(x) - ox;
      const auto cy = static_cast<std::int64_t>(y) - oy;
      labels.push_back("(" + std::to_string(cx) + "," + std::to_string(cy) + ")");
      xy.push_back({static_cast<double>(cx), static_cast<double>(cy)});
      if (x + 1 < w) e.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < h) e.emplace_back(id(x, y), id(x, y + 1));
      if (x == 0 || y == 0 || x + 1 == w || y + 1 == h) shell.push_back(id(x, y));
    }
  }
  Graph g(w * h, e, std::move(labels), shell);
  g.set_layout(std::move(xy), true);
  return g;
}

}  // namespace fireret
