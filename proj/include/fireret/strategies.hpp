#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fireret/cayley.hpp"
#include "fireret/game.hpp"
#include "fireret/graph.hpp"
#include "fireret/transport.hpp"

namespace fireret {

// Baselines

class EmptyStrategy : public Strategy {
 public:
  Bound bound() const override { return Bound::constant(0); }
  VertexSet choose(std::size_t, const Graph& g, const GameTranscript&) const override {
    return g.empty_set();
  }
  bool done(std::size_t) const override { return true; }
  std::string describe() const override { return "empty"; }
};

/// Protects up to f unburned, unprotected neighbours of the fire per turn,
/// nearest to X_0 first, then by vertex id.
class GreedyStrategy : public Strategy {
 public:
  explicit GreedyStrategy(std::uint64_t f) : f_(f) {}
  Bound bound() const override { return Bound::constant(f_); }
  VertexSet choose(std::size_t turn, const Graph& g, const GameTranscript& t) const override {
    const VertexSet& fire = t.final_fire();
    const VertexSet guarded = t.protected_through(turn - 1);
    auto dist = bfs_distances(g, t.initial_fire());
    std::vector<Vertex> cand;
    for (Vertex v : fire)
      for (Vertex w : g.neighbors(v))
        if (!fire.contains(w) && !guarded.contains(w)) cand.push_back(w);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::stable_sort(cand.begin(), cand.end(), [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });
    VertexSet w(g.size());
    for (std::size_t i = 0; i < cand.size() && i < f_; ++i) w.insert(cand[i]);
    return w;
  }
  // An unchanged fire has every neighbour protected, so nothing is left to choose.
  bool done(std::size_t) const override { return true; }
  std::string describe() const override { return "greedy:" + std::to_string(f_); }

 private:
  std::uint64_t f_;
};

// Walls

struct K1Estimate {
  std::uint64_t k1 = 0;
  Vertex basepoint = 0;
  std::size_t at_radius = 0;
  std::size_t window = 0;
};

/// Measured growth constant of L: max over basepoints y0 in L and complete
/// radii n of |B(y0, n) ∩ L| / n^d, rounded up. A radius is complete when
/// |y0| + n + l <= R, so every subgroup point that could put a vertex of
/// B(y0, n) into L lies inside the ball.
inline K1Estimate estimate_K1(const CayleyBall& b, const SubgroupSpec& c, std::size_t l, std::size_t d) {
  const VertexSet wall = subgroup_neighborhood(b, c, l);
  K1Estimate best;
  bool any = false;
  std::size_t probe_window = 0;
  Vertex probe = kNoVertex;
  for (Vertex y0 : wall) {
    const auto used = b.word_length[y0] + l;
    if (used >= b.radius) continue;
    const std::size_t window = b.radius - used;
    auto dist = bfs_distances(b.graph, b.graph.set_of({y0}), static_cast<std::int64_t>(window));
    std::vector<std::uint64_t> count(window + 1, 0);
    for (Vertex v : wall)
      if (dist[v] != kUnreached) ++count[static_cast<std::size_t>(dist[v])];
    std::uint64_t beta = count[0];
    for (std::size_t n = 1; n <= window; ++n) {
      beta += count[n];
      const std::uint64_t denom = checked_pow(n, d);
      const std::uint64_t k = (beta + denom - 1) / denom;
      if (!any || k > best.k1) best = {k, y0, n, window};
      any = true;
    }
    if (window > probe_window) {
      probe_window = window;
      probe = y0;
    }
  }
  if (!any) throw Error("truncation too small for K1");
  // A ratio still growing by half between n/2 and n means n^d undercounts.
  if (probe_window >= 4) {
    auto dist = bfs_distances(b.graph, b.graph.set_of({probe}), static_cast<std::int64_t>(probe_window));
    auto beta = [&](std::size_t n) {
      std::uint64_t s = 0;
      for (Vertex v : wall)
        if (dist[v] != kUnreached && static_cast<std::size_t>(dist[v]) <= n) ++s;
      return static_cast<double>(s);
    };
    const std::size_t half = (probe_window + 1) / 2;
    const double full_ratio = beta(probe_window) / static_cast<double>(checked_pow(probe_window, d));
    const double half_ratio = beta(half) / static_cast<double>(checked_pow(half, d));
    if (full_ratio >= 1.5 * half_ratio)
      throw Error("growth degree d=" + std::to_string(d) + " too small: ratio grows from " +
                  std::to_string(half_ratio) + " to " + std::to_string(full_ratio));
  }
  return best;
}

struct WallOptions {
  /// Extra distance required between the wall and X_0.
  std::size_t clearance = 0;
  /// One-shot walls normally need a finite subgroup; a truncated wall of an
  /// infinite one may be used as a finite protection set when this is false.
  bool require_finite = true;
};

struct WallPlan {
  SubgroupSpec subgroup;
  std::size_t thickness = 0;
  std::size_t degree = 0;
  Vertex translate = 0;
  std::string translate_label;
  VertexSet initial_fire;
  VertexSet wall;
  std::vector<Vertex> enumeration;
  std::vector<std::size_t> enumeration_distance;
  std::uint64_t k1 = 0, k = 0, f = 0;
  /// Largest n for which the ball of radius n around X_0 is complete.
  std::size_t faithful_horizon = 0;
  /// |M_n| = |{x in wall : dist(x, X_0) <= n}| for n = 0..faithful_horizon.
  std::vector<std::size_t> m_sizes;

  /// p_n = sum_{k=1..n} d F k^(d-1).
  std::uint64_t schedule(std::size_t n) const {
    std::uint64_t p = 0;
    for (std::size_t i = 1; i <= n; ++i)
      p = checked_add(p, checked_mul(degree * f, checked_pow(i, degree - 1)));
    return p;
  }
  Bound bound() const { return Bound::polynomial(degree * f, static_cast<unsigned>(degree - 1)); }
};

namespace detail {

// Candidate translates: powers of the first generator outside the subgroup,
// or every ball vertex in BFS order when that generator has finite order.
inline std::vector<Vertex> translate_candidates(const CayleyBall& b, const SubgroupSpec& c) {
  const auto& m = *b.model;
  std::optional<std::size_t> gen;
  for (std::size_t s = 0; s < m.generators().size() && !gen; ++s)
    if (!c.contains(m.multiply(m.identity(), s))) gen = s;
  if (!gen) throw Error("subgroup " + c.name + " contains every generator");
  std::vector<Vertex> out;
  Element x = m.identity();
  for (std::size_t k = 1; k <= b.radius; ++k) {
    x = m.multiply(x, *gen);
    if (x == m.identity()) {
      out.clear();
      for (Vertex v = 1; v < b.graph.size(); ++v) out.push_back(v);
      return out;
    }
    if (auto v = b.find(x)) out.push_back(*v);
  }
  return out;
}

// Some component of G \ wall touches the boundary and avoids X_0.
inline bool separates(const Graph& g, const VertexSet& wall, const VertexSet& x0) {
  for (auto& comp : deep_components(g, wall))
    if (!comp.intersects(x0)) return true;
  return false;
}

inline std::vector<std::size_t> m_sizes(const VertexSet& wall, const std::vector<std::int64_t>& dist,
                                        std::size_t horizon) {
  std::vector<std::size_t> m(horizon + 1, 0);
  for (Vertex v : wall) {
    if (dist[v] == kUnreached) continue;
    for (auto n = static_cast<std::size_t>(dist[v]); n <= horizon; ++n) ++m[n];
  }
  return m;
}

}  // namespace detail

/// Finds g with diam X_0 < dist(gL, X_0) and |M_n| < p_n for every faithful n,
/// searching the candidate translates in order. Returns the full plan.
inline WallPlan choose_wall_translate(const CayleyBall& b, const SubgroupSpec& c, std::size_t l,
                                      std::size_t d, const VertexSet& x0, const WallOptions& opt = {}) {
  if (d < 1) throw Error("wall schedules need d >= 1; use a one-shot wall for finite subgroups");
  const Graph& g = b.graph;
  auto margin = distance_to_boundary(g, x0);
  if (!margin || *margin < 1) throw Error("initial fire touches the truncation shell");
  WallPlan plan;
  plan.subgroup = c;
  plan.thickness = l;
  plan.degree = d;
  plan.initial_fire = x0;
  plan.k1 = estimate_K1(b, c, l, d).k1;
  plan.k = checked_mul(checked_pow(2, d), plan.k1);
  plan.f = plan.k + 1;
  plan.faithful_horizon = *margin;
  const std::size_t diam = set_diameter(g, x0);
  const auto dist = bfs_distances(g, x0);

  for (Vertex cand : detail::translate_candidates(b, c)) {
    VertexSet wall = translated_neighborhood(b, c, l, cand);
    if (wall.empty()) continue;
    auto dw = set_distance(g, x0, wall);
    if (!dw || *dw <= diam + opt.clearance) continue;
    auto m = detail::m_sizes(wall, dist, plan.faithful_horizon);
    bool ok = true;
    for (std::size_t n = 1; n <= plan.faithful_horizon && ok; ++n) ok = m[n] < plan.schedule(n);
    if (!ok || !detail::separates(g, wall, x0)) continue;

    plan.translate = cand;
    plan.translate_label = g.label(cand);
    plan.m_sizes = std::move(m);
    plan.enumeration = wall.to_vector();
    std::stable_sort(plan.enumeration.begin(), plan.enumeration.end(), [&](Vertex a, Vertex b2) {
      auto da = dist[a] == kUnreached ? std::numeric_limits<std::int64_t>::max() : dist[a];
      auto db = dist[b2] == kUnreached ? std::numeric_limits<std::int64_t>::max() : dist[b2];
      return da < db;
    });
    for (Vertex v : plan.enumeration)
      plan.enumeration_distance.push_back(dist[v] == kUnreached ? std::numeric_limits<std::size_t>::max()
                                                                : static_cast<std::size_t>(dist[v]));
    plan.wall = std::move(wall);
    return plan;
  }
  throw Error("truncation too small for wall placement");
}

/// At turn n emits the wall vertices w_i with p_{n-1} < i <= p_n.
class WallStrategy : public Strategy {
 public:
  explicit WallStrategy(WallPlan plan) : plan_(std::move(plan)) {}

  Bound bound() const override { return plan_.bound(); }
  VertexSet choose(std::size_t turn, const Graph& g, const GameTranscript& t) const override {
    VertexSet w(g.size());
    const auto lo = plan_.schedule(turn - 1);
    const auto hi = std::min<std::uint64_t>(plan_.schedule(turn), plan_.enumeration.size());
    for (auto i = lo; i < hi; ++i) w.insert(plan_.enumeration[i]);
    if (w.intersects(t.final_fire())) throw Error("wall breached at turn " + std::to_string(turn));
    return w;
  }
  bool done(std::size_t turn) const override { return plan_.schedule(turn) >= plan_.enumeration.size(); }
  std::string describe() const override {
    return "wall:" + plan_.subgroup.name + ":" + std::to_string(plan_.thickness) + ":" +
           std::to_string(plan_.degree) + " g=" + plan_.translate_label;
  }
  const WallPlan& plan() const { return plan_; }

 private:
  WallPlan plan_;
};

/// W_1 = gL, nothing afterwards.
class OneShotWall : public Strategy {
 public:
  OneShotWall(VertexSet wall, std::string desc) : wall_(std::move(wall)), desc_(std::move(desc)) {}
  Bound bound() const override { return Bound::constant(wall_.size()); }
  VertexSet choose(std::size_t turn, const Graph& g, const GameTranscript&) const override {
    return turn == 1 ? wall_ : g.empty_set();
  }
  bool done(std::size_t turn) const override { return turn >= 1; }
  std::string describe() const override { return desc_; }
  const VertexSet& wall() const { return wall_; }

 private:
  VertexSet wall_;
  std::string desc_;
};

/// One-shot wall gL with dist(gL, X_0) >= max(diam X_0, 1) + clearance and a
/// deep component of G \ gL away from X_0.
inline OneShotWall one_shot_wall(const CayleyBall& b, const SubgroupSpec& c, std::size_t l,
                                 const VertexSet& x0, const WallOptions& opt = {}) {
  if (opt.require_finite && !c.finite)
    throw Error("one-shot walls need a finite subgroup; " + c.name + " is infinite");
  const Graph& g = b.graph;
  auto margin = distance_to_boundary(g, x0);
  if (!margin || *margin < 1) throw Error("initial fire touches the truncation shell");
  const std::size_t need = std::max<std::size_t>(set_diameter(g, x0), 1) + opt.clearance;
  for (Vertex cand : detail::translate_candidates(b, c)) {
    VertexSet wall = translated_neighborhood(b, c, l, cand);
    if (wall.empty()) continue;
    auto dw = set_distance(g, x0, wall);
    if (!dw || *dw < need) continue;
    if (!detail::separates(g, wall, x0)) continue;
    return OneShotWall(std::move(wall), "oneshot:" + c.name + ":" + std::to_string(l) + " g=" + g.label(cand));
  }
  throw Error("truncation too small for wall placement");
}

/// Emits Q_k = (∪_{w in W_k} B_H(phi w, r)) \ Y_{k-1} from a sanitized
/// reach-2c source game played from X_0 = B_G(psi h0, 2c(q+2)).
class TransportedStrategy : public Strategy {
 public:
  TransportedStrategy(const GameTranscript& source, QIPair pair, Vertex h0, std::size_t q)
      : source_(source), pair_(std::move(pair)), h0_(h0), q_(q) {
    const auto& g = *pair_.g;
    if (source_.reach != 2 * pair_.c) throw Error("source game must have reach 2c");
    if (pair_.psi.at(h0) == kNoVertex) throw Error("psi undefined at h0");
    const VertexSet expected = ball(g, g.set_of({pair_.psi[h0]}), 2 * pair_.c * (q + 2));
    if (!(source_.initial_fire() == expected))
      throw Error("source initial fire must be the ball B_G(psi h0, 2c(q+2))");
    last_ = 0;
    for (std::size_t k = 1; k <= source_.turns(); ++k) {
      if (source_.protection(k).intersects(source_.fire(k - 1)))
        throw Error("source transcript is not sanitized at turn " + std::to_string(k));
      if (!source_.protection(k).empty()) last_ = k;
    }
  }

  Bound bound() const override { return transported_bound_from_compressed(); }
  VertexSet choose(std::size_t turn, const Graph& h, const GameTranscript& t) const override {
    if (turn > source_.turns()) return h.empty_set();
    return transported_choice(pair_, source_.protection(turn), t.final_fire());
  }
  bool done(std::size_t turn) const override { return turn >= last_; }
  std::string describe() const override {
    return "transport:c=" + std::to_string(pair_.c) + ":q=" + std::to_string(q_);
  }

  /// B_H(h0, q), the matching target initial fire.
  VertexSet target_initial_fire() const { return ball(*pair_.h, pair_.h->set_of({h0_}), q_); }

 private:
  // The source bound is already the block sum a_k, so b_k = a_k delta^(c^2+2c+1).
  Bound transported_bound_from_compressed() const {
    const std::uint64_t scale = checked_pow(pair_.delta, pair_.c * pair_.c + 2 * pair_.c + 1);
    Bound a = source_.bound;
    return Bound::function([a, scale](std::size_t k) { return checked_mul(a(k), scale); },
                           "transported(" + a.describe() + ")");
  }

  GameTranscript source_;
  QIPair pair_;
  Vertex h0_;
  std::size_t q_;
  std::size_t last_ = 0;
};

}  // namespace fireret
