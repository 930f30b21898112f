#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fireret/game.hpp"
#include "fireret/graph.hpp"

namespace fireret {

/// beta(n) = |B(A, n)| (optionally counted inside a subset U), sampled for
/// 0 <= n <= faithful_max only.
struct GrowthFunction {
  std::vector<std::uint64_t> beta;

  std::size_t faithful_max() const { return beta.size() - 1; }
  std::uint64_t operator()(std::size_t n) const {
    if (n >= beta.size())
      throw Error("growth sample " + std::to_string(n) + " beyond faithful radius " +
                  std::to_string(faithful_max()));
    return beta[n];
  }
};

/// Samples up to min(n_max, dist(A, boundary)). With `within`, counts only
/// members of that set; distances are still those of the whole graph.
inline GrowthFunction growth_function(const Graph& g, const VertexSet& a, std::size_t n_max,
                                      const VertexSet* within = nullptr) {
  if (a.empty()) throw Error("growth function needs a nonempty base set");
  std::size_t limit = n_max;
  if (auto m = distance_to_boundary(g, a)) limit = std::min(limit, *m);
  auto dist = bfs_distances(g, a, static_cast<std::int64_t>(limit));
  std::vector<std::uint64_t> count(limit + 1, 0);
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[v] != kUnreached && (!within || within->contains(v))) ++count[static_cast<std::size_t>(dist[v])];
  GrowthFunction f;
  std::uint64_t sum = 0;
  for (auto c : count) f.beta.push_back(sum += c);
  return f;
}

struct Domination {
  std::size_t c = 0;
  /// The inequality was checked for 0 <= n <= n_hi.
  std::size_t n_hi = 0;
};

/// Smallest C <= c_max with f(n) <= C g(Cn + C) + C for all n with
/// Cn + C <= g.faithful_max and n <= f.faithful_max. A certificate is exact
/// over its range; nullopt is only evidence.
inline std::optional<Domination> growth_dominates(const GrowthFunction& f, const GrowthFunction& g,
                                                  std::size_t c_max) {
  bool any_range = false;
  for (std::size_t c = 1; c <= c_max; ++c) {
    if (g.faithful_max() < c) continue;
    const std::size_t n_hi = std::min(f.faithful_max(), (g.faithful_max() - c) / c);
    any_range = true;
    bool ok = true;
    for (std::size_t n = 0; n <= n_hi && ok; ++n)
      ok = f(n) <= checked_add(checked_mul(c, g(c * n + c)), c);
    if (ok) return Domination{c, n_hi};
  }
  if (!any_range) throw Error("inconclusive: no sample range is comparable for any C <= C_max");
  return std::nullopt;
}

struct DegreeFit {
  double degree = 0;
  bool exponential = false;
  double loglog_rms = 0;
  double semilog_rms = 0;
};

/// Growth degree as 1 + the least-squares slope of log s(n) against log n,
/// where s(n) = beta(n) - beta(n-1) is the sphere size, over n >= 2. Flags
/// exponential growth when the log-log fit is poor and log s(n) is closer to
/// linear in n.
inline DegreeFit degree_fit(const GrowthFunction& f) {
  if (f.beta.size() < 5) throw Error("degree fit needs at least 5 samples");
  std::vector<double> xs, ns, ys;
  for (std::size_t n = 2; n < f.beta.size(); ++n) {
    const auto s = f.beta[n] - f.beta[n - 1];
    if (s == 0) break;
    xs.push_back(std::log(static_cast<double>(n)));
    ns.push_back(static_cast<double>(n));
    ys.push_back(std::log(static_cast<double>(s)));
  }
  if (xs.size() < 2) throw Error("degree fit needs at least two growing spheres");
  auto fit = [&](const std::vector<double>& x) {
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += ys[i];
      sxx += x[i] * x[i];
      sxy += x[i] * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icept = (sy - slope * sx) / m;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = ys[i] - (slope * x[i] + icept);
      rss += r * r;
    }
    return std::pair{slope, std::sqrt(rss / m)};
  };
  auto [slope, ll] = fit(xs);
  auto [rate, sl] = fit(ns);
  (void)rate;
  DegreeFit out;
  out.degree = 1.0 + slope;
  out.loglog_rms = ll;
  out.semilog_rms = sl;
  out.exponential = ll > 0.05 && sl < ll;
  return out;
}

enum class VerdictKind { contained, retained, escaped, inconclusive };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::contained: return "contained";
    case VerdictKind::retained: return "retained";
    case VerdictKind::escaped: return "escaped";
    case VerdictKind::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::inconclusive;
  std::string reason;
  std::optional<Domination> domination;
  std::optional<Vertex> basepoint;
  /// Deep component of G minus the protected set that the fire never reaches.
  std::optional<VertexSet> witness;
  std::size_t unburned = 0;
};

inline Verdict containment_verdict(const GameTranscript& t) {
  Verdict v;
  v.unburned = t.final_fire().universe() - t.final_fire().size();
  switch (t.status) {
    case GameStatus::stabilized:
      v.kind = VerdictKind::contained;
      v.reason = "fire stable after " + std::to_string(t.turns()) + " turns with " +
                 std::to_string(t.final_fire().size()) + " burned";
      break;
    case GameStatus::boundary_escape:
      v.kind = VerdictKind::escaped;
      v.reason = "fire reached the truncation shell at turn " + std::to_string(t.turns());
      break;
    default:
      v.kind = VerdictKind::inconclusive;
      v.reason = "horizon reached while the fire was still spreading";
  }
  return v;
}

/// Everything the final fire can still reach when it spreads without limit
/// around the protected vertices. Unburned vertices outside this set stay
/// unburned whatever happens at the truncation shell.
inline VertexSet fire_closure(const Graph& g, const GameTranscript& t) {
  const VertexSet guard = t.all_protected() - t.final_fire();
  auto dist = bfs_distances(g, t.final_fire(), -1, &guard);
  VertexSet out(g.size());
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[v] != kUnreached) out.insert(v);
  return out;
}

/// Compares the growth of G around X_0 with the growth of the unburned set U
/// (complement of the fire closure) around its vertex nearest X_0, using
/// distances of G restricted to U.
inline Verdict retaining_verdict(const Graph& g, const GameTranscript& t, std::size_t c_max) {
  if (t.status == GameStatus::running) throw Error("transcript is not finished");
  Verdict v;
  const VertexSet closure = fire_closure(g, t);
  const VertexSet u = closure.complement();
  v.unburned = u.size();
  if (u.empty()) {
    v.kind = VerdictKind::escaped;
    v.reason = "no vertex is safe from the fire";
    return v;
  }
  const VertexSet guard = t.all_protected() - t.final_fire();
  for (auto& comp : deep_components(g, guard)) {
    if (!comp.intersects(closure)) {
      v.witness = comp;
      break;
    }
  }
  if (!v.witness) {
    v.kind = VerdictKind::escaped;
    v.reason = "no deep component is safe from the fire";
    return v;
  }
  const auto dist = bfs_distances(g, t.initial_fire());
  Vertex v0 = kNoVertex;
  for (Vertex x : u)
    if (dist[x] != kUnreached && (v0 == kNoVertex || dist[x] < dist[v0])) v0 = x;
  if (v0 == kNoVertex) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "unburned set is not connected to the initial fire";
    return v;
  }
  v.basepoint = v0;
  const std::size_t n_max = g.size();
  const auto beta_g = growth_function(g, t.initial_fire(), n_max);
  const auto beta_u = growth_function(g, g.set_of({v0}), n_max, &u);
  try {
    v.domination = growth_dominates(beta_g, beta_u, c_max);
  } catch (const Error& e) {
    v.kind = VerdictKind::inconclusive;
    v.reason = e.what();
    return v;
  }
  if (v.domination) {
    v.kind = VerdictKind::retained;
    v.reason = "Growth(G) <= Growth(U) with C=" + std::to_string(v.domination->c) + " for n <= " +
               std::to_string(v.domination->n_hi) + ", basepoint " + g.label(v0);
  } else {
    v.kind = VerdictKind::inconclusive;
    v.reason = "no C <= " + std::to_string(c_max) + " certifies domination (evidence only)";
  }
  return v;
}

inline std::size_t ends_estimate(const Graph& g, const VertexSet& w) { return deep_components(g, w).size(); }

/// True iff removing B(K, R) leaves at least two deep components. The
/// thickened set may meet the shell only where K itself does.
inline bool coarse_separation_check(const Graph& g, const VertexSet& k, std::size_t r) {
  if (g.boundary().empty()) throw Error("coarse separation needs a truncation boundary");
  if (k.empty()) throw Error("coarse separation needs a nonempty set");
  const VertexSet removed = ball(g, k, r);
  if (g.boundary().is_subset_of(removed)) throw Error("ball covers the whole truncation shell");
  if (removed.intersects(g.boundary()) && !k.intersects(g.boundary()))
    throw Error("ball touches shell");
  return deep_components(g, removed).size() >= 2;
}

struct WitnessCheck {
  bool ok = true;
  std::size_t k = 0;
  Vertex v0 = kNoVertex;
  std::size_t checked = 0;
  std::string failure;
};

/// Checks |B(e, n)| <= |B(v0, 2n+K+1) ∩ U| for a wall L with U on one side:
/// v0 is the side vertex next to L with the smallest id, v_n is a side vertex
/// at distance n+1 from L nearest v0, u_n a nearest point of L to v_n, and K
/// the largest dist(v0, u_n) seen. Only radii with complete balls are checked.
inline WitnessCheck translation_witness(const Graph& g, const VertexSet& wall, const VertexSet& u,
                                        const VertexSet& side, Vertex e) {
  WitnessCheck w;
  const auto to_wall = bfs_distances(g, wall);
  for (Vertex x : side)
    if (to_wall[x] == 1) {
      w.v0 = x;
      break;
    }
  if (w.v0 == kNoVertex) throw Error("side has no vertex next to the wall");
  const auto from_v0 = bfs_distances(g, g.set_of({w.v0}));
  const auto v0_margin = distance_to_boundary(g, g.set_of({w.v0})).value_or(0);
  const auto e_margin = distance_to_boundary(g, g.set_of({e})).value_or(0);

  std::vector<std::size_t> radii;
  for (std::size_t n = 0;; ++n) {
    Vertex vn = kNoVertex;
    for (Vertex x : side)
      if (to_wall[x] == static_cast<std::int64_t>(n + 1) && from_v0[x] != kUnreached &&
          (vn == kNoVertex || from_v0[x] < from_v0[vn]))
        vn = x;
    if (vn == kNoVertex || 2 * n + 1 > v0_margin) break;
    const auto from_vn = bfs_distances(g, g.set_of({vn}), static_cast<std::int64_t>(n + 1));
    Vertex un = kNoVertex;
    for (Vertex x : wall)
      if (from_vn[x] == static_cast<std::int64_t>(n + 1) &&
          (un == kNoVertex || from_v0[x] < from_v0[un]))
        un = x;
    if (un == kNoVertex) break;
    w.k = std::max(w.k, static_cast<std::size_t>(from_v0[un]));
    radii.push_back(n);
  }
  for (std::size_t n : radii) {
    const std::size_t big = 2 * n + w.k + 1;
    if (big > v0_margin || n > e_margin) break;
    const auto lhs = ball(g, g.set_of({e}), n).size();
    const auto rhs = (ball(g, g.set_of({w.v0}), big) & u).size();
    w.checked = n;
    if (lhs > rhs) {
      w.ok = false;
      w.failure = "n=" + std::to_string(n) + ": " + std::to_string(lhs) + " > " + std::to_string(rhs);
      return w;
    }
  }
  return w;
}

inline void write_growth_csv(std::ostream& out, const GrowthFunction& f, const std::string& name) {
  out << "series,n,beta\n";
  for (std::size_t n = 0; n < f.beta.size(); ++n) out << name << ',' << n << ',' << f.beta[n] << '\n';
}

}  // namespace fireret
