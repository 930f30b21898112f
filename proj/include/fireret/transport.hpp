#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fireret/cayley.hpp"
#include "fireret/game.hpp"
#include "fireret/graph.hpp"

namespace fireret {

/// Two graphs with coarse inverse vertex maps. Maps are partial: kNoVertex
/// marks vertices whose image falls outside the other truncation.
struct QIPair {
  std::shared_ptr<const Graph> g;
  std::shared_ptr<const Graph> h;
  std::vector<Vertex> phi;  // G -> H
  std::vector<Vertex> psi;  // H -> G
  std::size_t c = 1;
  std::size_t delta = 0;
};

inline QIPair make_qi_pair(std::shared_ptr<const Graph> g, std::shared_ptr<const Graph> h,
                           std::vector<Vertex> phi, std::vector<Vertex> psi, std::size_t c) {
  if (phi.size() != g->size() || psi.size() != h->size()) throw Error("vertex map size mismatch");
  if (c < 1) throw Error("c must be >= 1");
  QIPair p{std::move(g), std::move(h), std::move(phi), std::move(psi), c, 0};
  p.delta = std::max(p.g->degree_bound(), p.h->degree_bound());
  return p;
}

/// Maps vertices with equal labels to each other.
inline QIPair label_correspondence(std::shared_ptr<const Graph> g, std::shared_ptr<const Graph> h,
                                   std::size_t c) {
  std::vector<Vertex> phi(g->size(), kNoVertex), psi(h->size(), kNoVertex);
  for (Vertex v = 0; v < g->size(); ++v)
    if (auto w = h->find(g->label(v))) phi[v] = *w;
  for (Vertex v = 0; v < h->size(); ++v)
    if (auto w = g->find(h->label(v))) psi[v] = *w;
  return make_qi_pair(std::move(g), std::move(h), std::move(phi), std::move(psi), c);
}

/// Vertex map file: one `<g-id> <h-id>` pair per line, '#' comments. The
/// same file defines phi and, read backwards, psi.
inline QIPair read_vertex_map(std::istream& in, std::shared_ptr<const Graph> g,
                              std::shared_ptr<const Graph> h, std::size_t c) {
  std::vector<Vertex> phi(g->size(), kNoVertex), psi(h->size(), kNoVertex);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a) || a[0] == '#') continue;
    if (!(ss >> b) || (ss >> extra))
      throw Error("vertex map line " + std::to_string(number) + ": expected '<g-id> <h-id>'");
    auto u = g->find(a);
    auto v = h->find(b);
    if (!u || !v) throw Error("vertex map line " + std::to_string(number) + ": unknown vertex");
    if (phi[*u] == kNoVertex) phi[*u] = *v;
    if (psi[*v] == kNoVertex) psi[*v] = *u;
  }
  return make_qi_pair(std::move(g), std::move(h), std::move(phi), std::move(psi), c);
}

/// The same element set as `source`, with edges given by the generators of
/// `other` (which must share the element representation) and the boundary of
/// `source`.
inline Graph companion_graph(const CayleyBall& source, const GroupModel& other) {
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  for (Vertex v = 0; v < source.graph.size(); ++v) {
    labels.push_back(source.graph.label(v));
    for (std::size_t s = 0; s < other.generators().size(); ++s)
      if (auto w = source.find(other.multiply(source.elements[v], s)); w && *w > v)
        edges.emplace_back(v, *w);
  }
  auto shell = source.graph.boundary().to_vector();
  Graph h(source.graph.size(), edges, std::move(labels), shell);
  h.declare_degree_bound(std::max(h.degree_bound(), other.generators().size()));
  if (source.graph.has_layout()) h.set_layout(source.graph.layout(), source.graph.grid_layout());
  return h;
}

struct QiReport {
  bool pass = false;
  std::size_t c = 0;
  std::size_t minimal_c = 0;
  std::string first_violation;
  std::size_t interior_g = 0;
  std::size_t interior_h = 0;
};

/// Exhaustive check of the three quasi-isometry families over interior
/// vertices (non-boundary ones): the two-sided distance inequality for phi,
/// c-density of the image of phi, and dist(u, psi(phi(u))) <= c.
inline QiReport verify_qi(const QIPair& p) {
  const Graph& g = *p.g;
  const Graph& h = *p.h;
  QiReport rep;
  rep.c = p.c;
  std::vector<Vertex> gi, hi;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.boundary().contains(v)) continue;
    if (p.phi[v] == kNoVertex) throw Error("map undefined on interior vertex '" + g.label(v) + "'");
    gi.push_back(v);
  }
  for (Vertex v = 0; v < h.size(); ++v) {
    if (h.boundary().contains(v)) continue;
    if (p.psi[v] == kNoVertex) throw Error("map undefined on interior vertex '" + h.label(v) + "'");
    hi.push_back(v);
  }
  rep.interior_g = gi.size();
  rep.interior_h = hi.size();

  // Per G-distance, the extreme H-distances seen; enough to find both the
  // first violation and the minimal passing constant.
  struct Extremes {
    std::int64_t lo = -1, hi = -1;
    Vertex lo_a = 0, lo_b = 0, hi_a = 0, hi_b = 0;
  };
  std::vector<Extremes> by_dg;
  for (Vertex a : gi) {
    auto dg = bfs_distances(g, g.set_of({a}));
    auto dh = bfs_distances(h, h.set_of({p.phi[a]}));
    for (Vertex b : gi) {
      if (b <= a) continue;
      if (dg[b] == kUnreached) continue;
      auto x = static_cast<std::size_t>(dg[b]);
      auto y = dh[p.phi[b]];
      if (y == kUnreached) y = std::numeric_limits<std::int32_t>::max();
      if (by_dg.size() <= x) by_dg.resize(x + 1);
      auto& e = by_dg[x];
      if (e.lo < 0 || y < e.lo) e = {y, e.hi, a, b, e.hi_a, e.hi_b};
      if (e.hi < 0 || y > e.hi) {
        e.hi = y;
        e.hi_a = a;
        e.hi_b = b;
      }
    }
  }
  VertexSet image(h.size());
  for (Vertex a : gi) image.insert(p.phi[a]);
  auto to_image = bfs_distances(h, image);
  std::int64_t density = 0;
  Vertex density_at = 0;
  for (Vertex v : hi) {
    auto d = to_image[v] == kUnreached ? std::numeric_limits<std::int32_t>::max() : to_image[v];
    if (d > density) {
      density = d;
      density_at = v;
    }
  }
  std::int64_t roundtrip = 0;
  Vertex roundtrip_at = 0;
  for (Vertex u : gi) {
    Vertex back = p.psi[p.phi[u]];
    if (back == kNoVertex) continue;  // phi(u) on the H shell with no preimage
    auto d = bfs_distances(g, g.set_of({u}), -1)[back];
    if (d == kUnreached) d = std::numeric_limits<std::int32_t>::max();
    if (d > roundtrip) {
      roundtrip = d;
      roundtrip_at = u;
    }
  }

  auto check = [&](std::int64_t c, std::string* why) {
    for (std::size_t x = 0; x < by_dg.size(); ++x) {
      const auto& e = by_dg[x];
      if (e.lo < 0) continue;
      const auto dx = static_cast<std::int64_t>(x);
      // dx/c - c <= dH, multiplied through by c.
      if (dx > c * (e.lo + c)) {
        if (why)
          *why = "lower inequality fails: dist_G('" + g.label(e.lo_a) + "','" + g.label(e.lo_b) +
                 "')=" + std::to_string(dx) + " but dist_H=" + std::to_string(e.lo);
        return false;
      }
      if (e.hi > c * dx + c) {
        if (why)
          *why = "upper inequality fails: dist_G('" + g.label(e.hi_a) + "','" + g.label(e.hi_b) +
                 "')=" + std::to_string(dx) + " but dist_H=" + std::to_string(e.hi);
        return false;
      }
    }
    if (density > c) {
      if (why)
        *why = "density fails: '" + h.label(density_at) + "' is " + std::to_string(density) +
               " from the image";
      return false;
    }
    if (roundtrip > c) {
      if (why)
        *why = "round trip fails: dist('" + g.label(roundtrip_at) + "', psi(phi(.)))=" +
               std::to_string(roundtrip);
      return false;
    }
    return true;
  };

  rep.pass = check(static_cast<std::int64_t>(p.c), &rep.first_violation);
  for (std::int64_t c = 1; c <= 4096; ++c) {
    if (check(c, nullptr)) {
      rep.minimal_c = static_cast<std::size_t>(c);
      break;
    }
  }
  return rep;
}

/// b_k = (f_{2c(k-1)+1} + ... + f_{2ck}) * delta^(c^2+2c+1).
inline Bound transported_bound(const Bound& fs, std::size_t c, std::size_t delta) {
  if (c < 1) throw Error("c must be >= 1");
  const std::uint64_t scale = checked_pow(delta, c * c + 2 * c + 1);
  return Bound::function(
      [fs, c, scale](std::size_t k) {
        std::uint64_t sum = 0;
        for (std::size_t i = 2 * c * (k - 1) + 1; i <= 2 * c * k; ++i) sum = checked_add(sum, fs(i));
        return checked_mul(sum, scale);
      },
      "transported(" + fs.describe() + ",c=" + std::to_string(c) + ",delta=" + std::to_string(delta) +
          ")");
}

/// First k <= k_max where f_k <= b_k <= 2c delta^(c^2+2c+1) f_{2ck} fails.
inline std::optional<std::size_t> sandwich_violation(const Bound& fs, std::size_t c, std::size_t delta,
                                                     std::size_t k_max) {
  auto b = transported_bound(fs, c, delta);
  const std::uint64_t top = checked_mul(2 * c, checked_pow(delta, c * c + 2 * c + 1));
  for (std::size_t k = 1; k <= k_max; ++k) {
    const auto bk = b(k);
    if (fs(k) > bk || bk > checked_mul(top, fs(2 * c * k))) return k;
  }
  return std::nullopt;
}

/// Q_k = (union over w in W_k of B_H(phi w, r)) \ Y_{k-1}, r = c^2 + 2c.
inline VertexSet transported_choice(const QIPair& p, const VertexSet& w, const VertexSet& y_prev) {
  const std::size_t r = p.c * p.c + 2 * p.c;
  VertexSet centers(p.h->size());
  for (Vertex v : w) {
    if (p.phi[v] == kNoVertex)
      throw Error("transported protection of '" + p.g->label(v) + "' leaves the target truncation");
    centers.insert(p.phi[v]);
  }
  return ball(*p.h, centers, r) - y_prev;
}

struct TransportTurn {
  std::size_t k = 0;
  std::size_t q_size = 0;
  std::uint64_t q_cap = 0;
  bool disjoint = true;
  bool within_cap = true;
  bool pullback = true;
  bool formula = true;
};

struct TransportReport {
  bool pass = false;
  bool item1 = true;
  bool item2 = true;
  bool formula = true;
  bool complement_inclusion = true;
  std::optional<std::size_t> first_item2_violation;
  std::string first_violation;
  std::vector<TransportTurn> turns;
};

/// Checks, at every faithful target turn k, Q_k ∩ Y_{k-1} = ∅,
/// |Q_k| <= delta^(c^2+2c) |W_k|, psi(Y_k) ⊆ X_{k-1}, and that Q_k is exactly
/// the transported formula. A turn is faithful when both fires involved were
/// recorded before a boundary escape.
inline TransportReport certify_transport(const GameTranscript& source, const GameTranscript& target,
                                         const QIPair& p, std::size_t q, Vertex h0) {
  if (source.horizon != target.horizon) throw Error("mismatched horizons");
  if (source.reach != 2 * p.c) throw Error("source game must have reach 2c");
  if (target.reach != 1) throw Error("target game must have reach 1");
  if (!(target.initial_fire() == ball(*p.h, p.h->set_of({h0}), q)))
    throw Error("target initial fire is not B_H(h0, q)");
  const std::size_t r = p.c * p.c + 2 * p.c;
  const std::uint64_t cap_scale = checked_pow(p.delta, r);

  // Index of the last fire that is still faithful in each game.
  auto last_faithful = [](const GameTranscript& t) {
    return t.status == GameStatus::boundary_escape && t.turns() > 0 ? t.turns() - 1 : t.turns();
  };
  const std::size_t src_last = last_faithful(source);
  const std::size_t tgt_last = last_faithful(target);

  TransportReport rep;
  auto fail = [&](bool& flag, std::size_t k, const std::string& what) {
    flag = false;
    if (rep.first_violation.empty()) rep.first_violation = "turn " + std::to_string(k) + ": " + what;
  };
  const VertexSet empty_g(p.g->size());
  for (std::size_t k = 1; k <= tgt_last && k - 1 <= src_last; ++k) {
    const VertexSet& w = k <= source.turns() ? source.protection(k) : empty_g;
    const VertexSet& qk = target.protection(k);
    const VertexSet& y_prev = target.fire(k - 1);
    const VertexSet& y_k = target.fire(k);
    const VertexSet& x_prev = source.fire(k - 1);
    TransportTurn turn;
    turn.k = k;
    turn.q_size = qk.size();
    turn.q_cap = checked_mul(cap_scale, w.size());
    turn.disjoint = !qk.intersects(y_prev);
    turn.within_cap = qk.size() <= turn.q_cap;
    if (!turn.disjoint) fail(rep.item1, k, "Q_k meets Y_{k-1}");
    if (!turn.within_cap) fail(rep.item1, k, "|Q_k| exceeds delta^r |W_k|");
    for (Vertex h : y_k) {
      const Vertex back = p.psi[h];
      if (back == kNoVertex || !x_prev.contains(back)) {
        turn.pullback = false;
        fail(rep.item2, k, "'" + p.h->label(h) + "' burns but its image is not in X_{k-1}");
        if (!rep.first_item2_violation) rep.first_item2_violation = k;
        break;
      }
    }
    turn.formula = qk == transported_choice(p, w, y_prev);
    if (!turn.formula) fail(rep.formula, k, "target protection differs from the transported formula");
    // Complement form: every unburned source vertex pulls back to unburned target vertices.
    VertexSet unburned_g = x_prev.complement();
    for (Vertex h = 0; h < p.h->size(); ++h) {
      if (p.psi[h] == kNoVertex || !unburned_g.contains(p.psi[h])) continue;
      if (y_k.contains(h)) {
        fail(rep.complement_inclusion, k, "psi^-1(U) not inside V");
        break;
      }
    }
    rep.turns.push_back(turn);
  }
  rep.pass = rep.item1 && rep.item2 && rep.formula && rep.complement_inclusion;
  return rep;
}

}  // namespace fireret
