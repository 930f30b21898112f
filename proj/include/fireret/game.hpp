#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fireret/graph.hpp"

namespace fireret {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw Error("integer overflow in bound");
  return a + b;
}
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw Error("integer overflow in bound");
  return a * b;
}
inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

/// Strategy bound {f_n}, n >= 1, with exact integer values.
class Bound {
 public:
  Bound() : Bound(constant(0)) {}

  static Bound constant(std::uint64_t f) {
    return Bound([f](std::size_t) { return f; }, "const:" + std::to_string(f));
  }
  /// K * n^d.
  static Bound polynomial(std::uint64_t k, unsigned d) {
    return Bound([k, d](std::size_t n) { return checked_mul(k, checked_pow(n, d)); },
                 "poly:" + std::to_string(k) + ":" + std::to_string(d));
  }
  /// f_1, f_2, ... as listed; zero past the end of the list.
  static Bound list(std::vector<std::uint64_t> values) {
    std::string desc = "list:";
    for (std::size_t i = 0; i < values.size(); ++i)
      desc += (i ? "," : "") + std::to_string(values[i]);
    auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(values));
    return Bound([shared](std::size_t n) { return n <= shared->size() ? (*shared)[n - 1] : 0; },
                 desc);
  }
  static Bound function(std::function<std::uint64_t(std::size_t)> f, std::string desc) {
    return Bound(std::move(f), std::move(desc));
  }

  /// Parses `const:<f>`, `poly:<K>:<d>` or `list:<a>,<b>,...`.
  static Bound parse(const std::string& text) {
    auto number = [&](const std::string& s) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(s, &pos);
      } catch (const std::exception&) {
        pos = std::string::npos;
      }
      if (pos != s.size() || s.empty() || s[0] == '-') throw Error("malformed bound '" + text + "'");
      return static_cast<std::uint64_t>(v);
    };
    if (text.starts_with("const:")) return constant(number(text.substr(6)));
    if (text.starts_with("poly:")) {
      auto rest = text.substr(5);
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw Error("malformed bound '" + text + "'");
      return polynomial(number(rest.substr(0, colon)),
                        static_cast<unsigned>(number(rest.substr(colon + 1))));
    }
    if (text.starts_with("list:")) {
      std::vector<std::uint64_t> v;
      std::stringstream ss(text.substr(5));
      for (std::string item; std::getline(ss, item, ',');) v.push_back(number(item));
      return list(std::move(v));
    }
    throw Error("malformed bound '" + text + "'");
  }

  std::uint64_t operator()(std::size_t n) const {
    if (n == 0) throw Error("bound is indexed from 1");
    return f_(n);
  }
  const std::string& describe() const { return desc_; }

 private:
  Bound(std::function<std::uint64_t(std::size_t)> f, std::string desc)
      : f_(std::move(f)), desc_(std::move(desc)) {}

  std::function<std::uint64_t(std::size_t)> f_;
  std::string desc_;
};

enum class GameStatus { running, stabilized, boundary_escape, horizon_reached };

inline const char* to_string(GameStatus s) {
  switch (s) {
    case GameStatus::running: return "running";
    case GameStatus::stabilized: return "stabilized";
    case GameStatus::boundary_escape: return "boundary-escape";
    case GameStatus::horizon_reached: return "horizon-reached";
  }
  return "?";
}

struct GameConfig {
  std::size_t reach = 1;
  /// Overrides the strategy's declared bound when set.
  std::optional<Bound> bound;
  std::size_t horizon = 0;
};

/// X_0..X_N and W_1..W_N of a played game.
struct GameTranscript {
  std::vector<VertexSet> burned;
  std::vector<VertexSet> chosen;
  GameStatus status = GameStatus::running;
  std::size_t reach = 1;
  std::size_t horizon = 0;
  Bound bound;

  std::size_t turns() const { return chosen.size(); }
  const VertexSet& initial_fire() const { return burned.at(0); }
  const VertexSet& fire(std::size_t n) const { return burned.at(n); }
  const VertexSet& final_fire() const { return burned.back(); }
  /// W_n, 1-based.
  const VertexSet& protection(std::size_t n) const { return chosen.at(n - 1); }
  /// W_1 ∪ ... ∪ W_n.
  VertexSet protected_through(std::size_t n) const {
    VertexSet p(burned.at(0).universe());
    for (std::size_t k = 1; k <= n; ++k) p |= chosen.at(k - 1);
    return p;
  }
  VertexSet all_protected() const { return protected_through(turns()); }
};

/// Per-turn protection chooser. Built-in strategies ignore the transcript
/// beyond their own consistency checks.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual Bound bound() const = 0;
  /// W_turn, given X_0..X_{turn-1} and W_1..W_{turn-1}.
  virtual VertexSet choose(std::size_t turn, const Graph& g, const GameTranscript& so_far) const = 0;
  /// True once every W_m with m > turn is empty.
  virtual bool done(std::size_t turn) const = 0;
  virtual std::string describe() const = 0;
};

/// Plays back a fixed list W_1, W_2, ...; empty beyond the list.
class ScriptedStrategy : public Strategy {
 public:
  ScriptedStrategy(std::vector<VertexSet> ws, Bound bound) : ws_(std::move(ws)), bound_(std::move(bound)) {
    last_ = 0;
    for (std::size_t i = 0; i < ws_.size(); ++i)
      if (!ws_[i].empty()) last_ = i + 1;
  }
  Bound bound() const override { return bound_; }
  VertexSet choose(std::size_t turn, const Graph& g, const GameTranscript&) const override {
    if (turn <= ws_.size()) return ws_[turn - 1];
    return g.empty_set();
  }
  bool done(std::size_t turn) const override { return turn >= last_; }
  std::string describe() const override { return "scripted"; }

 private:
  std::vector<VertexSet> ws_;
  Bound bound_;
  std::size_t last_;
};

/// One turn of spread: vertices joined to X_prev by a path of at most `reach`
/// edges whose vertices avoid `protected_now` ((W_1 ∪ ... ∪ W_n) \ X_{n-1}).
inline VertexSet spread_step(const Graph& g, const VertexSet& x_prev, const VertexSet& protected_now,
                             std::size_t reach) {
  auto dist = bfs_distances(g, x_prev, static_cast<std::int64_t>(reach), &protected_now);
  VertexSet out(g.size());
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[v] != kUnreached) out.insert(v);
  return out;
}

inline GameTranscript run_game(const Graph& g, const VertexSet& x0, const Strategy& s,
                               const GameConfig& cfg) {
  if (x0.empty()) throw Error("initial fire is empty");
  if (x0.universe() != g.size()) throw Error("initial fire is not a vertex set of this graph");
  if (cfg.reach < 1) throw Error("reach must be >= 1");
  if (cfg.horizon < 1) throw Error("horizon must be >= 1");
  GameTranscript t;
  t.reach = cfg.reach;
  t.horizon = cfg.horizon;
  t.bound = cfg.bound ? *cfg.bound : s.bound();
  t.burned.push_back(x0);

  const VertexSet shell = ball(g, g.boundary(), cfg.reach);
  if (x0.intersects(shell)) {
    t.status = GameStatus::boundary_escape;
    return t;
  }
  VertexSet cumulative(g.size());
  for (std::size_t n = 1; n <= cfg.horizon; ++n) {
    VertexSet w = s.choose(n, g, t);
    if (w.universe() != g.size()) throw Error("strategy returned a set of another graph");
    if (w.size() > t.bound(n)) throw Error("bound violation at turn " + std::to_string(n));
    cumulative |= w;
    const VertexSet& prev = t.burned.back();
    VertexSet next = spread_step(g, prev, cumulative - prev, cfg.reach);
    const bool unchanged = next == prev;
    t.chosen.push_back(std::move(w));
    t.burned.push_back(std::move(next));
    if (t.burned.back().intersects(shell)) {
      t.status = GameStatus::boundary_escape;
      return t;
    }
    if (unchanged && s.done(n)) {
      t.status = GameStatus::stabilized;
      return t;
    }
  }
  t.status = GameStatus::horizon_reached;
  return t;
}

/// Replays a fixed protection sequence at the given reach for `turns` turns
/// without stop rules; used for equivalence checks.
inline std::vector<VertexSet> replay(const Graph& g, const VertexSet& x0, const std::vector<VertexSet>& ws,
                                     std::size_t reach, std::size_t turns) {
  std::vector<VertexSet> xs{x0};
  VertexSet cumulative(g.size());
  for (std::size_t n = 1; n <= turns; ++n) {
    if (n <= ws.size()) cumulative |= ws[n - 1];
    xs.push_back(spread_step(g, xs.back(), cumulative - xs.back(), reach));
  }
  return xs;
}

/// Drops wasted protections: W'_{n+1} = W_{n+1} \ X_n. The replay must give
/// the same fire at every turn.
inline GameTranscript sanitize_strategy(const Graph& g, const GameTranscript& t) {
  GameTranscript out = t;
  for (std::size_t n = 1; n <= t.turns(); ++n) out.chosen[n - 1] = t.chosen[n - 1] - t.burned[n - 1];
  auto xs = replay(g, t.initial_fire(), out.chosen, t.reach, t.turns());
  for (std::size_t n = 0; n < xs.size(); ++n) {
    if (!(xs[n] == t.burned[n]))
      throw Error("internal: sanitized replay diverges at turn " + std::to_string(n));
    if (n < t.turns() && out.chosen[n].intersects(xs[n]))
      throw Error("internal: sanitized protection meets fire at turn " + std::to_string(n + 1));
  }
  return out;
}

/// V_n = W_{(n-1)r+1} ∪ ... ∪ W_{nr} and a_n = f_{(n-1)r+1} + ... + f_{nr}.
inline std::pair<std::vector<VertexSet>, Bound> compress_for_reach(const std::vector<VertexSet>& ws,
                                                                   const Bound& fs, std::size_t r) {
  if (r < 1) throw Error("reach must be >= 1");
  if (r == 1) return {ws, fs};
  std::vector<VertexSet> vs;
  for (std::size_t start = 0; start < ws.size(); start += r) {
    VertexSet v = ws[start];
    for (std::size_t i = start + 1; i < std::min(ws.size(), start + r); ++i) v |= ws[i];
    vs.push_back(std::move(v));
  }
  Bound a = Bound::function(
      [fs, r](std::size_t n) {
        std::uint64_t sum = 0;
        for (std::size_t k = (n - 1) * r + 1; k <= n * r; ++k) sum = checked_add(sum, fs(k));
        return sum;
      },
      "block" + std::to_string(r) + "(" + fs.describe() + ")");
  return {std::move(vs), std::move(a)};
}

inline bool bound_check(const GameTranscript& t, const Bound& fs) {
  for (std::size_t n = 1; n <= t.turns(); ++n)
    if (t.protection(n).size() > fs(n)) return false;
  return true;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string id_list(const Graph& g, const VertexSet& s) {
  std::string out;
  for (Vertex v : s) {
    if (!out.empty()) out += ' ';
    out += g.label(v);
  }
  return out;
}

}  // namespace detail

/// CSV export, one row per turn including turn 0. `status` is "running" on
/// every row but the last, which carries the final status.
inline void write_transcript_csv(std::ostream& out, const Graph& g, const GameTranscript& t) {
  out << "turn,burned_count,protected_count,new_burned_ids,chosen_ids,status\n";
  VertexSet protected_so_far(g.size());
  for (std::size_t n = 0; n <= t.turns(); ++n) {
    VertexSet fresh = n == 0 ? t.burned[0] : t.burned[n] - t.burned[n - 1];
    VertexSet chosen = n == 0 ? g.empty_set() : t.chosen[n - 1];
    protected_so_far |= chosen;
    const bool last = n == t.turns();
    out << n << ',' << t.burned[n].size() << ',' << (protected_so_far - t.burned[n]).size() << ','
        << detail::csv_field(detail::id_list(g, fresh)) << ','
        << detail::csv_field(detail::id_list(g, chosen)) << ','
        << (last ? to_string(t.status) : "running") << '\n';
  }
}

}  // namespace fireret
