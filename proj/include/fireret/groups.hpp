#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fireret/vertex_set.hpp"

namespace fireret {

/// Canonical form of a group element, flattened to integers. Each model owns
/// its encoding; two elements of one model are equal iff their codes are.
struct Element {
  std::vector<std::int64_t> code;
  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto c : e.code) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Named subgroup of a model, given by a membership predicate on canonical
/// forms. `growth_degree` is the polynomial growth degree of the subgroup
/// (0 for finite subgroups).
struct SubgroupSpec {
  std::string name;
  std::function<bool(const Element&)> contains;
  bool finite = false;
  std::size_t growth_degree = 0;
};

/// A finitely generated group with a fixed symmetric generating set.
///
/// Generators are addressed by index; `inverse_of(i)` is the index of the
/// inverse generator (possibly `i` itself for involutions).
class GroupModel {
 public:
  virtual ~GroupModel() = default;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& generators() const { return symbols_; }
  std::size_t inverse_of(std::size_t gen) const { return inverses_.at(gen); }

  virtual Element identity() const = 0;
  /// Canonical form of x * generator(gen).
  virtual Element multiply(const Element& x, std::size_t gen) const = 0;
  virtual std::string format(const Element& x) const = 0;

  virtual bool finite() const { return false; }
  /// Polynomial growth degree when the model has polynomial growth.
  virtual std::optional<std::size_t> growth_degree() const { return std::nullopt; }
  /// Integer plane coordinates, for models that embed in a 2D grid.
  virtual std::optional<std::array<double, 2>> coordinates(const Element&) const {
    return std::nullopt;
  }

  std::optional<std::size_t> find_generator(std::string_view symbol) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == symbol) return i;
    return std::nullopt;
  }
  std::size_t generator_index(std::string_view symbol) const {
    auto i = find_generator(symbol);
    if (!i) throw Error("unknown generator symbol '" + std::string(symbol) + "' in " + name_);
    return *i;
  }
  Element multiply(const Element& x, std::string_view symbol) const {
    return multiply(x, generator_index(symbol));
  }
  Element apply_word(Element x, std::span<const std::size_t> word) const {
    for (auto g : word) x = multiply(x, g);
    return x;
  }
  std::vector<std::size_t> inverse_word(std::span<const std::size_t> word) const {
    std::vector<std::size_t> out(word.rbegin(), word.rend());
    for (auto& g : out) g = inverse_of(g);
    return out;
  }

  /// Parses "e", a model-specific literal (e.g. "(1,2)"), or a word over the
  /// generator symbols such as "aaB".
  Element parse(std::string_view text) const {
    auto s = trim(text);
    if (s == "e") return identity();
    if (auto lit = parse_literal(s)) return *lit;
    return apply_word(identity(), tokenize(s));
  }

  /// Greedy longest-match tokenisation of a generator word.
  std::vector<std::size_t> tokenize(std::string_view word) const {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < word.size()) {
      if (std::isspace(static_cast<unsigned char>(word[pos]))) {
        ++pos;
        continue;
      }
      std::size_t best_len = 0, best = 0;
      for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto& s = symbols_[i];
        if (s.size() > best_len && word.substr(pos, s.size()) == s) {
          best_len = s.size();
          best = i;
        }
      }
      if (best_len == 0)
        throw Error("cannot parse '" + std::string(word) + "' as an element of " + name_);
      out.push_back(best);
      pos += best_len;
    }
    return out;
  }

  /// Built-in subgroups. Every model has "trivial"; combinators and lattices
  /// add their own.
  virtual std::optional<SubgroupSpec> subgroup(std::string_view name) const {
    if (name == "trivial") {
      auto id = identity();
      return SubgroupSpec{"trivial", [id](const Element& x) { return x == id; }, true, 0};
    }
    return std::nullopt;
  }
  SubgroupSpec require_subgroup(std::string_view name) const {
    auto s = subgroup(name);
    if (!s) throw Error("model " + name_ + " has no built-in subgroup '" + std::string(name) + "'");
    return *s;
  }

 protected:
  virtual std::optional<Element> parse_literal(std::string_view) const { return std::nullopt; }

  void set_generators(std::vector<std::string> symbols, std::vector<std::size_t> inverses) {
    if (symbols.size() != inverses.size()) throw Error("generator/inverse count mismatch");
    for (std::size_t i = 0; i < inverses.size(); ++i)
      if (inverses.at(i) >= symbols.size() || inverses[inverses[i]] != i)
        throw Error("generator list of " + name_ + " is not closed under inverses");
    symbols_ = std::move(symbols);
    inverses_ = std::move(inverses);
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }
  static std::optional<std::int64_t> parse_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
  }
  /// Splits "(a,b,...)" at top-level commas; nullopt if not parenthesised.
  static std::optional<std::vector<std::string_view>> split_tuple(std::string_view s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
    s = s.substr(1, s.size() - 2);
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    parts.push_back(s.substr(start));
    return parts;
  }

  std::string name_;

 private:
  std::vector<std::string> symbols_;
  std::vector<std::size_t> inverses_;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

/// Z^d with an arbitrary finite symmetric set of step vectors. The standard
/// basis gives `Z^d:<d>`; `Z2alt` uses (1,0), (0,1), (1,1) and their inverses.
class LatticeModel : public GroupModel {
 public:
  LatticeModel(std::string name, std::size_t dim, std::vector<std::vector<std::int64_t>> steps,
               std::vector<std::string> symbols)
      : dim_(dim) {
    name_ = std::move(name);
    std::vector<std::string> all_symbols;
    std::vector<std::size_t> inverses;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].size() != dim) throw Error("lattice step of wrong dimension");
      steps_.push_back(steps[i]);
      auto neg = steps[i];
      for (auto& c : neg) c = -c;
      steps_.push_back(neg);
      all_symbols.push_back(symbols.at(2 * i));
      all_symbols.push_back(symbols.at(2 * i + 1));
      inverses.push_back(2 * i + 1);
      inverses.push_back(2 * i);
    }
    set_generators(std::move(all_symbols), std::move(inverses));
  }

  static ModelPtr standard(std::size_t dim, std::vector<std::string> letters = {}) {
    if (dim == 0) throw Error("Z^d needs d >= 1");
    std::vector<std::vector<std::int64_t>> steps;
    std::vector<std::string> symbols;
    static const char* kLetters[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<std::int64_t> e(dim, 0);
      e[i] = 1;
      steps.push_back(e);
      std::string lo = !letters.empty() ? letters.at(i)
                       : dim <= 3       ? std::string(kLetters[i])
                                        : "x" + std::to_string(i + 1);
      std::string up = lo;
      up[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(up[0])));
      symbols.push_back(lo);
      symbols.push_back(up);
    }
    return std::make_shared<LatticeModel>("Z^" + std::to_string(dim), dim, std::move(steps),
                                          std::move(symbols));
  }

  static ModelPtr z2_alternate() {
    return std::make_shared<LatticeModel>(
        "Z2alt", 2, std::vector<std::vector<std::int64_t>>{{1, 0}, {0, 1}, {1, 1}},
        std::vector<std::string>{"x", "X", "y", "Y", "w", "W"});
  }

  std::size_t dimension() const { return dim_; }

  Element identity() const override { return {std::vector<std::int64_t>(dim_, 0)}; }
  Element multiply(const Element& x, std::size_t gen) const override {
    Element y = x;
    const auto& s = steps_.at(gen);
    for (std::size_t i = 0; i < dim_; ++i) y.code[i] += s[i];
    return y;
  }
  std::string format(const Element& x) const override {
    if (dim_ == 1) return std::to_string(x.code[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) s += ',';
      s += std::to_string(x.code[i]);
    }
    return s + ")";
  }
  std::optional<std::size_t> growth_degree() const override { return dim_; }
  std::optional<std::array<double, 2>> coordinates(const Element& x) const override {
    if (dim_ == 1) return std::array<double, 2>{static_cast<double>(x.code[0]), 0.0};
    if (dim_ == 2)
      return std::array<double, 2>{static_cast<double>(x.code[0]), static_cast<double>(x.code[1])};
    return std::nullopt;
  }

  /// "coord<i><j>..." is the subgroup spanned by the listed basis vectors.
  std::optional<SubgroupSpec> subgroup(std::string_view name) const override {
    if (name.starts_with("coord") && name.size() > 5) {
      std::set<std::size_t> axes;
      for (char c : name.substr(5)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        auto a = static_cast<std::size_t>(c - '0');
        if (a >= dim_) throw Error("coordinate " + std::to_string(a) + " out of range for " + name_);
        axes.insert(a);
      }
      const auto dim = dim_;
      return SubgroupSpec{std::string(name),
                          [axes, dim](const Element& x) {
                            for (std::size_t i = 0; i < dim; ++i)
                              if (!axes.contains(i) && x.code[i] != 0) return false;
                            return true;
                          },
                          false, axes.size()};
    }
    return GroupModel::subgroup(name);
  }

 protected:
  std::optional<Element> parse_literal(std::string_view s) const override {
    if (dim_ == 1) {
      if (auto v = parse_int(s)) return Element{{*v}};
    }
    auto parts = split_tuple(s);
    if (!parts || parts->size() != dim_) return std::nullopt;
    Element e;
    for (auto p : *parts) {
      auto v = parse_int(p);
      if (!v) return std::nullopt;
      e.code.push_back(*v);
    }
    return e;
  }

 private:
  std::size_t dim_;
  std::vector<std::vector<std::int64_t>> steps_;
};

/// Free group on k letters; canonical form is the freely reduced word, coded
/// as +i / -i for letter i (1-based) and its inverse.
class FreeGroupModel : public GroupModel {
 public:
  explicit FreeGroupModel(std::size_t rank) : rank_(rank) {
    if (rank == 0 || rank > 26) throw Error("free group rank must be in 1..26");
    name_ = "F" + std::to_string(rank);
    std::vector<std::string> symbols;
    std::vector<std::size_t> inverses;
    for (std::size_t i = 0; i < rank; ++i) {
      symbols.push_back(std::string(1, static_cast<char>('a' + i)));
      symbols.push_back(std::string(1, static_cast<char>('A' + i)));
      inverses.push_back(2 * i + 1);
      inverses.push_back(2 * i);
    }
    set_generators(std::move(symbols), std::move(inverses));
  }

  Element identity() const override { return {}; }
  Element multiply(const Element& x, std::size_t gen) const override {
    if (gen >= 2 * rank_) throw Error("generator index out of range");
    const auto letter = static_cast<std::int64_t>(gen / 2 + 1) * (gen % 2 ? -1 : 1);
    Element y = x;
    if (!y.code.empty() && y.code.back() == -letter)
      y.code.pop_back();
    else
      y.code.push_back(letter);
    return y;
  }
  std::string format(const Element& x) const override {
    if (x.code.empty()) return "e";
    std::string s;
    for (auto c : x.code) s += generators()[static_cast<std::size_t>(2 * (std::abs(c) - 1) + (c < 0))];
    return s;
  }
  std::optional<std::size_t> growth_degree() const override {
    return rank_ == 1 ? std::optional<std::size_t>(1) : std::nullopt;
  }

 private:
  std::size_t rank_;
};

/// Finite cyclic group Z/n with generator c (self-inverse when n = 2).
class CyclicModel : public GroupModel {
 public:
  explicit CyclicModel(std::int64_t order) : order_(order) {
    if (order < 2) throw Error("cyclic group order must be >= 2");
    name_ = "C" + std::to_string(order);
    if (order == 2)
      set_generators({"c"}, {0});
    else
      set_generators({"c", "C"}, {1, 0});
  }
  Element identity() const override { return {{0}}; }
  Element multiply(const Element& x, std::size_t gen) const override {
    const std::int64_t step = gen == 0 ? 1 : -1;
    return {{((x.code[0] + step) % order_ + order_) % order_}};
  }
  std::string format(const Element& x) const override {
    if (x.code[0] == 0) return "e";
    if (x.code[0] == 1) return "c";
    return "c^" + std::to_string(x.code[0]);
  }
  bool finite() const override { return true; }
  std::optional<std::size_t> growth_degree() const override { return 0; }

 protected:
  std::optional<Element> parse_literal(std::string_view s) const override {
    if (s.starts_with("c^"))
      if (auto v = parse_int(s.substr(2))) return Element{{((*v % order_) + order_) % order_}};
    return std::nullopt;
  }

 private:
  std::int64_t order_;
};

namespace detail {

// Generator symbols of the two factors of a combinator, suffixed with the
// factor number when the two alphabets collide.
inline std::pair<std::vector<std::string>, std::vector<std::size_t>> combined_generators(
    const GroupModel& a, const GroupModel& b) {
  std::set<std::string> left(a.generators().begin(), a.generators().end());
  bool clash = false;
  for (auto& s : b.generators()) clash = clash || left.contains(s);
  std::vector<std::string> symbols;
  std::vector<std::size_t> inverses;
  for (std::size_t i = 0; i < a.generators().size(); ++i) {
    symbols.push_back(a.generators()[i] + (clash ? "1" : ""));
    inverses.push_back(a.inverse_of(i));
  }
  const auto na = a.generators().size();
  for (std::size_t i = 0; i < b.generators().size(); ++i) {
    symbols.push_back(b.generators()[i] + (clash ? "2" : ""));
    inverses.push_back(na + b.inverse_of(i));
  }
  return {std::move(symbols), std::move(inverses)};
}

}  // namespace detail

/// Direct product A x B; code is [|a|, a..., b...]. Generators of A come
/// first, so generators of different factors commute.
class ProductModel : public GroupModel {
 public:
  ProductModel(ModelPtr a, ModelPtr b, std::string name = {})
      : a_(std::move(a)), b_(std::move(b)) {
    name_ = name.empty() ? "prod(" + a_->name() + "," + b_->name() + ")" : std::move(name);
    auto [symbols, inverses] = detail::combined_generators(*a_, *b_);
    set_generators(std::move(symbols), std::move(inverses));
  }

  const GroupModel& left() const { return *a_; }
  const GroupModel& right() const { return *b_; }

  Element identity() const override { return join(a_->identity(), b_->identity()); }
  Element multiply(const Element& x, std::size_t gen) const override {
    auto [a, b] = split(x);
    const auto na = a_->generators().size();
    if (gen < na)
      a = a_->multiply(a, gen);
    else
      b = b_->multiply(b, gen - na);
    return join(a, b);
  }
  std::string format(const Element& x) const override {
    auto [a, b] = split(x);
    return "(" + a_->format(a) + "," + b_->format(b) + ")";
  }
  bool finite() const override { return a_->finite() && b_->finite(); }
  std::optional<std::size_t> growth_degree() const override {
    auto da = a_->growth_degree(), db = b_->growth_degree();
    if (!da || !db) return std::nullopt;
    return *da + *db;
  }

  /// "factor0" = A x {1}, "factor1" = {1} x B.
  std::optional<SubgroupSpec> subgroup(std::string_view name) const override {
    if (name == "factor0" || name == "factor1") {
      const bool first = name == "factor0";
      const auto& f = first ? *a_ : *b_;
      const Element other = first ? b_->identity() : a_->identity();
      auto self = this;
      return SubgroupSpec{std::string(name),
                          [self, first, other](const Element& x) {
                            auto [a, b] = self->split(x);
                            return (first ? b : a) == other;
                          },
                          f.finite(), f.growth_degree().value_or(0)};
    }
    return GroupModel::subgroup(name);
  }

  std::pair<Element, Element> split(const Element& x) const {
    const auto na = static_cast<std::size_t>(x.code.at(0));
    Element a{{x.code.begin() + 1, x.code.begin() + 1 + static_cast<std::ptrdiff_t>(na)}};
    Element b{{x.code.begin() + 1 + static_cast<std::ptrdiff_t>(na), x.code.end()}};
    return {std::move(a), std::move(b)};
  }
  static Element join(const Element& a, const Element& b) {
    Element x;
    x.code.reserve(1 + a.code.size() + b.code.size());
    x.code.push_back(static_cast<std::int64_t>(a.code.size()));
    x.code.insert(x.code.end(), a.code.begin(), a.code.end());
    x.code.insert(x.code.end(), b.code.begin(), b.code.end());
    return x;
  }

 protected:
  std::optional<Element> parse_literal(std::string_view s) const override {
    auto parts = split_tuple(s);
    if (!parts || parts->size() != 2) return std::nullopt;
    return join(a_->parse((*parts)[0]), b_->parse((*parts)[1]));
  }

 private:
  ModelPtr a_, b_;
};

/// F2 x Z, generated by a, b (free factor) and the central t. It is the
/// amalgam (Z x Z) *_Z (Z x Z) over <t>; elements are pairs (reduced word, n).
class F2xZModel : public ProductModel {
 public:
  F2xZModel()
      : ProductModel(std::make_shared<FreeGroupModel>(2), LatticeModel::standard(1, {"t"}),
                     "F2xZ") {}

  /// "t" (alias "center") is the central cyclic factor, the splitting subgroup.
  std::optional<SubgroupSpec> subgroup(std::string_view name) const override {
    if (name == "t" || name == "center") {
      auto s = ProductModel::subgroup("factor1");
      s->name = "t";
      return s;
    }
    return ProductModel::subgroup(name);
  }
};

/// Free product A * B in alternating normal form. Each syllable is coded as
/// [factor, len, data..., len] so the last syllable can be found from the end.
class FreeProductModel : public GroupModel {
 public:
  FreeProductModel(ModelPtr a, ModelPtr b) : a_(std::move(a)), b_(std::move(b)) {
    name_ = "free(" + a_->name() + "," + b_->name() + ")";
    auto [symbols, inverses] = detail::combined_generators(*a_, *b_);
    set_generators(std::move(symbols), std::move(inverses));
  }

  Element identity() const override { return {}; }
  Element multiply(const Element& x, std::size_t gen) const override {
    const auto na = a_->generators().size();
    const std::int64_t factor = gen < na ? 0 : 1;
    const auto& f = factor == 0 ? *a_ : *b_;
    const auto local = factor == 0 ? gen : gen - na;
    Element y = x;
    if (!y.code.empty()) {
      const auto len = static_cast<std::size_t>(y.code.back());
      const auto start = y.code.size() - len - 3;
      if (y.code[start] == factor) {
        Element last{{y.code.begin() + static_cast<std::ptrdiff_t>(start + 2),
                      y.code.end() - 1}};
        y.code.resize(start);
        Element prod = f.multiply(last, local);
        if (!(prod == f.identity())) push(y, factor, prod);
        return y;
      }
    }
    push(y, factor, f.multiply(f.identity(), local));
    return y;
  }
  std::string format(const Element& x) const override {
    if (x.code.empty()) return "e";
    std::string s;
    for (auto& [factor, syl] : syllables(x)) {
      s += factor == 0 ? "[" : "{";
      s += (factor == 0 ? *a_ : *b_).format(syl);
      s += factor == 0 ? "]" : "}";
    }
    return s;
  }

  /// "factor0" / "factor1": the image of A (resp. B).
  std::optional<SubgroupSpec> subgroup(std::string_view name) const override {
    if (name == "factor0" || name == "factor1") {
      const std::int64_t which = name == "factor0" ? 0 : 1;
      const auto& f = which == 0 ? *a_ : *b_;
      auto self = this;
      return SubgroupSpec{std::string(name),
                          [self, which](const Element& x) {
                            auto syl = self->syllables(x);
                            return syl.empty() || (syl.size() == 1 && syl[0].first == which);
                          },
                          f.finite(), f.growth_degree().value_or(0)};
    }
    return GroupModel::subgroup(name);
  }

  std::vector<std::pair<std::int64_t, Element>> syllables(const Element& x) const {
    std::vector<std::pair<std::int64_t, Element>> out;
    std::size_t pos = 0;
    while (pos < x.code.size()) {
      const auto factor = x.code[pos];
      const auto len = static_cast<std::size_t>(x.code[pos + 1]);
      Element syl{{x.code.begin() + static_cast<std::ptrdiff_t>(pos + 2),
                   x.code.begin() + static_cast<std::ptrdiff_t>(pos + 2 + len)}};
      out.emplace_back(factor, std::move(syl));
      pos += len + 3;
    }
    return out;
  }

 protected:
  std::optional<Element> parse_literal(std::string_view s) const override {
    if (s.empty() || (s.front() != '[' && s.front() != '{')) return std::nullopt;
    Element x = identity();
    std::size_t pos = 0;
    while (pos < s.size()) {
      const char open = s[pos];
      const char close = open == '[' ? ']' : open == '{' ? '}' : '\0';
      if (!close) return std::nullopt;
      auto end = s.find(close, pos);
      if (end == std::string_view::npos) return std::nullopt;
      const auto& f = open == '[' ? *a_ : *b_;
      const std::int64_t factor = open == '[' ? 0 : 1;
      Element syl = f.parse(s.substr(pos + 1, end - pos - 1));
      // Re-multiply through generators so adjacent equal-factor syllables merge.
      for (auto g : word_for(f, syl)) x = multiply(x, g + (factor == 0 ? 0 : a_->generators().size()));
      pos = end + 1;
    }
    return x;
  }

 private:
  static void push(Element& y, std::int64_t factor, const Element& syl) {
    y.code.push_back(factor);
    y.code.push_back(static_cast<std::int64_t>(syl.code.size()));
    y.code.insert(y.code.end(), syl.code.begin(), syl.code.end());
    y.code.push_back(static_cast<std::int64_t>(syl.code.size()));
  }
  // Breadth-first search for a word in a factor; factors are small in practice.
  static std::vector<std::size_t> word_for(const GroupModel& f, const Element& target) {
    struct Node {
      Element e;
      std::vector<std::size_t> word;
    };
    std::vector<Node> frontier{{f.identity(), {}}};
    std::set<Element> seen{f.identity()};
    for (std::size_t depth = 0; depth < 64; ++depth) {
      std::vector<Node> next;
      for (auto& n : frontier) {
        if (n.e == target) return n.word;
        for (std::size_t g = 0; g < f.generators().size(); ++g) {
          auto e = f.multiply(n.e, g);
          if (!seen.insert(e).second) continue;
          auto w = n.word;
          w.push_back(g);
          next.push_back({std::move(e), std::move(w)});
        }
      }
      frontier = std::move(next);
    }
    throw Error("syllable too long to resolve in " + f.name());
  }

  ModelPtr a_, b_;
};

/// Parses the model selection strings `Z^d:<d>`, `F:<k>`, `C:<n>`, `Z2alt`,
/// `F2xZ`, `prod(<m>,<m>)` and `free(<m>,<m>)`.
inline ModelPtr parse_model(std::string_view spec) {
  auto s = std::string(spec);
  auto fail = [&]() -> ModelPtr { throw Error("unknown model '" + s + "'"); };
  auto number_after = [&](std::string_view prefix) -> std::int64_t {
    std::int64_t v = 0;
    auto rest = spec.substr(prefix.size());
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || p != rest.data() + rest.size() || v <= 0)
      throw Error("malformed model '" + s + "'");
    return v;
  };
  if (spec == "Z2alt") return LatticeModel::z2_alternate();
  if (spec == "F2xZ") return std::make_shared<F2xZModel>();
  if (spec.starts_with("Z^d:")) return LatticeModel::standard(static_cast<std::size_t>(number_after("Z^d:")));
  if (spec.starts_with("F:")) return std::make_shared<FreeGroupModel>(static_cast<std::size_t>(number_after("F:")));
  if (spec.starts_with("C:")) return std::make_shared<CyclicModel>(number_after("C:"));
  for (std::string_view head : {"prod(", "free("}) {
    if (!spec.starts_with(head) || spec.back() != ')') continue;
    auto inner = spec.substr(head.size(), spec.size() - head.size() - 1);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0) {
        auto a = parse_model(inner.substr(0, i));
        auto b = parse_model(inner.substr(i + 1));
        if (head == "prod(") return std::make_shared<ProductModel>(a, b);
        return std::make_shared<FreeProductModel>(a, b);
      }
    }
    return fail();
  }
  return fail();
}

}  // namespace fireret
