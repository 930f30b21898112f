#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fireret/graph.hpp"

namespace fireret {

// Adjacency-list text format:
//
//   <id>: <neighbor id> <neighbor id> ...
//   ...
//   boundary: <id> <id> ...      (optional footer)
//
// Ids are whitespace-free tokens without ':'. Blank lines and lines starting
// with '#' are ignored. Neighbor lists may be one-sided; edges are symmetrised.

inline Graph read_adjacency_list(std::istream& in) {
  struct Line {
    std::size_t number;
    std::string head;
    std::vector<std::string> rest;
  };
  std::vector<Line> lines;
  std::vector<std::string> boundary;
  bool have_boundary = false;
  std::string raw;
  for (std::size_t number = 1; std::getline(in, raw); ++number) {
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    auto colon = raw.find(':');
    if (colon == std::string::npos)
      throw Error("line " + std::to_string(number) + ": expected '<id>: <neighbors>'");
    std::string head = raw.substr(first, colon - first);
    while (!head.empty() && (head.back() == ' ' || head.back() == '\t')) head.pop_back();
    if (head.empty()) throw Error("line " + std::to_string(number) + ": empty vertex id");
    std::istringstream rest(raw.substr(colon + 1));
    std::vector<std::string> tokens;
    for (std::string t; rest >> t;) tokens.push_back(t);
    if (head == "boundary") {
      if (have_boundary) throw Error("line " + std::to_string(number) + ": duplicate boundary line");
      have_boundary = true;
      boundary = std::move(tokens);
      continue;
    }
    if (have_boundary)
      throw Error("line " + std::to_string(number) + ": vertex line after boundary footer");
    lines.push_back({number, std::move(head), std::move(tokens)});
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> index;
  for (auto& l : lines) {
    if (!index.emplace(l.head, static_cast<Vertex>(labels.size())).second)
      throw Error("line " + std::to_string(l.number) + ": duplicate vertex '" + l.head + "'");
    labels.push_back(l.head);
  }
  auto lookup = [&](const std::string& id, std::size_t number) {
    auto it = index.find(id);
    if (it == index.end())
      throw Error("line " + std::to_string(number) + ": unknown vertex '" + id + "'");
    return it->second;
  };
  std::vector<Edge> edges;
  for (auto& l : lines)
    for (auto& n : l.rest) edges.emplace_back(index[l.head], lookup(n, l.number));
  std::vector<Vertex> shell;
  for (auto& b : boundary) shell.push_back(lookup(b, lines.empty() ? 0 : lines.back().number + 1));
  const auto n = labels.size();
  return Graph(n, edges, std::move(labels), shell);
}

inline Graph parse_adjacency_list(const std::string& text) {
  std::istringstream in(text);
  return read_adjacency_list(in);
}

inline void write_adjacency_list(std::ostream& out, const Graph& g) {
  for (Vertex v = 0; v < g.size(); ++v) {
    out << g.label(v) << ':';
    for (Vertex w : g.neighbors(v)) out << ' ' << g.label(w);
    out << '\n';
  }
  if (!g.boundary().empty()) {
    out << "boundary:";
    for (Vertex b : g.boundary()) out << ' ' << g.label(b);
    out << '\n';
  }
}

}  // namespace fireret
