#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqsj/error.hpp"
#include "cqsj/value.hpp"

namespace cqsj::reductions {

/// A directed graph, optionally split into three parts U, V, W.
struct Graph {
  struct Parts {
    std::set<std::string> U, V, W;
  };

  std::set<std::string> vertices;
  std::set<std::pair<std::string, std::string>> edges;
  std::optional<Parts> parts;

  void add_edge(const std::string& a, const std::string& b) {
    vertices.insert(a);
    vertices.insert(b);
    edges.emplace(a, b);
  }

  bool has_edge(const std::string& a, const std::string& b) const { return edges.count({a, b}) > 0; }

  std::vector<std::string> out(const std::string& a) const {
    std::vector<std::string> r;
    for (auto it = edges.lower_bound({a, ""}); it != edges.end() && it->first == a; ++it) r.push_back(it->second);
    return r;
  }
};

inline void check_vertex_name(const std::string& v) {
  if (v.empty()) throw SchemaError("empty vertex name");
  for (char c : v)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
      throw SchemaError("vertex name " + v + " must match [a-z0-9_]+");
  if (v == kBottomToken) throw SchemaError("vertex name " + v + " is reserved");
}

/// Edge list `u v` per line; a lone name declares an isolated vertex;
/// optional header `#parts U:a,b V:c W:d`. `%` starts a comment.
inline Graph parse_graph(std::string_view text) {
  Graph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('%'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (words.empty()) continue;
    if (words[0] == "#parts") {
      Graph::Parts parts;
      for (std::size_t i = 1; i < words.size(); ++i) {
        const auto colon = words[i].find(':');
        if (colon == std::string::npos) throw ParseError("malformed part " + words[i], lineno, 1);
        const std::string name = words[i].substr(0, colon);
        std::set<std::string>* target = name == "U" ? &parts.U : name == "V" ? &parts.V : name == "W" ? &parts.W : nullptr;
        if (!target) throw ParseError("unknown part " + name, lineno, 1);
        std::stringstream items(words[i].substr(colon + 1));
        for (std::string v; std::getline(items, v, ',');) {
          if (v.empty()) continue;
          check_vertex_name(v);
          target->insert(v);
          g.vertices.insert(v);
        }
      }
      g.parts = std::move(parts);
      continue;
    }
    if (words.size() > 2) throw ParseError("expected `u v`", lineno, 1);
    for (const auto& w : words) {
      try {
        check_vertex_name(w);
      } catch (const SchemaError& e) {
        throw ParseError(e.what(), lineno, 1);
      }
    }
    if (words.size() == 1)
      g.vertices.insert(words[0]);
    else
      g.add_edge(words[0], words[1]);
  }
  if (g.parts) {
    const auto& p = *g.parts;
    for (const auto& v : g.vertices) {
      const int hits = int(p.U.count(v)) + int(p.V.count(v)) + int(p.W.count(v));
      if (hits != 1) throw SchemaError("vertex " + v + " must lie in exactly one part");
    }
  }
  return g;
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  if (g.parts) {
    auto list = [](const std::set<std::string>& s) {
      std::string r;
      for (const auto& v : s) r += (r.empty() ? "" : ",") + v;
      return r;
    };
    out << "#parts U:" << list(g.parts->U) << " V:" << list(g.parts->V) << " W:" << list(g.parts->W) << "\n";
  }
  std::set<std::string> touched;
  for (const auto& [a, b] : g.edges) touched.insert({a, b});
  for (const auto& v : g.vertices)
    if (!touched.count(v)) out << v << "\n";
  for (const auto& [a, b] : g.edges) out << a << " " << b << "\n";
  return out.str();
}

/// n vertices v0..v{n-1} and m distinct directed edges without self-loops.
inline Graph gen_random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.vertices.insert("v" + std::to_string(i));
  if (n < 2) return g;
  m = std::min(m, n * (n - 1));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (g.edges.size() < m) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a != b) g.add_edge("v" + std::to_string(a), "v" + std::to_string(b));
  }
  return g;
}

/// Parts of exactly the given sizes; each U->V, V->W and W->U pair is an
/// edge with probability p.
inline Graph gen_tripartite(std::size_t nU, std::size_t nV, std::size_t nW, double p, std::uint64_t seed) {
  Graph g;
  Graph::Parts parts;
  auto make = [&](const char* prefix, std::size_t n, std::set<std::string>& part) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(prefix + std::to_string(i));
      part.insert(out.back());
      g.vertices.insert(out.back());
    }
    return out;
  };
  const auto U = make("u", nU, parts.U), V = make("v", nV, parts.V), W = make("w", nW, parts.W);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  for (const auto& u : U)
    for (const auto& v : V)
      if (coin(rng)) g.add_edge(u, v);
  for (const auto& v : V)
    for (const auto& w : W)
      if (coin(rng)) g.add_edge(v, w);
  for (const auto& w : W)
    for (const auto& u : U)
      if (coin(rng)) g.add_edge(w, u);
  g.parts = std::move(parts);
  return g;
}

}  // namespace cqsj::reductions
