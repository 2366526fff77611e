#pragma once

// Shared helpers for the unit tests and the acceptance runner.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cqsj/engines/bench.hpp"
#include "cqsj/engines/cheater.hpp"
#include "cqsj/engines/oracle.hpp"
#include "cqsj/engines/select.hpp"
#include "cqsj/fixtures.hpp"
#include "cqsj/reductions/encoding.hpp"
#include "cqsj/reductions/gadgets.hpp"
#include "cqsj/reductions/generators.hpp"
#include "cqsj/structure/classify.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::testing {

inline Database db_from(const std::string& text) { return parse_database(text); }

inline std::set<std::string> as_lines(const std::set<AnswerTuple>& answers) {
  std::set<std::string> out;
  for (const auto& a : answers) out.insert(serialize_answer(a));
  return out;
}

/// Random query with up to `max_atoms` atoms over relations R, S (binary)
/// and T (ternary), variables drawn from a small pool; a random subset of
/// variables is free.
inline Query random_query(std::uint64_t seed, std::size_t max_atoms = 6, bool full = false) {
  std::mt19937_64 rng(seed);
  const std::size_t atoms = std::uniform_int_distribution<std::size_t>(std::min<std::size_t>(3, max_atoms), max_atoms)(rng);
  const std::size_t pool = std::uniform_int_distribution<std::size_t>(3, 6)(rng);
  std::uniform_int_distribution<std::size_t> pick_var(0, pool - 1), pick_rel(0, 5);
  std::vector<Atom> body;
  for (std::size_t i = 0; i < atoms; ++i) {
    const std::size_t r = pick_rel(rng);
    const std::string name = r < 3 ? "R" : r < 5 ? "S" : "T";
    const std::size_t arity = name == "T" ? 3 : 2;
    Atom a{name, {}};
    for (std::size_t j = 0; j < arity; ++j) a.args.push_back("v" + std::to_string(pick_var(rng)));
    body.push_back(a);
  }
  Query all(body, {});
  std::vector<std::string> free;
  for (const auto& v : all.vars())
    if (full || std::bernoulli_distribution(0.5)(rng)) free.push_back(v);
  return Query(body, free);
}

/// Acyclicity by exhaustive search over all labeled trees on the atoms
/// (Pruefer sequences), independent of the GYO implementation.
inline bool brute_force_acyclic(const Query& q) {
  const auto& atoms = q.atoms();
  const std::size_t n = atoms.size();
  if (n <= 2) return true;
  auto connected_ok = [&](const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    structure::JoinTree t;
    t.nodes = atoms;
    t.parent.assign(n, std::nullopt);
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          t.parent[v] = u;
          stack.push_back(v);
        }
    }
    t.root = 0;
    return structure::satisfies_running_intersection(t);
  };
  std::vector<std::size_t> seq(n - 2, 0);
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t s : seq) ++degree[s];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t s : seq) {
      for (std::size_t leaf = 0; leaf < n; ++leaf)
        if (degree[leaf] == 1) {
          edges.emplace_back(leaf, s);
          --degree[leaf];
          --degree[s];
          break;
        }
    }
    std::vector<std::size_t> last;
    for (std::size_t i = 0; i < n; ++i)
      if (degree[i] == 1) last.push_back(i);
    edges.emplace_back(last[0], last[1]);
    if (connected_ok(edges)) return true;
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) return false;
  }
}

/// Random database for oracle-equivalence checks: at most 200 facts, a few
/// planted answers, sparser domains for larger queries. When the answer set
/// exceeds `cap` the instance is re-drawn with half the facts, so queries
/// whose answers grow exponentially in the data still get small inputs.
inline Database equivalence_db(const Query& q, std::uint64_t seed, std::size_t cap = 5000) {
  // One plant of a query with many variables already yields an answer per
  // endomorphism, which runs to four digits for the spiked cycles.
  const std::size_t plants = q.vars().size() >= 12 ? 1 : 1 + seed % 3;
  const std::size_t budget = 200 - std::min<std::size_t>(190, plants * q.atoms().size());
  std::size_t m = std::min<std::size_t>(budget, 10 + (seed % 20) * 10);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = seed + attempt * 1000003ULL;
    const std::size_t n =
        q.vars().size() >= 8 ? std::max<std::size_t>(plants * q.vars().size(), 4 * m) : std::max<std::size_t>(4, m / (1 + seed % 3));
    Database db = reductions::gen_planted_db(q, n, m, plants, s);
    engines::OracleCursor probe(q, db, engines::make_ticks());
    if (m == 0 || engines::drain(probe, cap + 1).size() <= cap) return db;
    m /= 2;
  }
}

/// Empty string when the engine's stream is duplicate-free and equals the
/// oracle's answer set; a description of the mismatch otherwise.
inline std::string compare_with_oracle(const std::string& engine, const Query& q, const Database& db) {
  auto run = engines::make_engine(engine, q, db, engines::make_ticks());
  const auto got = engines::drain(*run.cursor);
  const auto set = engines::answer_set(db, got);
  const auto truth = engines::oracle_enumerate(q, db);
  if (set.size() != got.size())
    return std::to_string(got.size() - set.size()) + " duplicate answers from " + run.engine;
  if (set != truth)
    return run.engine + " produced " + std::to_string(set.size()) + " answers, oracle " + std::to_string(truth.size());
  return {};
}

/// Engines that accept q.
inline std::vector<std::string> applicable_engines(const Query& q) {
  std::vector<std::string> out;
  const Database empty = reductions::gen_random_db(reductions::schema_of(q), 1, 0, 0);
  for (const std::string e : {"acyclic", "untangle", "mirror", "bespoke"}) {
    try {
      engines::make_engine(e, q, empty, engines::make_ticks());
      out.push_back(e);
    } catch (const InapplicableEngine&) {
    }
  }
  return out;
}

struct GadgetRun {
  std::size_t answers = 0;
  std::size_t non_triangle = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t unclassified = 0;
  std::map<std::string, std::size_t> labels;
  std::set<reductions::Triangle> decoded;
  std::size_t facts = 0;
};

/// Builds the gadget for g, enumerates its query with the oracle and checks
/// every decoded triangle against the graph.
inline GadgetRun run_gadget(const reductions::Gadget& gadget, const reductions::Graph& g) {
  GadgetRun out;
  const Query q = fixtures::query(gadget.fixture);
  const Database db = gadget.build(g);
  out.facts = db.size();
  const auto truth = reductions::true_triangles(gadget, g);
  for (const auto& ans : engines::oracle_enumerate(q, db)) {
    ++out.answers;
    const auto d = gadget.decode(q, ans);
    ++out.labels[d.label];
    if (d.label == "UNCLASSIFIED") ++out.unclassified;
    if (d.label != "TRIANGLE") {
      ++out.non_triangle;
      continue;
    }
    if (!d.triangle) {
      ++out.false_positives;
      continue;
    }
    const auto t = gadget.cyclic ? reductions::normalize_rotation(*d.triangle) : *d.triangle;
    if (!truth.count(t)) ++out.false_positives;
    out.decoded.insert(t);
  }
  for (const auto& t : truth)
    if (!out.decoded.count(t)) ++out.false_negatives;
  return out;
}

/// Random graph for gadget checks (at most 50 vertices). UTD gadgets get a
/// sparse tripartite graph: their free spike variables multiply answers by
/// vertex degrees.
inline reductions::Graph gadget_graph(const reductions::Gadget& gadget, std::uint64_t seed) {
  if (gadget.needs_parts)
    return reductions::gen_tripartite(8 + seed % 25, 3 + seed % 5, 3 + (seed / 5) % 5, 0.2, seed);
  const std::size_t n = 5 + seed % 46;
  return reductions::gen_random_graph(n, n * (1 + seed % 3), seed);
}

/// Non-triangle answers allowed per vertex-plus-edge, measured on the
/// gadget_graph families (seeds 0..199) and fixed with headroom.
inline double gadget_constant(const std::string& kind) {
  static const std::map<std::string, double> c = {
      {"triangle-untangle2", 1.0},
      {"triangle-mirrorfig1", 1.0},
      {"triangle-spike-q1", 3.0},
      {"utd-spike-q4", 150.0},
  };
  return c.at(kind);
}

/// Stream in which each of `distinct` answers appears exactly c times, the
/// copies spread out so duplicates keep arriving late.
inline std::vector<engines::Answer> duplicated_stream(std::size_t distinct, std::size_t c, std::uint64_t seed) {
  std::vector<engines::Answer> out;
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i < distinct; ++i) out.push_back({static_cast<ValueId>(i)});
  std::mt19937_64 rng(seed);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace cqsj::testing
