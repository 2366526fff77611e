#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqsj/query.hpp"

namespace cqsj::structure {

/// A join tree (forest components are linked into one tree) over the atoms
/// of a query. `parent[i]` is the parent atom index of atom `i`, or nullopt
/// for the root.
struct JoinTree {
  std::vector<Atom> nodes;
  std::vector<std::optional<std::size_t>> parent;
  std::size_t root = 0;

  /// Atom indexes in preorder from the root (children in index order).
  std::vector<std::size_t> preorder() const {
    std::vector<std::vector<std::size_t>> children(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (parent[i]) children[*parent[i]].push_back(i);
    std::vector<std::size_t> order, stack{root};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      order.push_back(n);
      for (auto it = children[n].rbegin(); it != children[n].rend(); ++it) stack.push_back(*it);
    }
    return order;
  }
};

/// Running intersection: for each variable, the atoms containing it induce
/// a connected subtree. Also checks that `parent` forms a single tree.
inline bool satisfies_running_intersection(const JoinTree& tree) {
  const std::size_t n = tree.nodes.size();
  if (n == 0) return true;
  if (tree.parent.size() != n) return false;
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tree.parent[i]) ++roots;
    // Walk to the root; a cycle never reaches it.
    std::size_t cur = i, steps = 0;
    while (tree.parent[cur] && steps <= n) {
      cur = *tree.parent[cur];
      ++steps;
    }
    if (steps > n) return false;
  }
  if (roots != 1) return false;

  std::set<std::string> vars;
  for (const auto& a : tree.nodes) vars.insert(a.args.begin(), a.args.end());
  for (const auto& v : vars) {
    // Nodes containing v are connected iff exactly one of them has a parent
    // that does not contain v (or no parent).
    std::size_t tops = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::count(tree.nodes[i].args.begin(), tree.nodes[i].args.end(), v)) continue;
      const auto p = tree.parent[i];
      if (!p || !std::count(tree.nodes[*p].args.begin(), tree.nodes[*p].args.end(), v)) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

/// GYO ear removal. Returns a join tree iff the query is acyclic.
///
/// Among removable ears the least atom under (relation, args) goes first;
/// its parent is the least remaining atom that covers its shared variables.
inline std::optional<JoinTree> gyo_acyclic(const Query& q) {
  const auto& atoms = q.atoms();
  const std::size_t n = atoms.size();
  JoinTree tree;
  tree.nodes = atoms;
  tree.parent.assign(n, std::nullopt);
  if (n == 0) return tree;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

  std::vector<std::set<std::string>> vars(n);
  for (std::size_t i = 0; i < n; ++i) vars[i] = atoms[i].var_set();
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;

  while (remaining > 1) {
    bool removed = false;
    for (std::size_t ear : order) {
      if (!alive[ear]) continue;
      std::set<std::string> shared;
      for (const auto& v : vars[ear])
        for (std::size_t o = 0; o < n; ++o)
          if (o != ear && alive[o] && vars[o].count(v)) {
            shared.insert(v);
            break;
          }
      for (std::size_t witness : order) {
        if (witness == ear || !alive[witness]) continue;
        if (std::includes(vars[witness].begin(), vars[witness].end(), shared.begin(), shared.end())) {
          tree.parent[ear] = witness;
          alive[ear] = false;
          --remaining;
          removed = true;
          break;
        }
      }
      if (removed) break;
    }
    if (!removed) return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) tree.root = i;
  return tree;
}

inline bool is_acyclic(const Query& q) { return gyo_acyclic(q).has_value(); }

/// Acyclic and still acyclic after adding an atom over exactly the free variables.
inline bool is_free_connex(const Query& q) {
  if (!is_acyclic(q)) return false;
  std::vector<Atom> atoms = q.atoms();
  std::string fresh = "FreeHead";
  std::set<std::string> names;
  for (const auto& a : atoms) names.insert(a.relation);
  while (names.count(fresh)) fresh += "_";
  atoms.push_back(Atom{fresh, q.free_vars()});
  return is_acyclic(Query(std::move(atoms), {}));
}

}  // namespace cqsj::structure
