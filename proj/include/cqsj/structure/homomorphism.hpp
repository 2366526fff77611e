#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqsj/error.hpp"
#include "cqsj/query.hpp"
#include "cqsj/value.hpp"

namespace cqsj::structure {

inline void check_limits(const Query& q, const Limits& limits) {
  if (q.var_set().size() > limits.max_vars)
    throw LimitExceeded("query has " + std::to_string(q.var_set().size()) + " variables; limit is " +
                        std::to_string(limits.max_vars));
  if (q.atoms().size() > limits.max_atoms)
    throw LimitExceeded("query has " + std::to_string(q.atoms().size()) + " atoms; limit is " +
                        std::to_string(limits.max_atoms));
}

namespace detail {

// Backtracking search for variable maps sending every `from` atom onto some
// `to` atom. Atoms are visited most-constrained first.
class HomomorphismSearch {
 public:
  HomomorphismSearch(const std::vector<Atom>& from, const std::vector<Atom>& to, const VarMap& fixed) {
    std::map<std::string, int> src_index, dst_index;
    auto src_id = [&](const std::string& v) {
      auto [it, fresh] = src_index.emplace(v, static_cast<int>(src_names_.size()));
      if (fresh) src_names_.push_back(v);
      return it->second;
    };
    auto dst_id = [&](const std::string& v) {
      auto [it, fresh] = dst_index.emplace(v, static_cast<int>(dst_names_.size()));
      if (fresh) dst_names_.push_back(v);
      return it->second;
    };
    std::map<std::string, int> relation_index;
    for (const auto& a : to) {
      auto [it, fresh] = relation_index.emplace(a.relation, static_cast<int>(targets_.size()));
      if (fresh) targets_.emplace_back();
      std::vector<int> args;
      for (const auto& v : a.args) args.push_back(dst_id(v));
      targets_[it->second].push_back(std::move(args));
    }
    for (const auto& a : from) {
      Item item;
      auto it = relation_index.find(a.relation);
      item.relation = it == relation_index.end() ? -1 : it->second;
      for (const auto& v : a.args) item.args.push_back(src_id(v));
      items_.push_back(std::move(item));
    }
    assignment_.assign(src_names_.size(), -1);
    for (const auto& [s, d] : fixed) {
      auto si = src_index.find(s);
      if (si == src_index.end()) continue;
      assignment_[si->second] = dst_id(d);
    }
    order_items();
  }

  /// Calls `visit` per homomorphism until it returns false. Returns false
  /// when stopped early.
  bool run(const std::function<bool(const VarMap&)>& visit) {
    for (const auto& item : items_)
      if (item.relation < 0) return true;
    return descend(0, visit);
  }

 private:
  struct Item {
    int relation = -1;
    std::vector<int> args;
  };

  void order_items() {
    std::vector<bool> bound(src_names_.size(), false);
    for (std::size_t v = 0; v < assignment_.size(); ++v) bound[v] = assignment_[v] >= 0;
    std::vector<Item> ordered;
    std::vector<bool> used(items_.size(), false);
    for (std::size_t step = 0; step < items_.size(); ++step) {
      std::size_t best = items_.size();
      long best_score = std::numeric_limits<long>::min();
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (used[i]) continue;
        long bound_count = 0;
        for (int v : items_[i].args) bound_count += bound[v] ? 1 : 0;
        const long candidates = items_[i].relation < 0 ? 0 : static_cast<long>(targets_[items_[i].relation].size());
        const long score = bound_count * 1000 - std::min(candidates, 999L);
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      used[best] = true;
      for (int v : items_[best].args) bound[v] = true;
      ordered.push_back(items_[best]);
    }
    items_ = std::move(ordered);
  }

  bool descend(std::size_t depth, const std::function<bool(const VarMap&)>& visit) {
    if (depth == items_.size()) {
      VarMap map;
      for (std::size_t v = 0; v < src_names_.size(); ++v) map[src_names_[v]] = dst_names_[assignment_[v]];
      return visit(map);
    }
    const Item& item = items_[depth];
    std::vector<int> touched;
    for (const auto& target : targets_[item.relation]) {
      touched.clear();
      bool ok = true;
      for (std::size_t j = 0; j < item.args.size() && ok; ++j) {
        int& slot = assignment_[item.args[j]];
        if (slot < 0) {
          slot = target[j];
          touched.push_back(item.args[j]);
        } else if (slot != target[j]) {
          ok = false;
        }
      }
      if (ok && !descend(depth + 1, visit)) {
        for (int v : touched) assignment_[v] = -1;
        return false;
      }
      for (int v : touched) assignment_[v] = -1;
    }
    return true;
  }

  std::vector<std::string> src_names_, dst_names_;
  std::vector<std::vector<std::vector<int>>> targets_;
  std::vector<Item> items_;
  std::vector<int> assignment_;
};

}  // namespace detail

/// Visits every map h with h(A) in `to` for each A in `from`, extending `fixed`.
inline void for_each_homomorphism(const std::vector<Atom>& from, const std::vector<Atom>& to, const VarMap& fixed,
                                  const std::function<bool(const VarMap&)>& visit) {
  detail::HomomorphismSearch(from, to, fixed).run(visit);
}

inline std::optional<VarMap> find_homomorphism(const std::vector<Atom>& from, const std::vector<Atom>& to,
                                               const VarMap& fixed = {}) {
  std::optional<VarMap> found;
  for_each_homomorphism(from, to, fixed, [&](const VarMap& h) {
    found = h;
    return false;
  });
  return found;
}

inline VarMap identity_on(const std::vector<std::string>& vars) {
  VarMap out;
  for (const auto& v : vars) out[v] = v;
  return out;
}

inline bool is_endomorphism(const Query& q, const VarMap& h) {
  const auto atoms = q.atom_set();
  for (const auto& v : q.var_set())
    if (!h.count(v)) return false;
  for (const auto& a : q.atoms())
    if (!atoms.count(apply(h, a))) return false;
  return true;
}

inline bool is_injective(const VarMap& h) {
  std::set<std::string> range;
  for (const auto& [_, v] : h) range.insert(v);
  return range.size() == h.size();
}

/// Every endomorphism of q (identity on the free variables when `fix_free`).
inline std::vector<VarMap> endomorphisms(const Query& q, bool fix_free, const Limits& limits = Limits::from_env()) {
  check_limits(q, limits);
  std::vector<VarMap> out;
  const VarMap fixed = fix_free ? identity_on(q.free_vars()) : VarMap{};
  for_each_homomorphism(q.atoms(), q.atoms(), fixed, [&](const VarMap& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

/// Atoms of q hit by h, in q's atom order.
inline std::vector<Atom> image_atoms(const Query& q, const VarMap& h) {
  std::set<Atom> hit;
  for (const auto& a : q.atoms()) hit.insert(apply(h, a));
  std::vector<Atom> out;
  for (const auto& a : q.atoms())
    if (hit.count(a)) out.push_back(a);
  return out;
}

namespace detail {

// An endomorphism fixing the free variables whose range misses some
// variable, if one exists.
inline std::optional<VarMap> find_proper_retraction(const Query& q) {
  const VarMap fixed = identity_on(q.free_vars());
  for (const auto& v : q.vars()) {
    if (q.is_free(v)) continue;
    std::vector<Atom> target;
    for (const auto& a : q.atoms())
      if (std::find(a.args.begin(), a.args.end(), v) == a.args.end()) target.push_back(a);
    if (auto h = find_homomorphism(q.atoms(), target, fixed)) return h;
  }
  return std::nullopt;
}

}  // namespace detail

/// Every endomorphism fixing the free variables is injective.
inline bool is_minimal(const Query& q, const Limits& limits = Limits::from_env()) {
  check_limits(q, limits);
  return !detail::find_proper_retraction(q).has_value();
}

/// Retracts q onto a minimal equivalent subquery.
inline Query minimal_form(const Query& q, const Limits& limits = Limits::from_env()) {
  check_limits(q, limits);
  Query cur = q;
  while (auto h = detail::find_proper_retraction(cur)) cur = cur.with_atoms(image_atoms(cur, *h));
  return cur;
}

/// Minimal form of the Boolean closure.
inline Query core(const Query& q, const Limits& limits = Limits::from_env()) {
  return minimal_form(q.boolean_closure(), limits);
}

/// The core as a full query (a subquery of q, every variable free).
inline Query full_core(const Query& q, const Limits& limits = Limits::from_env()) {
  if (!q.is_full()) throw SchemaError("full_core requires a full query");
  return q.with_atoms(core(q, limits).atoms());
}

/// Retraction of q onto its subquery `sub` that fixes sub's variables, or
/// any homomorphism into `sub` when no such retraction exists.
inline std::optional<VarMap> homomorphism_onto(const Query& q, const Query& sub) {
  if (auto h = find_homomorphism(q.atoms(), sub.atoms(), identity_on(sub.vars()))) return h;
  return find_homomorphism(q.atoms(), sub.atoms());
}

}  // namespace cqsj::structure
