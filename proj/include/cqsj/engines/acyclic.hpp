#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cqsj/database.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/error.hpp"
#include "cqsj/query.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::engines {

struct KeyHash {
  std::size_t operator()(const std::vector<ValueId>& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (ValueId v : key) h = (h ^ v) * 0x100000001b3ULL;
    return h;
  }
};

template <class V>
using KeyMap = std::unordered_map<std::vector<ValueId>, V, KeyHash>;
using KeySet = std::unordered_set<std::vector<ValueId>, KeyHash>;

/// Tuples of one relation that match an atom's repeated-variable pattern,
/// projected onto the atom's distinct variables.
struct AtomTable {
  std::vector<std::string> vars;
  std::size_t count = 0;
  std::vector<ValueId> data;

  std::size_t width() const { return vars.size(); }
  const ValueId* row(std::size_t i) const { return data.data() + i * vars.size(); }

  std::vector<std::size_t> positions_of(const std::vector<std::string>& wanted) const {
    std::vector<std::size_t> out;
    for (const auto& w : wanted) out.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), w) - vars.begin()));
    return out;
  }

  std::vector<ValueId> key(std::size_t i, const std::vector<std::size_t>& positions) const {
    std::vector<ValueId> k;
    k.reserve(positions.size());
    for (std::size_t p : positions) k.push_back(row(i)[p]);
    return k;
  }

  void keep(const std::vector<bool>& mask) {
    std::vector<ValueId> out;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (!mask[i]) continue;
      out.insert(out.end(), row(i), row(i) + width());
      ++kept;
    }
    data = std::move(out);
    count = kept;
  }
};

inline AtomTable build_table(const Atom& atom, const Database& db, TickCounter& ticks) {
  AtomTable t;
  std::vector<std::size_t> first;  // position of each distinct variable's first occurrence
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (std::find(t.vars.begin(), t.vars.end(), atom.args[i]) == t.vars.end()) {
      t.vars.push_back(atom.args[i]);
      first.push_back(i);
    }
  }
  const Relation* rel = db.find(atom.relation);
  if (!rel) return t;
  if (rel->arity() != atom.arity())
    throw SchemaError("relation " + atom.relation + " has arity " + std::to_string(rel->arity()) + " in the database but " +
                      std::to_string(atom.arity()) + " in the query");
  std::vector<std::size_t> var_of(atom.args.size());
  for (std::size_t i = 0; i < atom.args.size(); ++i)
    var_of[i] = static_cast<std::size_t>(std::find(t.vars.begin(), t.vars.end(), atom.args[i]) - t.vars.begin());
  for (std::size_t r = 0; r < rel->size(); ++r) {
    ticks.tick();
    auto row = rel->row(r);
    bool ok = true;
    for (std::size_t i = 0; i < atom.args.size() && ok; ++i) ok = row[i] == row[first[var_of[i]]];
    if (!ok) continue;
    for (std::size_t p : first) t.data.push_back(row[p]);
    ++t.count;
  }
  return t;
}

inline std::vector<std::string> shared_vars(const AtomTable& a, const AtomTable& b) {
  std::vector<std::string> out;
  for (const auto& v : a.vars)
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end()) out.push_back(v);
  return out;
}

// Removes rows of `target` with no partner in `source` on their shared variables.
inline void semijoin(AtomTable& target, const AtomTable& source, TickCounter& ticks) {
  const auto shared = shared_vars(target, source);
  const auto sp = source.positions_of(shared), tp = target.positions_of(shared);
  KeySet keys;
  for (std::size_t i = 0; i < source.count; ++i) {
    ticks.tick();
    keys.insert(source.key(i, sp));
  }
  std::vector<bool> mask(target.count);
  for (std::size_t i = 0; i < target.count; ++i) {
    ticks.tick();
    mask[i] = keys.count(target.key(i, tp)) > 0;
  }
  target.keep(mask);
}

/// Atom tables along a join tree after a full semijoin reduction (leaves to
/// root, then root to leaves). Every remaining row takes part in an answer.
struct ReducedJoin {
  structure::JoinTree tree;
  std::vector<AtomTable> tables;
  std::vector<std::size_t> order;  // preorder

  bool empty() const {
    for (const auto& t : tables)
      if (t.count == 0) return true;
    return false;
  }
};

inline ReducedJoin reduce(const Query& q, const Database& db, TickCounter& ticks) {
  auto tree = structure::gyo_acyclic(q);
  if (!tree) throw InapplicableEngine("query is not acyclic");
  ReducedJoin r;
  r.tree = std::move(*tree);
  for (const auto& a : r.tree.nodes) r.tables.push_back(build_table(a, db, ticks));
  if (r.tables.empty()) return r;
  r.order = r.tree.preorder();
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it)
    if (auto p = r.tree.parent[*it]) semijoin(r.tables[*p], r.tables[*it], ticks);
  for (std::size_t n : r.order)
    if (auto p = r.tree.parent[n]) semijoin(r.tables[n], r.tables[*p], ticks);
  return r;
}

/// Constant-delay enumeration of a full acyclic query: full reduction plus
/// one hash index per join-tree edge, then depth-first assignment.
class FullAcyclicCursor : public Cursor {
 public:
  FullAcyclicCursor(const Query& q, const Database& db, Ticks ticks) : Cursor(q.free_vars(), std::move(ticks)) {
    if (!q.is_full()) throw InapplicableEngine("acyclic engine requires a full query");
    reduced_ = reduce(q, db, *counter());
    const auto vars = q.free_vars();
    for (std::size_t i = 0; i < vars.size(); ++i) var_index_[vars[i]] = i;
    const std::size_t n = reduced_.tables.size();
    key_positions_.resize(n);
    key_vars_.resize(n);
    var_slots_.resize(n);
    index_.resize(n);
    for (std::size_t node = 0; node < n; ++node) {
      const auto& table = reduced_.tables[node];
      for (const auto& v : table.vars) var_slots_[node].push_back(var_index_.at(v));
      const auto p = reduced_.tree.parent[node];
      if (!p) continue;
      const auto shared = shared_vars(table, reduced_.tables[*p]);
      key_positions_[node] = table.positions_of(shared);
      for (const auto& v : shared) key_vars_[node].push_back(var_index_.at(v));
      for (std::size_t i = 0; i < table.count; ++i) {
        tick();
        index_[node][table.key(i, key_positions_[node])].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

 protected:
  Generator<Answer> run() override {
    const auto& order = reduced_.order;
    const std::size_t n = order.size();
    Answer assignment(free_vars().size());
    if (n == 0) {
      co_yield assignment;
      co_return;
    }
    if (reduced_.empty()) co_return;
    std::vector<std::uint32_t> root_rows(reduced_.tables[order[0]].count);
    for (std::size_t i = 0; i < root_rows.size(); ++i) root_rows[i] = static_cast<std::uint32_t>(i);
    std::vector<const std::vector<std::uint32_t>*> lists(n, nullptr);
    std::vector<std::size_t> idx(n, 0);
    lists[0] = &root_rows;
    static const std::vector<std::uint32_t> none;
    std::vector<ValueId> key;
    std::size_t level = 0;
    while (true) {
      tick();
      const std::size_t node = order[level];
      if (idx[level] < lists[level]->size()) {
        const ValueId* row = reduced_.tables[node].row((*lists[level])[idx[level]]);
        for (std::size_t k = 0; k < var_slots_[node].size(); ++k) assignment[var_slots_[node][k]] = row[k];
        if (level + 1 == n) {
          co_yield assignment;
          ++idx[level];
        } else {
          ++level;
          const std::size_t child = order[level];
          key.clear();
          for (std::size_t slot : key_vars_[child]) key.push_back(assignment[slot]);
          auto it = index_[child].find(key);
          lists[level] = it == index_[child].end() ? &none : &it->second;
          idx[level] = 0;
        }
      } else {
        if (level == 0) break;
        --level;
        ++idx[level];
      }
    }
  }

 private:
  ReducedJoin reduced_;
  std::map<std::string, std::size_t> var_index_;
  std::vector<std::vector<std::size_t>> key_positions_;
  std::vector<std::vector<std::size_t>> key_vars_;
  std::vector<std::vector<std::size_t>> var_slots_;
  std::vector<KeyMap<std::vector<std::uint32_t>>> index_;
};

/// Boolean evaluation of an acyclic query by full semijoin reduction.
inline bool eval_boolean(const Query& q, const Database& db, TickCounter& ticks) {
  const auto r = reduce(q, db, ticks);
  return !r.empty();
}

/// Unary evaluation of an acyclic query: the reduced projection of an atom
/// holding the free variable.
inline std::set<ValueId> eval_unary(const Query& q, const Database& db, TickCounter& ticks) {
  if (q.arity() != 1) throw InapplicableEngine("unary evaluation requires exactly one free variable");
  const auto r = reduce(q, db, ticks);
  std::set<ValueId> out;
  if (r.empty()) return out;
  const std::string& x = q.free_vars()[0];
  for (const auto& t : r.tables) {
    auto it = std::find(t.vars.begin(), t.vars.end(), x);
    if (it == t.vars.end()) continue;
    const std::size_t pos = static_cast<std::size_t>(it - t.vars.begin());
    for (std::size_t i = 0; i < t.count; ++i) {
      ticks.tick();
      out.insert(t.row(i)[pos]);
    }
    break;
  }
  return out;
}

}  // namespace cqsj::engines
