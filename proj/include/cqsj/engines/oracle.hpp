#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqsj/database.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/error.hpp"
#include "cqsj/query.hpp"

namespace cqsj::engines {

/// Ground truth: backtracking over all valuations, projecting and
/// deduplicating. Each atom step looks up the facts agreeing with the
/// positions bound by earlier steps in an ordered map of its own; nothing
/// is shared with the engines and no structural preprocessing happens.
class OracleCursor : public Cursor {
 public:
  OracleCursor(const Query& q, const Database& db, Ticks ticks) : Cursor(q.free_vars(), std::move(ticks)) {
    const auto vars = q.vars();
    for (std::size_t i = 0; i < vars.size(); ++i) index_[vars[i]] = static_cast<int>(i);
    var_count_ = vars.size();
    for (const auto& v : q.free_vars()) free_slots_.push_back(index_.at(v));
    // Visit atoms sharing variables with earlier ones first.
    std::vector<bool> used(q.atoms().size(), false), bound(vars.size(), false);
    for (std::size_t step = 0; step < q.atoms().size(); ++step) {
      std::size_t best = 0;
      int best_score = -1;
      for (std::size_t i = 0; i < q.atoms().size(); ++i) {
        if (used[i]) continue;
        int score = 0;
        for (const auto& v : q.atoms()[i].args) score += bound[index_.at(v)] ? 1 : 0;
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      used[best] = true;
      const Atom& a = q.atoms()[best];
      Step s;
      s.relation = db.find(a.relation);
      if (s.relation && s.relation->arity() != a.arity())
        throw SchemaError("relation " + a.relation + " has a different arity in the database");
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const int slot = index_.at(a.args[i]);
        s.slots.push_back(slot);
        if (bound[slot]) s.key_positions.push_back(i);
      }
      for (int slot : s.slots) bound[slot] = true;
      if (s.relation)
        for (std::size_t r = 0; r < s.relation->size(); ++r) {
          auto row = s.relation->row(r);
          std::vector<ValueId> key;
          for (std::size_t i : s.key_positions) key.push_back(row[i]);
          s.rows[key].push_back(r);
        }
      steps_.push_back(std::move(s));
    }
  }

 protected:
  Generator<Answer> run() override {
    const std::size_t n = steps_.size();
    std::vector<ValueId> value(var_count_, 0);
    std::vector<bool> set(var_count_, false);
    std::set<Answer> seen;
    auto emit = [&]() {
      Answer a;
      for (int s : free_slots_) a.push_back(value[s]);
      return a;
    };
    if (n == 0) {
      co_yield Answer{};
      co_return;
    }
    for (const auto& s : steps_)
      if (!s.relation || s.relation->empty()) co_return;
    static const std::vector<std::size_t> kNone;
    std::vector<const std::vector<std::size_t>*> candidates(n, &kNone);
    std::vector<std::size_t> pos(n, 0);
    std::vector<std::vector<int>> bound_here(n);
    auto enter = [&](std::size_t level) {
      const Step& s = steps_[level];
      std::vector<ValueId> key;
      for (std::size_t i : s.key_positions) key.push_back(value[s.slots[i]]);
      auto it = s.rows.find(key);
      candidates[level] = it == s.rows.end() ? &kNone : &it->second;
      pos[level] = 0;
    };
    enter(0);
    std::size_t level = 0;
    while (true) {
      const Step& s = steps_[level];
      for (int slot : bound_here[level]) set[slot] = false;
      bound_here[level].clear();
      if (pos[level] >= candidates[level]->size()) {
        if (level == 0) co_return;
        --level;
        ++pos[level];
        continue;
      }
      tick();
      auto tuple = s.relation->row((*candidates[level])[pos[level]]);
      bool ok = true;
      for (std::size_t i = 0; i < s.slots.size() && ok; ++i) {
        const int slot = s.slots[i];
        if (set[slot]) {
          ok = value[slot] == tuple[i];
        } else {
          set[slot] = true;
          value[slot] = tuple[i];
          bound_here[level].push_back(slot);
        }
      }
      if (!ok) {
        ++pos[level];
        continue;
      }
      if (level + 1 == n) {
        Answer a = emit();
        ++pos[level];
        tick();
        if (seen.insert(a).second) co_yield a;
      } else {
        ++level;
        enter(level);
      }
    }
  }

 private:
  struct Step {
    const Relation* relation = nullptr;
    std::vector<int> slots;
    // Argument positions whose variable an earlier step binds.
    std::vector<std::size_t> key_positions;
    std::map<std::vector<ValueId>, std::vector<std::size_t>> rows;
  };
  std::map<std::string, int> index_;
  std::size_t var_count_ = 0;
  std::vector<int> free_slots_;
  std::vector<Step> steps_;
};

/// q(D) as a set of value tuples.
inline std::set<AnswerTuple> oracle_enumerate(const Query& q, const Database& db) {
  OracleCursor c(q, db, make_ticks());
  return answer_set(db, drain(c));
}

}  // namespace cqsj::engines
