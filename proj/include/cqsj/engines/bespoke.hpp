#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/cheater.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/fixtures.hpp"
#include "cqsj/structure/classify.hpp"

namespace cqsj::engines {

/// Query-specific algorithms for registered queries that no general
/// criterion covers.
enum class Strategy { two_loops, two_triangles, spike_q2, spike_q3 };

inline std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::two_loops: return "TWO_LOOPS";
    case Strategy::two_triangles: return "TWO_TRIANGLES";
    case Strategy::spike_q2: return "SPIKE_Q2";
    case Strategy::spike_q3: return "SPIKE_Q3";
  }
  return "";
}

inline std::optional<Strategy> strategy_from_name(const std::string& name) {
  for (Strategy s : {Strategy::two_loops, Strategy::two_triangles, Strategy::spike_q2, Strategy::spike_q3})
    if (strategy_name(s) == name) return s;
  return std::nullopt;
}

/// Duplicates per answer in each strategy's raw stream.
inline std::size_t duplication_bound(Strategy s) {
  return s == Strategy::spike_q2 || s == Strategy::spike_q3 ? 3 : 1;
}

inline std::optional<Strategy> bespoke_strategy_for(const Query& q) {
  if (!q.is_full()) return std::nullopt;
  auto match = structure::registry_lookup(q);
  if (!match) return std::nullopt;
  return strategy_from_name(match->entry.fixture);
}

namespace detail {

/// Adjacency of the binary relation R plus the unary predicate P.
struct GraphIndex {
  std::vector<std::vector<ValueId>> out, in;
  std::vector<std::pair<ValueId, ValueId>> edges;
  std::unordered_set<std::uint64_t> edge_set;
  std::vector<bool> red;

  GraphIndex(const Database& db, bool needs_red, TickCounter& ticks) {
    const std::size_t n = db.dictionary()->size();
    out.resize(n);
    in.resize(n);
    red.assign(n, false);
    const Relation* r = db.find("R");
    if (r && r->arity() != 2) throw SchemaError("relation R must be binary");
    for (const auto& [name, rel] : db.relations()) {
      if (name == "R" || (needs_red && name == "P")) continue;
      if (!rel.empty()) throw SchemaError("unexpected relation " + name + " for this strategy");
    }
    if (r) {
      for (std::size_t i = 0; i < r->size(); ++i) {
        ticks.tick();
        auto row = r->row(i);
        out[row[0]].push_back(row[1]);
        in[row[1]].push_back(row[0]);
        edges.emplace_back(row[0], row[1]);
        edge_set.insert(key(row[0], row[1]));
      }
    }
    if (const Relation* p = db.find("P")) {
      if (p->arity() != 1) throw SchemaError("relation P must be unary");
      for (std::size_t i = 0; i < p->size(); ++i) {
        ticks.tick();
        red[p->row(i)[0]] = true;
      }
    }
  }

  static std::uint64_t key(ValueId a, ValueId b) { return (std::uint64_t(a) << 32) | b; }
  bool edge(ValueId a, ValueId b, TickCounter& ticks) const {
    ticks.tick();
    return edge_set.count(key(a, b)) > 0;
  }
};

/// Raw (possibly repeating) bespoke stream, emitted in the fixture's
/// variable order and permuted to the input query's order.
class BespokeRaw : public Cursor {
 public:
  BespokeRaw(const Query& q, const std::string& fixture, const Database& db, bool needs_red, Ticks ticks)
      : Cursor(q.free_vars(), std::move(ticks)), graph_(db, needs_red, *counter()) {
    const auto match = structure::registry_lookup(q);
    if (!match || match->entry.fixture != fixture)
      throw InapplicableEngine("query is not the registered " + fixture + " query");
    const auto fixture_vars = fixtures::query(fixture).free_vars();
    for (const auto& v : q.free_vars()) {
      const auto& target = match->to_fixture.at(v);
      perm_.push_back(static_cast<std::size_t>(std::find(fixture_vars.begin(), fixture_vars.end(), target) -
                                               fixture_vars.begin()));
    }
  }

 protected:
  Answer out(std::initializer_list<ValueId> fixture_answer) {
    tick();
    const ValueId* base = fixture_answer.begin();
    Answer a(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) a[i] = base[perm_[i]];
    return a;
  }

  GraphIndex graph_;

 private:
  std::vector<std::size_t> perm_;
};

// Self-loops a; edges (u,v) with (a,u),(v,a) edges give (a,u) for the left
// triangle at v and (a,v) for the right triangle at u. Each pair meets once,
// when its later half is inserted.
class TwoLoopsRaw : public BespokeRaw {
 public:
  TwoLoopsRaw(const Query& q, const Database& db, Ticks ticks) : BespokeRaw(q, "TWO_LOOPS", db, false, std::move(ticks)) {
    for (const auto& [a, b] : graph_.edges) {
      tick();
      if (a == b) loops_.push_back(a);
    }
  }

 protected:
  Generator<Answer> run() override {
    using Pair = std::pair<ValueId, ValueId>;
    std::unordered_map<ValueId, std::vector<Pair>> left, right;
    for (ValueId a : loops_) {
      for (const auto& [u, v] : graph_.edges) {
        tick();
        if (!graph_.edge(a, u, *counter()) || !graph_.edge(v, a, *counter())) continue;
        // left triangle a -> u -> v -> a, keyed by c = v
        if (auto it = right.find(v); it != right.end())
          for (const auto& [a2, b2] : it->second) co_yield out({a, u, v, a2, b2});
        left[v].emplace_back(a, u);
        // right triangle a -> u -> v -> a read as a2 -> c -> b2 -> a2, keyed by c = u
        if (auto it = left.find(u); it != left.end())
          for (std::size_t i = 0; i < it->second.size(); ++i) {
            const auto [a1, b1] = it->second[i];
            co_yield out({a1, b1, u, a, v});
          }
        right[u].emplace_back(a, v);
      }
    }
  }

 private:
  std::vector<ValueId> loops_;
};

// Self-loops a; for each edge e=(b,c): first pattern (c,a),(a,b); second
// pattern (a,b),(a,c). Tables per edge hold the loops seen so far.
class TwoTrianglesRaw : public BespokeRaw {
 public:
  TwoTrianglesRaw(const Query& q, const Database& db, Ticks ticks)
      : BespokeRaw(q, "TWO_TRIANGLES", db, false, std::move(ticks)) {
    for (const auto& [a, b] : graph_.edges) {
      tick();
      if (a == b) loops_.push_back(a);
    }
  }

 protected:
  Generator<Answer> run() override {
    std::vector<std::vector<ValueId>> first(graph_.edges.size()), second(graph_.edges.size());
    for (ValueId a : loops_) {
      for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
        tick();
        const auto [b, c] = graph_.edges[e];
        if (graph_.edge(c, a, *counter()) && graph_.edge(a, b, *counter())) {
          for (ValueId a2 : second[e]) co_yield out({a, b, c, a2});
          first[e].push_back(a);
        }
        if (graph_.edge(a, b, *counter()) && graph_.edge(a, c, *counter())) {
          for (std::size_t i = 0; i < first[e].size(); ++i) co_yield out({first[e][i], b, c, a});
          second[e].push_back(a);
        }
      }
    }
  }

 private:
  std::vector<ValueId> loops_;
};

// Top image x3<-x2<-x1->x8->x7<-x6 fills a table keyed (x3,x2,x1,x6) with
// (x8,x7); the left image x1->x2->x3<-x4<-x5->x6 then closes the loop from
// that table and adds the spikes out(x5) and in(x7). Each image answer also
// yields the answer it induces, so every answer appears at most 3 times.
class SpikeQ2Raw : public BespokeRaw {
 public:
  SpikeQ2Raw(const Query& q, const Database& db, Ticks ticks) : BespokeRaw(q, "SPIKE_Q2", db, true, std::move(ticks)) {
    top_ = std::make_unique<FullAcyclicCursor>(
        parse_query("Q(x3,x2,x1,x8,x7,x6) :- R(x1,x2), R(x2,x3), R(x1,x8), R(x8,x7), R(x6,x7), P(x2)."), db, counter());
    left_ = std::make_unique<FullAcyclicCursor>(
        parse_query("Q(x1,x2,x3,x4,x5,x6) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), P(x2)."), db, counter());
  }

 protected:
  Generator<Answer> run() override {
    KeyMap<std::vector<std::pair<ValueId, ValueId>>> table;
    // fixture order: x1..x8, s6, s4
    while (auto t = top_->next()) {
      const auto& a = *t;  // x3 x2 x1 x8 x7 x6
      tick();
      table[{a[0], a[1], a[2], a[5]}].emplace_back(a[3], a[4]);
      co_yield out({a[2], a[1], a[0], a[1], a[2], a[3], a[4], a[3], a[3], a[5]});
    }
    while (auto l = left_->next()) {
      const auto& a = *l;  // x1 x2 x3 x4 x5 x6
      co_yield out({a[0], a[1], a[2], a[3], a[4], a[3], a[2], a[1], a[5], a[3]});
      tick();
      auto it = table.find({a[2], a[1], a[0], a[5]});
      if (it == table.end()) continue;
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        const auto [x8, x7] = it->second[i];
        for (ValueId s6 : graph_.out[a[4]])
          for (ValueId s4 : graph_.in[x7]) co_yield out({a[0], a[1], a[2], a[3], a[4], a[5], x7, x8, s6, s4});
      }
    }
  }

 private:
  CursorPtr top_, left_;
};

// Small image x8<-x1->x2->x3<-x4 (x4 with an in-neighbour, x8 with an
// out-neighbour). For each small answer with a = x4, b = x8: emit the
// left-derived answers (one per solution of p: y->a, z->a, y->s6, y->s7),
// then the top-derived ones (one per pair c,d in out(b)). Meanwhile, a few
// units of work per emission build T_p (a' -> predecessors y) and test
// every a' against every b' in out(b); each edge a'->b' closes the loop.
class SpikeQ3Raw : public BespokeRaw {
 public:
  static constexpr std::size_t kWorkPerEmission = 2;

  SpikeQ3Raw(const Query& q, const Database& db, Ticks ticks) : BespokeRaw(q, "SPIKE_Q3", db, true, std::move(ticks)) {
    std::map<std::string, Relation> rels;
    for (const auto& [name, rel] : db.relations()) rels.emplace(name, rel);
    std::vector<ValueId> with_in, with_out;
    for (const auto& [u, w] : graph_.edges) {
      tick();
      if (!graph_.in[u].empty()) with_in.insert(with_in.end(), {u, w});
      if (!graph_.out[w].empty()) with_out.insert(with_out.end(), {u, w});
    }
    rels["RA"] = Relation(2, std::move(with_in));
    rels["RB"] = Relation(2, std::move(with_out));
    const Database filtered(db.dictionary(), std::move(rels));
    small_ = std::make_unique<FullAcyclicCursor>(
        parse_query("Q(x1,x2,x3,x4,x8) :- RB(x1,x8), R(x1,x2), R(x2,x3), RA(x4,x3), P(x2)."), filtered, counter());
  }

 protected:
  Generator<Answer> run() override {
    const auto& out_ = graph_.out;
    const auto& in_ = graph_.in;
    // fixture order: x1 x2 x3 x4 x5 x6 x7 x8 s1 s2 s3 s5 s6 s7
    while (auto s = small_->next()) {
      const ValueId x1 = (*s)[0], x2 = (*s)[1], x3 = (*s)[2], a = (*s)[3], b = (*s)[4];
      start_work(a, b);
      for (ValueId y : in_[a])
        for (ValueId z : in_[a])
          for (ValueId s6 : out_[y])
            for (ValueId s7 : out_[y]) {
              co_yield out({x1, x2, x3, a, y, a, x3, x2, b, x2, x3, z, s6, s7});
              work(kWorkPerEmission);
            }
      for (ValueId c : out_[b])
        for (ValueId d : out_[b]) {
          co_yield out({x1, x2, x3, x2, x1, b, c, b, b, a, d, x1, b, b});
          work(kWorkPerEmission);
        }
      leftover_ += work(static_cast<std::size_t>(-1));
      for (std::size_t h = 0; h < hits_.size(); ++h) {
        const auto [a2, b2] = hits_[h];
        const auto& ys = tp_.at(a2);
        for (ValueId y : ys)
          for (ValueId s1 : out_[x1])
            for (ValueId s2 : in_[x3])
              for (ValueId s3 : out_[b])
                for (ValueId s5 : in_[a])
                  for (ValueId s6 : out_[y])
                    for (ValueId s7 : out_[y]) co_yield out({x1, x2, x3, a, y, a2, b2, b, s1, s2, s3, s5, s6, s7});
      }
    }
  }

 public:
  /// Work units still pending when both derived phases had ended.
  std::size_t leftover() const { return leftover_; }

 private:
  void start_work(ValueId a, ValueId b) {
    tp_.clear();
    a_primes_.clear();
    hits_.clear();
    a_ = a;
    b_ = b;
    stage_ = 0;
    i_ = j_ = 0;
  }

  // Performs up to `budget` units; returns how many were done.
  std::size_t work(std::size_t budget) {
    std::size_t done = 0;
    const auto& ys = graph_.in[a_];
    while (done < budget && stage_ < 2) {
      if (stage_ == 0) {
        if (i_ >= ys.size()) {
          stage_ = 1;
          i_ = j_ = 0;
          continue;
        }
        const auto& outs = graph_.out[ys[i_]];
        if (j_ >= outs.size()) {
          ++i_;
          j_ = 0;
          continue;
        }
        auto& list = tp_[outs[j_]];
        if (list.empty()) a_primes_.push_back(outs[j_]);
        list.push_back(ys[i_]);
        ++j_;
      } else {
        const auto& bs = graph_.out[b_];
        if (i_ >= a_primes_.size()) {
          stage_ = 2;
          continue;
        }
        if (j_ >= bs.size()) {
          ++i_;
          j_ = 0;
          continue;
        }
        if (graph_.edge(a_primes_[i_], bs[j_], *counter())) hits_.emplace_back(a_primes_[i_], bs[j_]);
        ++j_;
      }
      tick();
      ++done;
    }
    return done;
  }

  CursorPtr small_;
  std::unordered_map<ValueId, std::vector<ValueId>> tp_;
  std::vector<ValueId> a_primes_;
  std::vector<std::pair<ValueId, ValueId>> hits_;
  ValueId a_ = 0, b_ = 0;
  int stage_ = 2;
  std::size_t i_ = 0, j_ = 0;
  std::size_t leftover_ = 0;
};

}  // namespace detail

/// Raw stream of a strategy, without duplicate removal.
inline CursorPtr make_bespoke_raw(Strategy s, const Query& q, const Database& db, Ticks ticks) {
  switch (s) {
    case Strategy::two_loops: return std::make_unique<detail::TwoLoopsRaw>(q, db, std::move(ticks));
    case Strategy::two_triangles: return std::make_unique<detail::TwoTrianglesRaw>(q, db, std::move(ticks));
    case Strategy::spike_q2: return std::make_unique<detail::SpikeQ2Raw>(q, db, std::move(ticks));
    case Strategy::spike_q3: return std::make_unique<detail::SpikeQ3Raw>(q, db, std::move(ticks));
  }
  throw InapplicableEngine("unknown strategy");
}

/// Strategy stream passed through the duplicate remover.
inline CursorPtr make_bespoke(Strategy s, const Query& q, const Database& db, Ticks ticks) {
  return std::make_unique<CheaterDedup>(make_bespoke_raw(s, q, db, std::move(ticks)), duplication_bound(s));
}

}  // namespace cqsj::engines
