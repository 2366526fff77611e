#include <gtest/gtest.h>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/bench.hpp"
#include "cqsj/engines/bespoke.hpp"
#include "cqsj/engines/cheater.hpp"
#include "cqsj/engines/first_solution.hpp"
#include "cqsj/engines/mirror.hpp"
#include "cqsj/engines/oracle.hpp"
#include "cqsj/engines/select.hpp"
#include "support.hpp"

using namespace cqsj;
using namespace cqsj::engines;

namespace {

Query fx(const std::string& name) { return fixtures::query(name); }

const char* kPathDb = "R(a,b).\nR(b,c).\nR(c,d).\nR(b,e).\n";

}  // namespace

TEST(Oracle, PathAnswers) {
  const auto got = cqsj::testing::as_lines(oracle_enumerate(fx("Q_PATH2F"), parse_database(kPathDb)));
  EXPECT_EQ(got, (std::set<std::string>{"a, b, c", "a, b, e", "b, c, d"}));
}

TEST(Oracle, ProjectionDeduplicates) {
  const Query q = parse_query("Q(x) :- R(x,y).");
  EXPECT_EQ(oracle_enumerate(q, parse_database("R(a,b).\nR(a,c).\n")).size(), 1u);
}

TEST(Oracle, BooleanAndMissingRelation) {
  EXPECT_EQ(oracle_enumerate(parse_query("Q() :- R(x,x)."), parse_database("R(a,a).")).size(), 1u);
  EXPECT_TRUE(oracle_enumerate(parse_query("Q() :- R(x,x)."), parse_database("R(a,b).")).empty());
  EXPECT_TRUE(oracle_enumerate(fx("Q_PATH2P"), parse_database(kPathDb)).empty());
}

TEST(Cursor, TracksPhaseAndTicks) {
  auto ticks = make_ticks();
  const Database db = parse_database(kPathDb);
  OracleCursor c(fx("Q_PATH2F"), db, ticks);
  EXPECT_EQ(drain(c).size(), 3u);
  EXPECT_GT(ticks->count, 0u);
  EXPECT_FALSE(c.next().has_value());
}

TEST(Cursor, DrainHonorsLimit) {
  const Database db = parse_database(kPathDb);
  OracleCursor c(fx("Q_PATH2F"), db, make_ticks());
  EXPECT_EQ(drain(c, 2).size(), 2u);
}

TEST(Acyclic, RefusesCyclicOrProjected) {
  const Database db = parse_database(kPathDb);
  EXPECT_THROW(make_engine("acyclic", fx("Q_TRIANGLE"), db, make_ticks()), InapplicableEngine);
  EXPECT_THROW(make_engine("acyclic", fx("Q_PATH2P"), db, make_ticks()), InapplicableEngine);
}

TEST(Acyclic, EmptyRelationGivesNoAnswers) {
  const Query q = parse_query("Q(x,y,z) :- R(x,y), S(y,z).");
  auto run = make_engine("acyclic", q, parse_database("R(a,b)."), make_ticks());
  EXPECT_TRUE(drain(*run.cursor).empty());
}

TEST(Mirror, FourFactDiamond) {
  auto db = parse_database("R(a,b).\nR(b,c).\nR(a,d).\nR(d,c).\n");
  EXPECT_EQ(cqsj::testing::compare_with_oracle("mirror", fx("Q_DIAMOND"), db), "");
  auto run = make_engine("mirror", fx("Q_DIAMOND"), db, make_ticks());
  EXPECT_EQ(drain(*run.cursor).size(), 4u);
}

TEST(Mirror, RefusesNonMirror) {
  EXPECT_THROW(make_engine("mirror", fx("Q_REV"), parse_database(kPathDb), make_ticks()), InapplicableEngine);
}

TEST(Untangle, RefusesNonUntangleable) {
  EXPECT_THROW(make_engine("untangle", fx("EX48"), parse_database(kPathDb), make_ticks()), InapplicableEngine);
}

TEST(Untangle, SmallEquivalenceSweep) {
  for (const char* name : {"Q_FIG1", "Q_DIAMOND", "FIG3_Q1", "FIG5"})
    for (std::uint64_t s = 0; s < 10; ++s)
      EXPECT_EQ(cqsj::testing::compare_with_oracle("untangle", fx(name), cqsj::testing::equivalence_db(fx(name), s)), "")
          << name << " seed " << s;
}

TEST(Bespoke, StrategyMatchesCanonicalForm) {
  EXPECT_EQ(bespoke_strategy_for(fx("TWO_LOOPS")), Strategy::two_loops);
  EXPECT_EQ(bespoke_strategy_for(fx("SPIKE_Q3")), Strategy::spike_q3);
  EXPECT_FALSE(bespoke_strategy_for(fx("Q_FIG1")).has_value());
  EXPECT_THROW(make_engine("bespoke:SPIKE_Q2", fx("TWO_LOOPS"), parse_database(kPathDb), make_ticks()),
               InapplicableEngine);
}

TEST(Bespoke, SmallEquivalenceSweep) {
  for (const char* name : {"TWO_LOOPS", "TWO_TRIANGLES", "SPIKE_Q2", "SPIKE_Q3"})
    for (std::uint64_t s = 0; s < 10; ++s)
      EXPECT_EQ(cqsj::testing::compare_with_oracle("bespoke", fx(name), cqsj::testing::equivalence_db(fx(name), s)), "")
          << name << " seed " << s;
}

TEST(Bespoke, RawStreamStaysWithinDuplicationBound) {
  const Query q = fx("TWO_LOOPS");
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Database db = cqsj::testing::equivalence_db(q, s);
    EngineOptions opt;
    opt.dedup = false;
    auto run = make_engine("bespoke", q, db, make_ticks(), opt);
    std::map<Answer, std::size_t> count;
    for (const auto& a : drain(*run.cursor)) ++count[a];
    for (const auto& [a, n] : count) EXPECT_LE(n, duplication_bound(Strategy::two_loops));
  }
}

TEST(Cheater, RemovesDuplicatesAndKeepsSet) {
  const auto stream = cqsj::testing::duplicated_stream(50, 3, 7);
  auto ticks = make_ticks();
  CheaterDedup d(std::make_unique<ListCursor>(std::vector<std::string>{"x"}, stream, ticks), 3);
  const auto out = drain(d);
  EXPECT_EQ(out.size(), 50u);
  EXPECT_EQ(std::set<Answer>(out.begin(), out.end()).size(), 50u);
}

TEST(Cheater, ViolationIsReported) {
  const auto stream = cqsj::testing::duplicated_stream(5, 3, 1);
  CheaterDedup d(std::make_unique<ListCursor>(std::vector<std::string>{"x"}, stream, make_ticks()), 2);
  EXPECT_THROW(drain(d), DuplicateBoundViolation);
}

TEST(FirstSolution, FindsOneOrNone) {
  const Database db = parse_database(kPathDb);
  EXPECT_TRUE(first_solution(fx("Q_PATH2F"), db, make_ticks()).has_value());
  EXPECT_TRUE(first_solution(fx("Q_DIAMOND"), db, make_ticks()).has_value());
  EXPECT_FALSE(first_solution(fx("Q_FIG1"), db, make_ticks()).has_value());
  EXPECT_THROW(first_solution(fx("Q_TRIANGLE"), db, make_ticks()), InapplicableEngine);
}

TEST(Select, AutoPicksStrongestEngine) {
  EXPECT_EQ(auto_engine(fx("Q_PATH2F")), "acyclic");
  EXPECT_EQ(auto_engine(fx("Q_DIAMOND")), "mirror");
  EXPECT_EQ(auto_engine(fx("Q_PATH2P")), "oracle");
  EXPECT_EQ(auto_engine(fx("Q_FIG1")), "untangle");
  EXPECT_THROW(make_engine("nonsense", fx("Q_FIG1"), parse_database(kPathDb), make_ticks()), SchemaError);
}

TEST(Bench, DelayClassThresholds) {
  auto row = [](std::size_t facts, std::uint64_t gap) {
    BenchRow r;
    r.facts = facts;
    r.stats.max_gap = gap;
    return r;
  };
  EXPECT_EQ(delay_class({row(1000, 10), row(8000, 19)}), "CONSTANT");
  EXPECT_EQ(delay_class({row(1000, 100), row(8000, 900)}), "LINEAR");
  EXPECT_EQ(delay_class({row(1000, 100), row(8000, 90000)}), "UNBOUNDED");
}

TEST(Bench, AcyclicIsConstant) {
  const auto rows = bench_delay(fx("Q_PATH2F"), "acyclic", {500, 1000, 2000}, "random", 3);
  EXPECT_EQ(delay_class(rows), "CONSTANT");
}
