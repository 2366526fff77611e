#include <gtest/gtest.h>

#include "cqsj/database.hpp"
#include "cqsj/fixtures.hpp"
#include "cqsj/query.hpp"

using namespace cqsj;

TEST(QueryParse, HeadAndBody) {
  const Query q = parse_query("Q(x,z) :- R(x,y), S(y,z).");
  EXPECT_EQ(q.head(), "Q");
  EXPECT_EQ(q.free_vars(), (std::vector<std::string>{"x", "z"}));
  ASSERT_EQ(q.atoms().size(), 2u);
  EXPECT_EQ(q.atoms()[1].relation, "S");
  EXPECT_FALSE(q.is_full());
  EXPECT_FALSE(q.has_self_joins());
  EXPECT_EQ(q.vars(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(QueryParse, BooleanAndFull) {
  EXPECT_TRUE(parse_query("Q() :- R(x,y).").is_boolean());
  const Query full = parse_query("Q(x,y,z) :- R(x,y), R(y,z).");
  EXPECT_TRUE(full.is_full());
  EXPECT_TRUE(full.has_self_joins());
}

TEST(QueryParse, DuplicateAtomsCollapse) {
  EXPECT_EQ(parse_query("Q(x,y) :- R(x,y), R(x,y).").atoms().size(), 1u);
}

TEST(QueryParse, WhitespaceAndNewlines) {
  const Query q = parse_query("  Q( x , y )\n  :-\n R( x , y ) .\n");
  EXPECT_EQ(serialize_query(q), "Q(x,y) :- R(x,y).");
}

TEST(QueryParse, RejectsMalformed) {
  EXPECT_THROW(parse_query("Q(x) :- R(x,y)"), ParseError);
  EXPECT_THROW(parse_query("q(x) :- R(x)."), ParseError);
  EXPECT_THROW(parse_query("Q(X) :- R(X)."), ParseError);
  EXPECT_THROW(parse_query("Q(x) :- R(y)."), ParseError);
  EXPECT_THROW(parse_query("Q(x,x) :- R(x)."), ParseError);
  EXPECT_THROW(parse_query("Q(x) :- R(x). extra"), ParseError);
}

TEST(QueryParse, ReportsPosition) {
  try {
    parse_query("Q(x) :-\n  R(x,$).");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(QueryParse, ArityMismatch) { EXPECT_THROW(parse_query("Q(x) :- R(x,y), R(x)."), ArityError); }

TEST(QueryParse, FixturesRoundTrip) {
  for (const auto& f : fixtures::all()) {
    const Query q = f.query();
    EXPECT_EQ(parse_query(serialize_query(q)), q) << f.name;
  }
}

TEST(QueryModel, ClosuresAndHypergraph) {
  const Query q = parse_query("Q(x) :- R(x,y), S(y,z).");
  EXPECT_TRUE(q.boolean_closure().is_boolean());
  EXPECT_TRUE(q.full_closure().is_full());
  EXPECT_EQ(hypergraph_of(q).size(), 2u);
  EXPECT_THROW(Query({{"R", {"x"}}}, {"y"}), SchemaError);
}

TEST(Values, PairSplit) {
  const Value nested = Value::pair(Value::pair(Value::atomic("a"), "x"), "y");
  EXPECT_TRUE(nested.is_pair());
  EXPECT_EQ(nested.var(), "y");
  EXPECT_EQ(nested.data().text(), "pair(a,x)");
  EXPECT_EQ(nested.data().data().text(), "a");
  EXPECT_EQ(Value::atomic("a").data().text(), "a");
  EXPECT_EQ(Value::atomic("a").var(), "");
}

TEST(DatabaseParse, FactsAndDuplicates) {
  const Database db = parse_database("R(a,b).\nR(a,b).\nR(b,c).\nP(a).\n% comment\nE().\n");
  EXPECT_EQ(db.size(), 4u);
  ASSERT_NE(db.find("R"), nullptr);
  EXPECT_EQ(db.find("R")->size(), 2u);
  EXPECT_EQ(db.find("E")->arity(), 0u);
  EXPECT_EQ(db.domain().size(), 3u);
}

TEST(DatabaseParse, PairValuesAndJoinedTokens) {
  const Database db = parse_database("R(pair(a,x),pair(pair(b,y),z)).\nE(u#v,bot).\n");
  EXPECT_EQ(db.size(), 2u);
  EXPECT_TRUE(db.id_of(Value::pair(Value::pair(Value::atomic("b"), "y"), "z")).has_value());
  EXPECT_TRUE(db.id_of(Value::atomic("u#v")).has_value());
}

TEST(DatabaseParse, Errors) {
  EXPECT_THROW(parse_database("R(a,b).\nR(a)."), ArityError);
  EXPECT_THROW(parse_database("R(a,B)."), ParseError);
  EXPECT_THROW(parse_database("R(a"), ParseError);
}

TEST(DatabaseParse, SerializeRoundTrip) {
  const std::string text = "P(pair(a,x)).\nR(a,b).\nR(b,c).\n";
  const Database db = parse_database(text);
  EXPECT_EQ(serialize_database(db), text);
  EXPECT_EQ(parse_database(serialize_database(db)).facts(), db.facts());
}

TEST(Answers, Format) {
  EXPECT_EQ(serialize_answer({Value::atomic("a"), Value::pair(Value::atomic("b"), "x")}), "a, pair(b,x)");
  EXPECT_EQ(serialize_answer({}), "");
}
