#include <gtest/gtest.h>

#include "support.hpp"

using namespace cqsj;
using namespace cqsj::reductions;

namespace {

Query fx(const std::string& name) { return fixtures::query(name); }

}  // namespace

TEST(Relabel, PerRelationIndexes) {
  const auto r = relabel_self_join_free(fx("Q_FIG1"));
  EXPECT_FALSE(r.query.has_self_joins());
  std::vector<std::string> symbols;
  for (const auto& o : r.occurrences) symbols.push_back(o.symbol);
  EXPECT_EQ(symbols, (std::vector<std::string>{"R1", "R2", "R3", "R4", "P1"}));
}

TEST(Relabel, AvoidsExistingNames) {
  const auto r = relabel_self_join_free(parse_query("Q() :- R(x,y), R1(y)."));
  EXPECT_EQ(r.occurrences[0].symbol, "R1_");
  EXPECT_EQ(r.occurrences[1].symbol, "R11");
}

TEST(Relabel, DuplicateDbPreservesAnswers) {
  const Query q = fx("Q_DIAMOND");
  const auto r = relabel_self_join_free(q);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Database db = gen_random_db(schema_of(q), 6, 20, s);
    EXPECT_EQ(engines::oracle_enumerate(q, db), engines::oracle_enumerate(r.query, duplicate_db(r.occurrences, db)));
  }
}

TEST(Encoding, BuildsPairFacts) {
  const Query q = fx("Q_DIAMOND");
  const auto r = relabel_self_join_free(q);
  const Database d = encoding_trick(q, r.occurrences, parse_database("R1(a,b).\nR2(b,c).\nR3(a,d).\nR4(d,c).\n"));
  EXPECT_EQ(serialize_database(d),
            "R(pair(a,x),pair(b,u)).\nR(pair(a,x),pair(d,v)).\nR(pair(b,u),pair(c,y)).\nR(pair(d,v),pair(c,y)).\n");
}

TEST(Encoding, RejectsBadInput) {
  const Query q = fx("Q_DIAMOND");
  const auto r = relabel_self_join_free(q);
  EXPECT_THROW(encoding_trick(q, r.occurrences, parse_database("Z(a,b).")), SchemaError);
  EXPECT_THROW(encoding_trick(q, r.occurrences, parse_database("R1(a).")), SchemaError);
  EXPECT_THROW(encoding_trick(q, r.occurrences, parse_database("R1(pair(a,x),b).")), SchemaError);
}

TEST(Decode, IdentityAnswer) {
  const Query q = fx("Q_DIAMOND");
  auto p = [](const char* d, const char* v) { return Value::pair(Value::atomic(d), v); };
  const auto d = decode_solution(q, {p("a", "x"), p("b", "u"), p("c", "y"), p("d", "v")});
  EXPECT_EQ(d.endo_class, EndoClass::identity);
  EXPECT_EQ(d.image.atoms().size(), 4u);
  EXPECT_EQ(d.data_part[1].text(), "b");
}

TEST(Decode, FoldingAnswer) {
  const Query q = fx("Q_DIAMOND");
  auto p = [](const char* d, const char* v) { return Value::pair(Value::atomic(d), v); };
  const auto d = decode_solution(q, {p("a", "x"), p("b", "u"), p("c", "y"), p("b", "u")});
  EXPECT_EQ(d.endo_class, EndoClass::non_automorphism);
  EXPECT_EQ(d.image.atoms().size(), 2u);
}

TEST(Decode, RejectsNonEndomorphismAndAtoms) {
  const Query q = fx("Q_DIAMOND");
  auto p = [](const char* d, const char* v) { return Value::pair(Value::atomic(d), v); };
  EXPECT_THROW(decode_solution(q, {p("a", "y"), p("b", "u"), p("c", "x"), p("d", "v")}), SchemaError);
  EXPECT_THROW(decode_solution(q, {Value::atomic("a"), p("b", "u"), p("c", "y"), p("d", "v")}), SchemaError);
  EXPECT_THROW(decode_solution(fx("Q_PATH2P"), {p("a", "x"), p("c", "z")}), SchemaError);
}

TEST(Graph, ParseAndSerialize) {
  const Graph g = parse_graph("% comment\na b\nb c\nlonely\n");
  EXPECT_EQ(g.vertices.size(), 4u);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(g.has_edge("a", "b"));
  EXPECT_FALSE(g.has_edge("b", "a"));
  const Graph again = parse_graph(serialize_graph(g));
  EXPECT_EQ(again.vertices, g.vertices);
  EXPECT_EQ(again.edges, g.edges);
}

TEST(Graph, PartsAndErrors) {
  const Graph g = parse_graph("#parts U:a V:b W:c\na b\nb c\nc a\n");
  ASSERT_TRUE(g.parts);
  EXPECT_EQ(g.parts->U, (std::set<std::string>{"a"}));
  EXPECT_THROW(parse_graph("#parts U:a V:b W:\na b\nb c\n"), SchemaError);
  EXPECT_THROW(parse_graph("a b c\n"), ParseError);
  EXPECT_THROW(parse_graph("a bot\n"), ParseError);
  EXPECT_THROW(parse_graph("A b\n"), ParseError);
}

TEST(Graph, GeneratorsAreDeterministic) {
  const Graph a = gen_random_graph(20, 40, 5), b = gen_random_graph(20, 40, 5);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.edges.size(), 40u);
  for (const auto& [u, v] : a.edges) EXPECT_NE(u, v);
  const Graph t = gen_tripartite(4, 4, 4, 0.5, 1);
  ASSERT_TRUE(t.parts);
  for (const auto& [u, v] : t.edges)
    EXPECT_TRUE((t.parts->U.count(u) && t.parts->V.count(v)) || (t.parts->V.count(u) && t.parts->W.count(v)) ||
                (t.parts->W.count(u) && t.parts->U.count(v)));
}

// Holds a directed 3-cycle and a transitive triangle, so every shape occurs.
TEST(Gadgets, SmallTrianglesAreFound) {
  const Graph g = parse_graph("a b\nb c\nc a\na c\n");
  for (const char* kind : {"triangle-untangle2", "triangle-mirrorfig1", "triangle-spike-q1"}) {
    const auto run = cqsj::testing::run_gadget(gadget(kind), g);
    EXPECT_EQ(run.false_positives, 0u) << kind;
    EXPECT_EQ(run.false_negatives, 0u) << kind;
    EXPECT_FALSE(run.decoded.empty()) << kind;
    EXPECT_EQ(run.decoded, true_triangles(gadget(kind), g)) << kind;
  }
}

TEST(Gadgets, UntangleGadgetSize) {
  const Graph g = parse_graph("a b\nb c\nc a\n");
  EXPECT_EQ(gadget_triangle_untangle2(g).size(), 19u);
}

TEST(Gadgets, NoTriangleNoTriangleAnswers) {
  const Graph g = parse_graph("a b\nb c\nc d\n");
  for (const auto& gd : triangle_gadgets()) {
    if (gd.needs_parts) continue;
    const auto run = cqsj::testing::run_gadget(gd, g);
    EXPECT_TRUE(run.decoded.empty()) << gd.kind;
    EXPECT_EQ(run.labels.count("TRIANGLE"), 0u) << gd.kind;
  }
}

TEST(Gadgets, UtdNeedsPartsAndLabelsEveryAnswer) {
  EXPECT_THROW(gadget_utd_spike_q4(parse_graph("a b\nb c\nc a\n")), SchemaError);
  const Graph g = parse_graph("#parts U:u1,u2 V:v1 W:w1\nu1 v1\nv1 w1\nw1 u1\nu2 v1\n");
  const auto run = cqsj::testing::run_gadget(gadget("utd-spike-q4"), g);
  EXPECT_EQ(run.unclassified, 0u);
  EXPECT_EQ(run.decoded, (std::set<Triangle>{{"u1", "v1", "w1"}}));
  EXPECT_EQ(run.false_negatives, 0u);
}

TEST(Gadgets, RejectSelfLoops) {
  Graph g;
  g.add_edge("a", "a");
  EXPECT_THROW(gadget_triangle_untangle2(g), SchemaError);
}

TEST(Generators, PlantedAnswersExist) {
  const Query q = fx("FIG3_Q1");
  const Database db = gen_planted_db(q, 50, 100, 2, 9);
  EXPECT_GE(engines::oracle_enumerate(q, db).size(), 2u);
}

TEST(Generators, NamedGenerators) {
  const Query q = fx("Q_PATH2F");
  for (const char* gen : {"random", "copies", "noisy", "dense"}) EXPECT_GT(gen_named_db(gen, q, 200, 1).size(), 0u);
  EXPECT_THROW(gen_named_db("bogus", q, 200, 1), SchemaError);
}
