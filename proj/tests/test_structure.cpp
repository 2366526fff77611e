#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>

#include "cqsj/structure/canonical.hpp"
#include "cqsj/structure/classify.hpp"
#include "cqsj/structure/homomorphism.hpp"
#include "cqsj/structure/images.hpp"
#include "cqsj/structure/join_tree.hpp"
#include "support.hpp"

using namespace cqsj;
using namespace cqsj::structure;

namespace {

Query fx(const std::string& name) { return fixtures::query(name); }

}  // namespace

TEST(JoinTree, PathIsAcyclicAndFreeConnex) {
  const auto tree = gyo_acyclic(fx("Q_PATH2F"));
  ASSERT_TRUE(tree);
  EXPECT_TRUE(satisfies_running_intersection(*tree));
  EXPECT_TRUE(is_free_connex(fx("Q_PATH2F")));
}

TEST(JoinTree, ProjectedPathIsNotFreeConnex) {
  EXPECT_TRUE(is_acyclic(fx("Q_PATH2P")));
  EXPECT_FALSE(is_free_connex(fx("Q_PATH2P")));
}

TEST(JoinTree, CyclesAreCyclic) {
  for (const char* name : {"Q_TRIANGLE", "Q_TRIANGLE3", "Q_DIAMOND", "Q_REV", "TWENTY_CYCLE"})
    EXPECT_FALSE(is_acyclic(fx(name))) << name;
}

TEST(JoinTree, CoveredTriangleIsAcyclic) {
  EXPECT_TRUE(is_acyclic(parse_query("Q() :- R(x,y), S(y,z), T(x,z), U(x,y,z).")));
}

TEST(JoinTree, AgreesWithBruteForceOnRandomQueries) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Query q = cqsj::testing::random_query(seed);
    EXPECT_EQ(is_acyclic(q), cqsj::testing::brute_force_acyclic(q)) << serialize_query(q);
  }
}

TEST(Homomorphism, CoreOfDiamond) {
  const Query c = core(fx("Q_DIAMOND"));
  EXPECT_TRUE(c.is_boolean());
  EXPECT_EQ(c.atoms().size(), 2u);
  EXPECT_TRUE(is_minimal(c));
}

TEST(Homomorphism, RevCoreStaysCyclic) {
  const Query c = core(fx("Q_REV"));
  EXPECT_EQ(c.atoms().size(), 4u);
  EXPECT_FALSE(is_acyclic(c));
}

TEST(Homomorphism, FullQueriesAreMinimal) {
  for (const auto& f : fixtures::all()) {
    if (!f.query().is_full()) continue;
    EXPECT_TRUE(is_minimal(f.query())) << f.name;
  }
}

TEST(Homomorphism, MinimalFormIsEquivalent) {
  const Query q = parse_query("Q(x) :- R(x,y), R(x,z), S(z).");
  const Query m = minimal_form(q);
  EXPECT_EQ(m.atoms().size(), 2u);
  EXPECT_TRUE(is_minimal(m));
  EXPECT_TRUE(homomorphism_onto(q, m).has_value());
}

TEST(Homomorphism, LimitsAreEnforced) {
  Limits tight;
  tight.max_vars = 3;
  EXPECT_THROW(endomorphisms(fx("Q_DIAMOND"), false, tight), LimitExceeded);
}

TEST(Images, DiamondHasThreeAtomSets) {
  const auto imgs = images(fx("Q_DIAMOND"));
  ASSERT_EQ(imgs.size(), 3u);
  EXPECT_EQ(imgs.front().query.atoms().size(), 4u);
  EXPECT_FALSE(has_nested_images(imgs));
}

TEST(Images, RequireFullQuery) { EXPECT_THROW(images(fx("Q_PATH2P")), SchemaError); }

TEST(Untangle, DiamondStepProjectsSharedVariables) {
  const Query image = parse_query("Q(x,u,y) :- R(x,u), R(u,y).");
  const Query r = untangling_step(fx("Q_DIAMOND"), image);
  EXPECT_EQ(serialize_query(r), "Q(v) :- R__0(v), R__1(v).");
}

TEST(Untangle, UntangleableFixtureHasValidWitness) {
  const auto out = is_untangleable(fx("FIG3_Q1"));
  ASSERT_EQ(out.status, Tristate::yes);
  ASSERT_TRUE(out.witness);
  EXPECT_NO_THROW(validate_witness(fx("FIG3_Q1"), *out.witness));
}

TEST(Untangle, StuckFixtureTransfersHardness) {
  EXPECT_EQ(is_untangleable(fx("FIG4_Q2")).status, Tristate::no);
  const auto w = hardness_transfer(fx("FIG4_Q2"));
  ASSERT_TRUE(w);
  EXPECT_FALSE(is_acyclic(core(w->untangled)));
}

TEST(Untangle, TamperedWitnessIsRejected) {
  auto out = is_untangleable(fx("FIG3_Q1"));
  ASSERT_TRUE(out.witness);
  auto w = *out.witness;
  w.base = fx("Q_TRIANGLE");
  EXPECT_THROW(validate_witness(fx("FIG3_Q1"), w), InvalidWitness);
}

TEST(Mirror, DiamondIsMirrorRevIsNot) {
  const auto m = is_mirror(fx("Q_DIAMOND"));
  ASSERT_TRUE(m);
  EXPECT_NO_THROW(validate_mirror(fx("Q_DIAMOND"), *m));
  EXPECT_FALSE(is_mirror(fx("Q_REV")));
  EXPECT_FALSE(is_mirror(fx("Q_FIG1")));
}

TEST(Canonical, RenamingInvariant) {
  const Query a = parse_query("Q(x,y,z) :- R(x,y), R(y,z), R(z,x).");
  const Query b = parse_query("Q(b,c,a) :- R(c,a), R(a,b), R(b,c).");
  EXPECT_TRUE(isomorphic(a, b));
  EXPECT_FALSE(isomorphic(a, parse_query("Q(x,y,z) :- R(x,y), R(y,z), R(x,z).")));
}

TEST(Canonical, RegistryFindsRenamedFixture) {
  const Query renamed = parse_query(
      "Q(a1,a2,a3,a4,a5,a6,a7,a8,b6,b4) :- R(a5,b6), R(b4,a7), P(a2), R(a1,a2), R(a2,a3), R(a4,a3), R(a5,a4), "
      "R(a5,a6), R(a6,a7), R(a8,a7), R(a1,a8).");
  const auto m = registry_lookup(renamed);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->entry.fixture, "SPIKE_Q2");
  EXPECT_EQ(m->to_fixture.at("b6"), "s6");
}

TEST(Classify, MatchesFrozenVerdicts) {
  std::ifstream in(CQSJ_DATA_DIR "/expected_verdicts.json");
  ASSERT_TRUE(in);
  const auto expected = nlohmann::json::parse(in);
  for (const auto& f : fixtures::all()) {
    const auto report = classify(f.query());
    std::vector<std::string> got;
    for (const auto& v : report.verdicts) got.push_back(v.to_string());
    EXPECT_EQ(got, expected.at(f.name).at("verdicts").get<std::vector<std::string>>()) << f.name;
  }
}

TEST(Classify, CyclicCoreIsHardForFirstSolution) {
  const auto r = classify(fx("Q_REV"));
  EXPECT_FALSE(r.core_acyclic);
  ASSERT_NE(r.verdict("first-solution"), nullptr);
  EXPECT_EQ(r.verdict("first-solution")->verdict, "conditionally hard");
  EXPECT_EQ(r.verdict("first-solution")->citation, "Thm 3.5");
}

TEST(Classify, NonMinimalInputIsMinimizedFirst) {
  const auto r = classify(parse_query("Q(x) :- R(x,y), R(x,z)."));
  EXPECT_TRUE(r.minimized);
  EXPECT_EQ(r.analyzed.atoms().size(), 1u);
}

TEST(Classify, JsonCarriesVerdicts) {
  const auto j = classify(fx("Q_DIAMOND")).to_json();
  EXPECT_EQ(j.at("mirror").at("image"), "Q(x,u,y) :- R(x,u), R(u,y).");
  EXPECT_EQ(j.at("verdicts").size(), 4u);
}
