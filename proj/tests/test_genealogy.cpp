#include <gtest/gtest.h>

#include "evoset/genealogy/ancestry.hpp"
#include "evoset/genealogy/generations.hpp"
#include "evoset/io/reports.hpp"

using namespace evoset;

namespace {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t count_primes_upto(std::int64_t y) {
  std::int64_t c = 0;
  for (std::int64_t p = 2; p <= y; ++p) c += is_prime(p);
  return c;
}

Stage children_oracle(std::int64_t mother, std::int64_t bound) {
  std::vector<ElementId> xs;
  for (std::int64_t y = 1; y <= bound; ++y)
    if (2 * count_primes_upto(y) == mother) xs.push_back(y);
  return Stage(std::move(xs));
}

}  // namespace

TEST(Primes, SieveMatchesTrialDivision) {
  const auto pi = prime_counts(500);
  for (std::int64_t y = 0; y <= 500; ++y) EXPECT_EQ(pi[static_cast<std::size_t>(y)], count_primes_upto(y)) << y;
}

TEST(PrimeModel, Children) {
  const auto m = GenealogyModel::prime_model(100);
  EXPECT_EQ(m.children_of({9, 10}), children_oracle(10, 100));
  EXPECT_EQ(m.children_of({9, 10}), (Stage{11, 12}));
  EXPECT_EQ(m.children_of({1, 2}), (Stage{2}));
  EXPECT_EQ(m.mother_of(9), ElementId(8));
  for (std::int64_t x = 1; x < 100; x += 2) EXPECT_EQ(m.children_of({x, x + 1}), children_oracle(x + 1, 100)) << x;
}

TEST(PrimeModel, ChildrenDisjointAcrossCouples) {
  const auto m = GenealogyModel::prime_model(300);
  Stage seen;
  for (const auto& c : m.couples()) {
    const auto kids = m.children_of(c);
    EXPECT_TRUE((kids & seen).empty());
    seen = seen | kids;
  }
}

TEST(PrimeModel, Founders) {
  const auto m = GenealogyModel::prime_model(100);
  const auto fs = founders(m);
  EXPECT_EQ(fs.males, (Stage{1}));
  EXPECT_TRUE(fs.females.empty());
  EXPECT_THROW(generational_evolution(m), FoundersInvalid);
}

TEST(ToyModel, Stages) {
  const auto m = toy_genealogy();
  const auto fs = founders(m);
  EXPECT_EQ(fs.males, (Stage{"m1"}));
  EXPECT_EQ(fs.females, (Stage{"f1"}));
  const auto g = generational_evolution(m);
  EXPECT_EQ(g.evolution.stage(1), (Stage{"m1", "f1", "m2", "f2"}));
  EXPECT_EQ(g.evolution.stage(2), (Stage{"m2", "f2", "m3", "f3"}));
  EXPECT_EQ(g.evolution.stage(3), (Stage{"m3", "f3"}));
  EXPECT_TRUE(g.evolution.stage(4).empty());
  EXPECT_TRUE(g.evolution.stage(5).empty());
  EXPECT_EQ(g.placement(), Verdict::Pass);
}

TEST(ToyModel, TerminalGenerationFailsConditionTwo) {
  const auto g = generational_evolution(toy_genealogy());
  const auto r = check_axioms(g.evolution, 8);
  EXPECT_EQ(r.verdict(1), Verdict::Pass);
  EXPECT_EQ(r.verdict(2), Verdict::Fail);
  EXPECT_EQ(r.verdict(3), Verdict::Pass);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].condition, 2);
  EXPECT_EQ(r.violations[0].index, 2u);
  ASSERT_FALSE(r.violations[0].witness.empty());
  EXPECT_TRUE(r.violations[0].witness[0].empty());
}

TEST(ToyModel, FounderSubsetChecked) {
  EXPECT_THROW(generational_evolution(toy_genealogy(), Stage{"m2"}, Stage{"f1"}), FoundersInvalid);
  EXPECT_THROW(generational_evolution(toy_genealogy(), Stage{}, Stage{"f1"}), FoundersInvalid);
}

TEST(Generations, LongChainPassesConditionsOneToThree) {
  // Chain of couples (m_i, f_i), each child pair born to the previous couple.
  std::vector<std::pair<ElementId, Sex>> people;
  std::vector<std::pair<ElementId, ElementId>> marriages, repro;
  const int n = 12;
  for (int i = 1; i <= n; ++i) {
    const auto mi = "m" + std::to_string(i), fi = "f" + std::to_string(i);
    people.emplace_back(mi, Sex::Male);
    people.emplace_back(fi, Sex::Female);
    marriages.emplace_back(mi, fi);
    if (i > 1) {
      const auto mother = "f" + std::to_string(i - 1);
      repro.emplace_back(mi, mother);
      repro.emplace_back(fi, mother);
    }
  }
  const auto g = generational_evolution(GenealogyModel(people, marriages, repro));
  ASSERT_EQ(g.trace.generations.size(), static_cast<std::size_t>(n));
  // Stages 1..n-2 have G_{k+2} nonempty, so they must form a valid prefix.
  const auto r = check_axioms(g.evolution, n - 1);
  EXPECT_FALSE(r.any_fail());
  EXPECT_TRUE(ancestry_check(g.trace).ok());
}

TEST(Ancestry, ToyTrace) {
  const auto a = ancestry_check(generational_evolution(toy_genealogy()).trace);
  EXPECT_TRUE(a.ok());
  EXPECT_TRUE(a.findings.empty());
}

TEST(Ancestry, DuplicateAcrossGenerations) {
  GenerationTrace t;
  t.generations = {{Stage{"a"}, Stage{"b"}}, {Stage{"a"}, Stage{"c"}}};
  const auto r = ancestry_check(t);
  EXPECT_EQ(r.disjoint_generations, Verdict::Fail);
  ASSERT_FALSE(r.findings.empty());
}

TEST(Ancestry, CycleWitness) {
  GenerationTrace t;
  t.generations = {{Stage{"a"}, Stage{"b"}}, {Stage{"c"}, Stage{"d"}}};
  t.links = {{{"a", "b"}, "c"}, {{"c", "d"}, "a"}};
  const auto r = ancestry_check(t);
  EXPECT_EQ(r.acyclic, Verdict::Fail);
  ASSERT_GE(r.cycle.size(), 2u);
  EXPECT_EQ(r.cycle.front(), r.cycle.back());
}

TEST(Ancestry, SharedChild) {
  GenerationTrace t;
  t.generations = {{Stage{"a", "c"}, Stage{"b", "d"}}, {Stage{"e"}, Stage{}}};
  t.links = {{{"a", "b"}, "e"}, {{"c", "d"}, "e"}};
  EXPECT_EQ(ancestry_check(t).disjoint_children, Verdict::Fail);
}

TEST(Ancestry, EmptyTraceIsVacuous) { EXPECT_TRUE(ancestry_check(GenerationTrace{}).ok()); }

TEST(Ancestry, TraceJsonRoundTrip) {
  const auto t = generational_evolution(toy_genealogy()).trace;
  const auto back = io::trace_from_json(io::to_json(t));
  ASSERT_EQ(back.generations.size(), t.generations.size());
  for (std::size_t i = 0; i < t.generations.size(); ++i) EXPECT_EQ(back.generations[i].all(), t.generations[i].all());
  EXPECT_EQ(back.links.size(), t.links.size());
  EXPECT_EQ(back.stage0, t.stage0);
}
