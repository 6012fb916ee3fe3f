#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "evoset/chronology.hpp"
#include "evoset/pullback.hpp"
#include "evoset/reducibility.hpp"

using namespace evoset;

namespace {

Evolution constant_pair() {
  return Evolution(Ground::finite(Stage{1, 2}), [](std::size_t) { return Stage{1, 2}; });
}

// A(x) for E_n = {n..(n+1)^2}: the least n >= 1 with (n+1)^2 >= x.
std::int64_t square_appear(std::int64_t x) {
  std::int64_t n = 1;
  while ((n + 1) * (n + 1) < x) ++n;
  return n;
}

}  // namespace

TEST(Stage, ExampleSquareValues) {
  const auto e = example_square_evolution();
  EXPECT_EQ(e.stage(1), (Stage{1, 2, 3, 4}));
  EXPECT_EQ(e.stage(2), (Stage{2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(e.stage(7).size(), 64u - 7u + 1u);
}

TEST(Stage, SetAlgebra) {
  const Stage a{1, 2, 3}, b{2, 3, 4};
  EXPECT_EQ(a & b, (Stage{2, 3}));
  EXPECT_EQ(a | b, (Stage{1, 2, 3, 4}));
  EXPECT_EQ(a - b, (Stage{1}));
  EXPECT_TRUE((Stage{2}).subset_of(a));
  EXPECT_EQ((Stage{"b", 3, "a", 3}).size(), 3u);
  EXPECT_TRUE(ElementId(5) < ElementId("a"));
}

TEST(Stage, ConcurrentReadersSeeOnePrefix) {
  const auto e = example_square_evolution();
  std::vector<std::thread> ts;
  std::vector<std::size_t> sizes(8);
  for (std::size_t t = 0; t < sizes.size(); ++t)
    ts.emplace_back([&, t] {
      for (std::size_t k = 1; k <= 200; ++k) sizes[t] += e.stage(k).size();
    });
  for (auto& t : ts) t.join();
  for (auto s : sizes) EXPECT_EQ(s, sizes.front());
  EXPECT_EQ(e.stage(3), e.stage(3));
}

TEST(CheckAxioms, ExampleSquareHorizon64) {
  const auto r = check_axioms(example_square_evolution(), 64);
  for (int c = 1; c <= 3; ++c) EXPECT_EQ(r.verdict(c), Verdict::Pass) << c;
  EXPECT_EQ(r.fail_count(), 0u);
  EXPECT_EQ(r.elements.size(), 65u * 65u);
  for (const auto& rec : r.elements) {
    const auto x = rec.id.as_integer();
    EXPECT_EQ(rec.first, static_cast<std::size_t>(square_appear(x)));
    // x lives in E_A..E_x, so D(x) = x + 1.
    const bool closed = x + 1 <= 64;
    EXPECT_EQ(rec.disappearance, closed ? Verdict::Pass : Verdict::Unknown) << x;
  }
}

TEST(CheckAxioms, ConstantPairFailsConditionTwo) {
  const auto r = check_axioms(constant_pair(), 10);
  EXPECT_EQ(r.verdict(2), Verdict::Fail);
  EXPECT_EQ(r.verdict(4), Verdict::Unknown);
  ASSERT_FALSE(r.violations.empty());
  const auto& v = r.violations.front();
  EXPECT_EQ(v.condition, 2);
  EXPECT_EQ(v.index, 1u);
  ASSERT_FALSE(v.witness.empty());
  EXPECT_TRUE(v.witness.front().empty());
}

TEST(CheckAxioms, SlidingPairPasses) {
  for (std::size_t h : {3u, 10u, 50u}) {
    const auto r = check_axioms(int_window_evolution(2, 1), h);
    for (int c = 1; c <= 4; ++c) EXPECT_EQ(r.decided(c), Verdict::Pass);
    EXPECT_FALSE(r.any_fail());
  }
}

TEST(CheckAxioms, EmptyThenNonemptyFailsConditionOne) {
  const auto e = explicit_evolution({Stage{1, 2}, Stage{2, 3}, Stage{}, Stage{3}});
  const auto r = check_axioms(e, 5);
  EXPECT_EQ(r.verdict(1), Verdict::Fail);
}

TEST(CheckAxioms, BrokenRunFailsConditionThree) {
  const auto e = explicit_evolution({Stage{1, 2}, Stage{2, 3}, Stage{1, 3, 4}, Stage{4, 5}});
  const auto r = check_axioms(e, 6);
  EXPECT_EQ(r.verdict(3), Verdict::Fail);
  const auto* rec = r.find(1);
  ASSERT_NE(rec, nullptr);
  EXPECT_FALSE(rec->contiguous());
}

TEST(CheckAxioms, UnseenGroundElementIsReported) {
  const auto e = explicit_evolution({Stage{1, 2}, Stage{2, 3}}, Ground::finite(Stage{1, 2, 3, 9}));
  const auto r = check_axioms(e, 4);
  ASSERT_EQ(r.unseen.size(), 1u);
  EXPECT_EQ(r.unseen.front(), ElementId(9));
}

TEST(CheckAxioms, HorizonTooSmall) { EXPECT_THROW(check_axioms(int_window_evolution(2, 1), 2), InvalidArgument); }

TEST(Chronology, ExampleSquare) {
  const auto c = chronology_of(example_square_evolution(), 16);
  EXPECT_EQ(c.lifespans.at(9), (Lifespan{2, 10}));
  EXPECT_EQ(c.lifespans.at(1), (Lifespan{1, 2}));
}

TEST(Chronology, SlidingPair) {
  const auto c = chronology_of(int_window_evolution(2, 1), 20);
  EXPECT_EQ(c.lifespans.at(0), (Lifespan{1, 2}));
  for (std::int64_t x = 1; x < 18; ++x) EXPECT_EQ(c.lifespans.at(x), (Lifespan{x, x + 2})) << x;
  EXPECT_FALSE(c.undetermined.empty());
}

TEST(Chronology, RuleChronologyStages) {
  const Chronology chron(
      0, [](std::int64_t x) { return Lifespan{x / 2, x / 2 + 2 + x % 2}; },
      [](std::size_t k) { return 2 * k + 2; });
  const auto e = from_chronology(chron, 30);
  EXPECT_EQ(e.stage(1), (Stage{0, 1, 2, 3}));
  EXPECT_EQ(e.stage(2), (Stage{1, 2, 3, 4, 5}));
  const auto r = check_axioms(e, 30);
  for (int c = 1; c <= 4; ++c) EXPECT_EQ(r.decided(c), Verdict::Pass);
}

TEST(Chronology, IdentityRule) {
  const Chronology chron(
      0, [](std::int64_t x) { return Lifespan{x, x + 2}; }, [](std::size_t k) { return k + 1; });
  const auto e = from_chronology(chron, 20);
  for (std::int64_t k = 1; k < 20; ++k) EXPECT_EQ(e.stage(static_cast<std::size_t>(k)), (Stage{k - 1, k}));
}

TEST(Chronology, Infeasible) {
  const Chronology chron(std::map<ElementId, Lifespan>{{1, {0, 2}}, {2, {3, 4}}});
  try {
    from_chronology(chron);
    FAIL() << "expected ChronologyInfeasible";
  } catch (const ChronologyInfeasible& e) {
    EXPECT_EQ(e.element, ElementId(2));
  }
}

TEST(Chronology, SurjectivityGap) {
  const Chronology chron(std::map<ElementId, Lifespan>{{1, {0, 2}}, {2, {2, 5}}});
  try {
    from_chronology(chron, 4);
    FAIL() << "expected SurjectivityGap";
  } catch (const SurjectivityGap& e) {
    EXPECT_EQ(e.k, 1);
    EXPECT_EQ(e.side, SurjectivityGap::Side::Appearance);
  }
}

TEST(Pullback, Identity) {
  const auto base = example_square_evolution();
  const auto p = pullback(MapDescriptor::identity(base.ground()), base);
  for (std::size_t k = 1; k < 20; ++k) EXPECT_EQ(p.stage(k), base.stage(k));
}

TEST(Pullback, HalvingMap) {
  const MapDescriptor f{Ground::naturals_from(0), [](const ElementId& y) { return ElementId(y.as_integer() / 2); },
                        [](const ElementId& e) {
                          return std::vector<ElementId>{2 * e.as_integer(), 2 * e.as_integer() + 1};
                        }};
  const auto p = pullback(f, int_window_evolution(2, 1));
  for (std::int64_t k = 1; k < 30; ++k)
    EXPECT_EQ(p.stage(static_cast<std::size_t>(k)), Stage::range(2 * k - 2, 2 * k + 1));
}

TEST(Pullback, MissingPreimage) {
  const auto base = explicit_evolution({Stage{5, 6}, Stage{6, 7}, Stage{7, 8}});
  std::map<ElementId, ElementId> pairs{{"a", 5}, {"b", 6}, {"c", 8}};
  try {
    pullback(MapDescriptor::from_pairs(pairs), base);
    FAIL() << "expected SurjectivityViolated";
  } catch (const SurjectivityViolated& e) {
    EXPECT_EQ(e.element, ElementId(7));
  }
}

TEST(Isoevolution, IdentityPasses) {
  const auto e = example_square_evolution();
  EXPECT_EQ(is_isoevolved(e, e, Bijection::identity(), 20).verdict, Verdict::Pass);
}

TEST(Isoevolution, ShiftedSquare) {
  const auto e = example_square_evolution();
  const Evolution f(Ground::naturals_from(2), [](std::size_t n) {
    const auto v = static_cast<std::int64_t>(n);
    return Stage::range(v + 1, (v + 1) * (v + 1) + 1);
  });
  const Bijection shift{[](const ElementId& x) { return ElementId(x.as_integer() + 1); },
                        [](const ElementId& y) { return ElementId(y.as_integer() - 1); }};
  EXPECT_EQ(is_isoevolved(e, f, shift, 30).verdict, Verdict::Pass);
}

TEST(Isoevolution, CardinalityMismatch) {
  const auto r = is_isoevolved(example_square_evolution(), int_window_evolution(2, 1), Bijection::identity(), 5);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.mismatch_stage, 1u);
  EXPECT_FALSE(r.symmetric_difference.empty());
}

TEST(Isoevolution, CollisionRejected) {
  const auto e = explicit_evolution({Stage{1, 2}, Stage{2, 3}});
  const Bijection squash{[](const ElementId&) { return ElementId(1); }, [](const ElementId& y) { return y; }};
  EXPECT_THROW(is_isoevolved(e, e, squash, 3), NotABijection);
}

TEST(Reducibility, QuadWindowStrideTwo) {
  const auto r = find_reducing_subsequence(int_window_evolution(4, 1, 1), 24);
  ASSERT_EQ(r.verdict, ReduceVerdict::Reducible);
  EXPECT_EQ(r.stride, 2u);
  const auto e = int_window_evolution(4, 1, 1);
  for (std::size_t i = 0; i + 1 < r.indices.size(); ++i)
    EXPECT_FALSE((e.stage(r.indices[i]) & e.stage(r.indices[i + 1])).empty());
}

TEST(Reducibility, SlidingPairNotFound) {
  EXPECT_EQ(find_reducing_subsequence(int_window_evolution(2, 1), 24).verdict, ReduceVerdict::NotFoundWithinBounds);
  const auto small = find_reducing_subsequence(int_window_evolution(2, 1), 10);
  EXPECT_EQ(small.verdict, ReduceVerdict::NotFoundWithinBounds);
  EXPECT_TRUE(small.exhaustive);
}

TEST(Reducibility, HorizonFive) {
  EXPECT_EQ(find_reducing_subsequence(int_window_evolution(2, 1), 5).verdict, ReduceVerdict::NotFoundWithinBounds);
}
