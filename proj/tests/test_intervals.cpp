#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "evoset/intervals/probes.hpp"
#include "evoset/intervals/span.hpp"

using namespace evoset;

TEST(IntervalSet, Operations) {
  EXPECT_EQ(IntervalSet(0, 2) & IntervalSet(1, 3), IntervalSet(1, 2));
  EXPECT_DOUBLE_EQ((IntervalSet(0, 1) | IntervalSet(2, 2.5)).measure(), 1.5);
  const auto d = IntervalSet(0, 3) - IntervalSet(1, 2);
  ASSERT_EQ(d.parts().size(), 2u);
  EXPECT_EQ(d, IntervalSet(0, 1) | IntervalSet(2, 3));
  EXPECT_EQ((IntervalSet(0, 1) | IntervalSet(1, 2)).parts().size(), 1u);
  EXPECT_EQ(d.sample(), 0.0);
  EXPECT_THROW(IntervalSet().sample(), EmptySet);
}

TEST(IntervalSet, RandomAlgebraLaws) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> cut(0, 40);
  const auto random_set = [&] {
    IntervalSet s;
    for (int i = 0; i < 4; ++i) {
      int a = cut(rng), b = cut(rng);
      if (a == b) continue;
      s = s | IntervalSet(std::min(a, b) * 0.25, std::max(a, b) * 0.25);
    }
    return s;
  };
  for (int t = 0; t < 300; ++t) {
    const auto a = random_set(), b = random_set(), c = random_set();
    EXPECT_TRUE((a & b).subset_of(a));
    EXPECT_DOUBLE_EQ((a - b).measure() + (a & b).measure(), a.measure());
    EXPECT_EQ(a | b, b | a);
    EXPECT_EQ((a | b) | c, a | (b | c));
  }
}

TEST(SlidingWindow, Stages) {
  const auto f = sliding_window_evolution(2, 1);
  EXPECT_EQ(f.stage(1), IntervalSet(0, 2));
  EXPECT_EQ(f.stage(2), IntervalSet(1, 3));
  EXPECT_EQ(f.stage(1) & f.stage(2), IntervalSet(1, 2));
  std::vector<std::size_t> hits;
  for (std::size_t k = 1; k <= 20; ++k)
    if (f.stage(k).contains(0.5)) hits.push_back(k);
  EXPECT_EQ(hits, std::vector<std::size_t>{1});
  EXPECT_THROW(sliding_window_evolution(1, 1), BadWindow);
}

TEST(SlidingWindow, AxiomsOnCells) {
  const auto r = check_real_axioms(sliding_window_evolution(2, 1), 30);
  for (int c = 1; c <= 4; ++c) EXPECT_EQ(r.report.decided(c), Verdict::Pass);
  EXPECT_EQ(r.report.coverage, Verdict::Unknown);
  const auto bad = check_real_stage_sequence({IntervalSet(0, 1), IntervalSet(0, 1), IntervalSet(0, 1)}, IntervalSet(0, 1));
  EXPECT_EQ(bad.report.verdict(2), Verdict::Fail);
}

TEST(Shell, Stages) {
  const auto f = shell_evolution(int_window_evolution(2, 1));
  EXPECT_TRUE(IntervalSet::closed(1, 3).subset_of(f.stage(2)));
  for (std::size_t k = 1; k < 12; ++k) {
    const bool has_one = int_window_evolution(2, 1).stage(k).contains(1);
    EXPECT_EQ(f.stage(k).contains(1.5), has_one) << k;
  }
  EXPECT_TRUE(f.stage(2).contains(3.0));
  EXPECT_FALSE(f.stage(2).contains(std::nextafter(3.0, 4.0)));
  EXPECT_TRUE(shell_evolution(explicit_evolution({Stage{1}})).stage(2).empty());
}

TEST(Probe, DistanceToPointOccurrences) {
  const ScalarPullbackEvolution e(ScalarProbe(probe::DistanceToPoint{{0, 0}}), sliding_window_evolution(2, 1));
  EXPECT_EQ(e.occurrences({3, 4}, 40), (std::vector<std::size_t>{5, 6}));
  EXPECT_TRUE(e.contains({0, 0}, 1));
}

TEST(Probe, WitnessSoundness) {
  const auto half = sliding_window_evolution(2, 0.75);
  const auto line = symmetric_window_evolution(2, 0.75);
  const std::vector<ScalarPullbackEvolution> evos{
      {ScalarProbe(probe::DistanceToPoint{{1.5, -2, 0.25}}), half},
      {ScalarProbe(probe::DistanceToSet{{{0, 0}, {3, 1}, {-1, 4}}}), half},
      {ScalarProbe(probe::LinearFunctional{{0, 3, -7}}), line},
      {ScalarProbe(probe::Determinant{3}), line},
      {ScalarProbe(probe::InnerProduct{{0.1, 0, 2}}), line},
  };
  for (const auto& e : evos) {
    for (std::size_t k = 1; k <= 60; ++k) {
      const auto w = e.witness(k);
      ASSERT_TRUE(w) << e.probe().name() << " " << k;
      EXPECT_TRUE(e.base().stage(k).contains(e.probe()(*w))) << e.probe().name() << " " << k;
      EXPECT_TRUE(e.contains(*w, k));
    }
  }
}

TEST(Probe, DeterminantSamplerIsDiagonal) {
  const ScalarProbe det(probe::Determinant{2});
  const auto m = det.sample(-3.5);
  EXPECT_EQ(m, (Point{1, 0, 0, -3.5}));
  EXPECT_EQ(det(m), -3.5);
  EXPECT_DOUBLE_EQ(det({2, 1, 1, 3}), 5.0);
}

TEST(Probe, MembershipLawOnRandomPoints) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  const ScalarPullbackEvolution e(ScalarProbe(probe::InnerProduct{{1, -2}}), symmetric_window_evolution(3, 1));
  for (int t = 0; t < 200; ++t) {
    const Point p{u(rng), u(rng)};
    const double v = p[0] - 2 * p[1];
    for (std::size_t k = 1; k <= 20; ++k) EXPECT_EQ(e.contains(p, k), e.base().stage(k).contains(v));
  }
}

TEST(Probe, RangeMismatch) {
  EXPECT_THROW(ScalarPullbackEvolution(ScalarProbe(probe::DistanceToPoint{{0}}), symmetric_window_evolution(2, 1)),
               RangeMismatch);
  EXPECT_THROW(ScalarPullbackEvolution(ScalarProbe(probe::Determinant{2}), sliding_window_evolution(2, 1)),
               RangeMismatch);
}

TEST(Span, Occurrences) {
  const SpanEvolution s(int_window_evolution(3, 1, 1));
  EXPECT_EQ(s.occurrences(SupportVector({{3, 1.0}, {4, -2.0}}), 30), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(s.occurrences(SupportVector::basis(3), 30), (std::vector<std::size_t>{1, 2, 3}));
  const auto w = s.witness(4);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->support(), (Stage{4, 5, 6}));
  EXPECT_THROW(SupportVector({{2, 0.0}}), ZeroVectorRejected);
  EXPECT_THROW(SupportVector(std::map<std::int64_t, double>{}), ZeroVectorRejected);
}

TEST(Span, IntervalProperty) {
  const SpanEvolution s(int_window_evolution(4, 1, 0));
  for (std::int64_t a = 0; a < 10; ++a)
    for (std::int64_t b = a; b < a + 4; ++b) {
      const auto occ = s.occurrences(SupportVector({{a, 1.0}, {b, 1.0}}), 30);
      ASSERT_FALSE(occ.empty());
      EXPECT_EQ(occ.back() - occ.front() + 1, occ.size());
    }
}
