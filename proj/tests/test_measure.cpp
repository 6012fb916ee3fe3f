#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "evoset/measure/atoms.hpp"
#include "evoset/measure/convergent.hpp"

using namespace evoset;

namespace {

// Sum of 2^{-(x+1)} for x in [lo, hi], accumulated in long double.
long double geometric_sum(std::int64_t lo, std::int64_t hi) {
  long double s = 0;
  for (auto x = lo; x <= hi; ++x) s += std::pow(2.0L, -static_cast<long double>(x + 1));
  return s;
}

double closed_form_sqrt_minus_one(const IntervalSet& s) {
  double total = 0;
  for (const auto& p : s.parts()) total += (2 * std::sqrt(p.hi) - p.hi) - (2 * std::sqrt(p.lo) - p.lo);
  return total;
}

}  // namespace

TEST(MuTrace, SlidingPairGeometric) {
  const auto mu = mu_trace(int_window_evolution(2, 1), DiscreteMeasure::geometric(), 31);
  ASSERT_EQ(mu.size(), 30u);
  for (std::int64_t k = 1; k <= 30; ++k) {
    EXPECT_NEAR(mu[static_cast<std::size_t>(k - 1)], 3.0 * std::ldexp(1.0, -static_cast<int>(k + 1)), 1e-12);
    EXPECT_NEAR(mu[static_cast<std::size_t>(k - 1)], static_cast<double>(geometric_sum(k - 1, k)), 1e-12);
  }
}

TEST(MuTrace, ExampleSquare) {
  const auto mu = mu_trace(example_square_evolution(), DiscreteMeasure::geometric(), 12);
  EXPECT_DOUBLE_EQ(mu[0], 0.46875);
  for (std::int64_t k = 1; k < 12; ++k)
    EXPECT_NEAR(mu[static_cast<std::size_t>(k - 1)], static_cast<double>(geometric_sum(k, (k + 1) * (k + 1))), 1e-12);
}

TEST(MuTrace, WholeGroundHasMassOne) {
  const auto ground = Stage{1, 2, 3};
  const auto mu = DiscreteMeasure::table({{1, 0.5}, {2, 0.25}, {3, 0.25}});
  EXPECT_DOUBLE_EQ(mu(ground), 1.0);
  EXPECT_THROW(DiscreteMeasure::table({{1, 0.5}}), InvalidArgument);
  EXPECT_THROW(mu.weight(7), WeightMissing);
}

TEST(Decay, SlidingPairThreshold) {
  const auto r = decay_check(int_window_evolution(2, 1), DiscreteMeasure::geometric(), 32, 1e-3);
  ASSERT_TRUE(r.decays());
  EXPECT_EQ(*r.threshold_index, 11u);
  EXPECT_TRUE(r.premise_violations.empty());
  EXPECT_TRUE(r.tail_below_head);
  EXPECT_EQ(r.disjoint_tail, Verdict::Pass);
  EXPECT_EQ(r.lifespan_bound.front(), std::optional<std::int64_t>(2));
}

TEST(Decay, ConstantPairViolatesPremise) {
  const Evolution e(Ground::finite(Stage{1, 2}), [](std::size_t) { return Stage{1, 2}; });
  const auto r = decay_check(e, DiscreteMeasure::geometric(), 16, 1e-3);
  EXPECT_FALSE(r.decays());
  EXPECT_EQ(r.premise_violations.size(), 2u);
}

TEST(Decay, ExampleSquareDecays) {
  const auto r = decay_check(example_square_evolution(), DiscreteMeasure::geometric(), 40, 1e-6);
  ASSERT_TRUE(r.decays());
  for (std::size_t k = *r.threshold_index; k < 40; ++k) EXPECT_LT(r.mu[k - 1], 1e-6);
  EXPECT_LT(r.mu[*r.threshold_index - 2], 1e-6 * 2 + 1);
  EXPECT_THROW(decay_check(example_square_evolution(), DiscreteMeasure::geometric(), 7, 1e-3), InvalidArgument);
}

TEST(Decay, Lebesgue) {
  const LebesgueModel lm(IntervalSet(0, 1), sliding_window_evolution(0.5, 0.25));
  const auto r = decay_check(lm, 12, 1e-3);
  EXPECT_DOUBLE_EQ(r.mu[0], 0.5);
  EXPECT_DOUBLE_EQ(r.mu[2], 0.5);
  EXPECT_DOUBLE_EQ(r.mu[3], 0.25);
  ASSERT_TRUE(r.decays());
  EXPECT_EQ(*r.threshold_index, 5u);
}

TEST(StageIntegral, OneEqualsMu) {
  const auto evo = int_window_evolution(2, 1);
  const auto mu = DiscreteMeasure::geometric();
  const auto t = stage_integral(evo, mu, StageIntegrand::fixed(Integrand::constant(1.0)), 20);
  const auto m = mu_trace(evo, mu, 20);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(t.integral[i], m[i]);
}

TEST(StageIntegral, IdentityOnSlidingPair) {
  const auto t = stage_integral(int_window_evolution(2, 1), DiscreteMeasure::geometric(),
                                StageIntegrand::fixed(Integrand::identity()), 30);
  for (std::int64_t k = 1; k < 30; ++k)
    EXPECT_NEAR(t.integral[static_cast<std::size_t>(k - 1)],
                static_cast<double>(3 * k - 2) * std::ldexp(1.0, -static_cast<int>(k + 1)), 1e-12);
}

TEST(StageIntegral, DeclaredBoundHolds) {
  const auto phi = parse_integrand("poly:0.5,-0.01");  // |phi| <= 1 on 0..100
  const auto t = stage_integral(int_window_evolution(3, 1), DiscreteMeasure::geometric(),
                                StageIntegrand::fixed(phi, 1.0), 60);
  EXPECT_TRUE(t.bound_violations.empty());
  EXPECT_TRUE(t.sampled_bound_violations.empty());
  for (std::size_t i = 0; i < t.integral.size(); ++i) EXPECT_LE(std::abs(t.integral[i]), t.mu[i] + 1e-12);
}

TEST(StageIntegral, UnboundedMassFlagged) {
  // phi_k(x) = 4^{k} on E_k = {k-1, k}: integral stays 3 while mu decays.
  StageIntegrand phi{[](std::size_t k) { return Integrand::constant(std::ldexp(1.0, static_cast<int>(k + 1))); }, 1.0};
  const auto t = stage_integral(int_window_evolution(2, 1), DiscreteMeasure::geometric(), phi, 40);
  EXPECT_TRUE(t.persistent_mass);
  EXPECT_TRUE(t.needs_unbounded);
  EXPECT_FALSE(t.bound_violations.empty());
}

TEST(Integrand, ParserAndClosedForms) {
  const auto phi = parse_integrand("pow:-0.5+const:-1");
  EXPECT_DOUBLE_EQ(phi.integral(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.25), 1.0);
  EXPECT_EQ(parse_integrand(phi.describe()).describe(), phi.describe());
  EXPECT_DOUBLE_EQ(parse_integrand("ind:0.25,0.5").integral(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(parse_integrand("poly:1,2,3").integral(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(parse_integrand("pow:1,2,0.5").integral(0, 1), 0.25);
  EXPECT_THROW(parse_integrand("pow:-1"), CatalogUnsupported);
  EXPECT_THROW(parse_integrand("sin:1"), CatalogUnsupported);
  EXPECT_THROW(parse_integrand("const:x"), CatalogUnsupported);
  EXPECT_FALSE(phi.bounded_on(IntervalSet(0, 1)));
  EXPECT_TRUE(parse_integrand("poly:-0.5,1").attains_both_signs(IntervalSet(0, 1)));
}

TEST(Atoms, FloorAndAxioms) {
  const auto mu = DiscreteMeasure::geometric();
  const auto is_atom = [](std::int64_t x) { return x >= 2 && (x + 1) % 3 == 0; };
  const auto e = atom_augmented_evolution(int_window_evolution(2, 1), arithmetic_atoms(3, -1),
                                          complement_enumeration(is_atom), mu, 64);
  for (std::int64_t k = 1; k < 64; ++k) {
    const auto& s = e.stage(static_cast<std::size_t>(k));
    EXPECT_TRUE(s.contains(3 * k - 1));
    const double floor = mu.weight(3 * k - 1);
    EXPECT_GT(floor, 0.0);
    EXPECT_GE(mu(s), floor);
  }
  EXPECT_EQ(e.stage(1), (Stage{0, 1, 2}));
  EXPECT_FALSE(check_axioms(e, 64).any_fail());
}

TEST(Atoms, Defects) {
  const auto mu = DiscreteMeasure::geometric();
  const auto f = complement_enumeration([](std::int64_t x) { return x == 5; });
  EXPECT_THROW(atom_augmented_evolution(int_window_evolution(2, 1), [](std::size_t) { return Stage{5}; }, f, mu, 8),
               AtomsOverlap);
  const auto zero = DiscreteMeasure::rule(
      [](const ElementId& e) -> std::optional<double> {
        return e.as_integer() == 5 ? 0.0 : std::ldexp(1.0, -static_cast<int>(e.as_integer() + 1));
      },
      "zero at 5");
  EXPECT_THROW(atom_augmented_evolution(int_window_evolution(2, 1),
                                        [](std::size_t k) { return Stage{ElementId(static_cast<std::int64_t>(k) * 5)}; },
                                        complement_enumeration([](std::int64_t x) { return x > 0 && x % 5 == 0; }),
                                        zero, 8),
               ZeroWeightAtom);
  const Bijection broken{[](const ElementId& x) { return x; }, [](const ElementId&) { return ElementId(0); }};
  EXPECT_THROW(atom_augmented_evolution(int_window_evolution(2, 1), arithmetic_atoms(3, -1), broken, mu, 8),
               NotInvertible);
}

TEST(Convergent, SqrtMinusOne) {
  const auto phi = parse_integrand("pow:-0.5+const:-1");
  const auto r = construct_convergent_evolution(phi, 0.05, 400);
  EXPECT_DOUBLE_EQ(r.total, 1.0);
  ASSERT_TRUE(r.threshold_index);
  ASSERT_EQ(r.stages.size(), 400u);
  for (std::size_t k = *r.threshold_index; k < 400; ++k) {
    const double direct = closed_form_sqrt_minus_one(r.stages[k - 1]);
    EXPECT_LE(std::abs(direct - 1.0), 0.05) << k;
    const double outside = closed_form_sqrt_minus_one(r.carrier - r.stages[k - 1]);
    EXPECT_NEAR(r.dead[k - 1] + r.unborn[k - 1], outside, 1e-9) << k;
  }
  for (int c = 1; c <= 3; ++c) EXPECT_EQ(r.axioms.report.verdict(c), Verdict::Pass);
  EXPECT_FALSE(r.axioms.report.any_fail());
}

TEST(Convergent, ZeroIntegrand) {
  const auto r = construct_convergent_evolution(Integrand::constant(0.0), 0.01, 50);
  ASSERT_TRUE(r.threshold_index);
  EXPECT_EQ(*r.threshold_index, 1u);
  EXPECT_EQ(r.sup_error, 0.0);
}

TEST(Convergent, SignObstruction) {
  EXPECT_THROW(construct_convergent_evolution(Integrand::constant(1.0), 0.05, 50), SignObstruction);
  EXPECT_NO_THROW(construct_convergent_evolution(parse_integrand("poly:-0.5,1+const:0.1"), 0.05, 50));
}
