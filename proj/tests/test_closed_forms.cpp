#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace loggas;
using testgen::sorted;

TEST(TwoComponent, Examples) {
  const auto a = two_component_critical(TwoComponentSpec::make(2, 2, Rational(1), Rational(1)));
  EXPECT_EQ(*a.beta_plus_exact, Rational(1));
  EXPECT_EQ(a.kappa_plus, 2);
  EXPECT_DOUBLE_EQ(a.free_energy_prefactor, 0.5);
  EXPECT_EQ(a.g_plus.size(), 4u);

  const auto b = two_component_critical(TwoComponentSpec::make(1, 2, Rational(2), Rational(1)));
  EXPECT_EQ(*b.beta_plus_exact, Rational(1, 2));
  EXPECT_EQ(b.kappa_plus, 1);
  EXPECT_DOUBLE_EQ(b.free_energy_prefactor, 1.0 / 3.0);

  const auto c = two_component_critical(TwoComponentSpec::make(2, 3, Rational(3), Rational(2)));
  EXPECT_EQ(*c.beta_plus_exact, Rational(1, 6));
  EXPECT_EQ(c.kappa_plus, 2);
}

TEST(TwoComponent, RequiresNeutrality) {
  try {
    two_component_critical(TwoComponentSpec::make(2, 2, 2.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNeutral);
  }
}

TEST(TechnicalInequality, Examples) {
  // (1,1,1): |0| >= 0 holds with equality; a + b >= z + 1 also holds.
  const auto r = technical_inequality(1.0, 1, 1);
  EXPECT_TRUE(r == TechnicalInequality::ineq1 || r == TechnicalInequality::both);
  const auto s = technical_inequality(2.0, 1, 3);
  EXPECT_TRUE(s == TechnicalInequality::ineq2 || s == TechnicalInequality::both);
  const auto u = technical_inequality(1.5, -1, 1);
  EXPECT_TRUE(u == TechnicalInequality::ineq1 || u == TechnicalInequality::both);
}

TEST(TechnicalInequality, Parity) {
  for (auto [a, b] : {std::pair{2L, 1L}, {1L, 4L}, {-1L, -1L}, {-3L, 1L}}) {
    try {
      technical_inequality(1.0, a, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidParity);
    }
  }
}

TEST(TechnicalInequality, Totality) {
  for (int zi = 0; zi <= 40; ++zi) {
    const double z = 1.0 + 0.1 * zi;
    for (long a = -1; a <= 21; a += 2)
      for (long b = -1; b <= 21; b += 2) {
        if (a == -1 && b == -1) continue;
        EXPECT_NE(technical_inequality(z, a, b), TechnicalInequality::neither) << z << " " << a << " " << b;
      }
  }
}

TEST(OnsagerConditions, Examples) {
  EXPECT_TRUE(onsager_conditions(ChargeVector(std::vector<double>{1, 1, -1, -1, -1})));
  EXPECT_FALSE(onsager_conditions(ChargeVector(std::vector<double>{1, 1.6, -1, -1})));
  try {
    onsager_conditions(ChargeVector(std::vector<double>{10, 10, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingleSignCharges);
  }
  try {
    onsager_conditions(ChargeVector(std::vector<double>{1, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewParticles);
  }
}

TEST(OnsagerBetaMinus, Examples) {
  const auto a = onsager_beta_minus(ChargeVector(std::vector<double>{1, 1, -1, -1}));
  EXPECT_DOUBLE_EQ(a.beta_minus, -1.0);
  EXPECT_EQ(a.winning_side, CollapseSide::tie);
  EXPECT_EQ(critical_interval(from_charges(ChargeVector(std::vector<Rational>{1, 1, -1, -1}))).minus.kappa, 2);

  const auto b = onsager_beta_minus(ChargeVector(std::vector<double>{1, 1, 1, -1, -1, -1}));
  EXPECT_DOUBLE_EQ(b.candidate_pos, -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.candidate_neg, -2.0 / 3.0);
  EXPECT_EQ(b.winning_side, CollapseSide::tie);

  const auto c = onsager_beta_minus(ChargeVector(std::vector<double>{1.2, 1.2, 1.2, -1, -1, -1}));
  EXPECT_NEAR(c.candidate_pos, -2.0 / (3 * 1.44), 1e-12);
  EXPECT_EQ(c.winning_side, CollapseSide::positive_collapse);
  EXPECT_EQ(c.support, "p1=p2=p3");
  const auto r = critical_interval(from_charges(ChargeVector(std::vector<double>{1.2, 1.2, 1.2, -1, -1, -1})));
  EXPECT_NEAR(r.minus.beta, c.beta_minus, 1e-12);
}

TEST(OnsagerBetaMinus, SingleParticleClass) {
  const auto o = onsager_beta_minus(ChargeVector(std::vector<double>{1, 1, 1, -1}));
  EXPECT_TRUE(std::isinf(o.candidate_neg));
  EXPECT_EQ(o.winning_side, CollapseSide::positive_collapse);
}

TEST(OnsagerBetaMinus, ConditionsFail) {
  try {
    onsager_beta_minus(ChargeVector(std::vector<double>{1, 1.6, -1, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConditionsFail);
  }
}

TEST(Properties, TwoComponentAgreesWithSolver) {
  for (int n1 = 1; n1 <= 6; ++n1)
    for (int n2 = 1; n1 + n2 <= 12; ++n2)
      for (int z2 = 1; z2 <= 3; ++z2) {
        // Neutral: n1 z1 = n2 z2.
        const Rational z1 = Rational(n2 * z2, n1);
        const auto spec = TwoComponentSpec::make(n1, n2, z1, Rational(z2));
        const auto cf = two_component_critical(spec);
        const auto r = critical_interval(from_two_component(spec));
        EXPECT_EQ(*r.plus.beta_exact, *cf.beta_plus_exact);
        EXPECT_EQ(r.plus.kappa, cf.kappa_plus);
        EXPECT_EQ(r.plus.kappa, std::min(n1, n2));
        EXPECT_EQ(sorted(r.plus.opt.optimizers), sorted(cf.g_plus));
      }
}

TEST(Properties, OnsagerAgreesWithSolver) {
  CounterRng rng(401);
  for (int t = 0; t < 50; ++t) {
    const auto k = testgen::random_onsager_charges(rng, 3 + rng() % 10);
    ASSERT_TRUE(onsager_conditions(k));
    const auto o = onsager_beta_minus(k);
    const auto r = critical_interval(from_charges(k));
    EXPECT_NEAR(r.minus.beta, o.beta_minus, 1e-10);
    EXPECT_EQ(sorted(r.minus.opt.optimizers), sorted(o.predicted_g_minus));
  }
}

TEST(Properties, EqualChargeCollapse) {
  for (int n = 3; n <= 10; ++n) {
    const auto k = ChargeVector(std::vector<double>(n, std::sqrt(2.0 / (n - 1))));
    SolverOptions o;
    o.mode = ArithmeticMode::floating;
    const auto r = critical_interval(from_charges(k), o);
    EXPECT_NEAR(r.minus.beta, -1.0 + 1.0 / n, 1e-12);
    EXPECT_EQ(r.minus.kappa, 1);
    ASSERT_EQ(r.minus.opt.optimizers.size(), 1u);
    EXPECT_EQ(r.minus.opt.optimizers[0], SubsetMask::full(n));
  }
}
