#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "support.hpp"

using namespace loggas;
using testgen::sorted;

namespace {

CouplingMatrix charges(std::vector<Rational> k) { return from_charges(ChargeVector(std::move(k))); }

std::vector<SubsetMask> masks(std::initializer_list<std::initializer_list<std::size_t>> sets) {
  std::vector<SubsetMask> out;
  for (auto s : sets) out.push_back(SubsetMask::of(s));
  return sorted(out);
}

SolverOptions float_opts() {
  SolverOptions o;
  o.mode = ArithmeticMode::floating;
  return o;
}

/// Image of a family under relabeling: with particle i of the relabeled system
/// equal to particle perm[i] of the original, original j moves to inv[j].
std::vector<SubsetMask> permute_family(const std::vector<SubsetMask>& f, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  std::vector<SubsetMask> out;
  for (auto s : f) {
    std::uint32_t b = 0;
    for (auto j : s.members()) b |= 1u << inv[j];
    out.push_back(SubsetMask(b));
  }
  return sorted(out);
}

}  // namespace

// Spec-level examples ---------------------------------------------------------

TEST(SubsetSum, Examples) {
  EXPECT_EQ(subset_sum(charges({1, 1, -1, -1}), SubsetMask::full(4)), -2.0);
  EXPECT_EQ(subset_sum(charges({10, 10, 1}), SubsetMask::full(3)), 120.0);
  EXPECT_EQ(subset_sum_exact(charges({10, 10, 1}), SubsetMask::full(3)), Rational(120));
  const auto c = charges({3, -2, 5});
  EXPECT_EQ(subset_sum(c, SubsetMask::of({0, 2})), c(0, 2));
}

TEST(SubsetSum, RejectsSmallOrOutOfRange) {
  const auto c = charges({1, 1, -1});
  EXPECT_THROW(subset_sum(c, SubsetMask::of({0})), Error);
  EXPECT_THROW(subset_sum(c, SubsetMask::of({0, 5})), Error);
}

TEST(SubsetConstraint, Examples) {
  const auto pair = from_matrix(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}});
  const auto k = subset_constraint(pair, SubsetMask::full(2));
  EXPECT_EQ(k.kind, SubsetConstraint::Kind::lower);
  EXPECT_EQ(*k.bound_exact, Rational(-1));
  EXPECT_TRUE(k.admits(-0.99));
  EXPECT_FALSE(k.admits(-1.0));

  const auto zero = from_matrix(std::vector<std::vector<Rational>>{{0, 1, -1}, {1, 0, 0}, {-1, 0, 0}});
  EXPECT_EQ(subset_constraint(zero, SubsetMask::full(3)).kind, SubsetConstraint::Kind::none);

  const auto tri = from_matrix(std::vector<std::vector<Rational>>{{0, 2, 3}, {2, 0, 5}, {3, 5, 0}});
  const auto t = subset_constraint(tri, SubsetMask::full(3));
  EXPECT_EQ(t.kind, SubsetConstraint::Kind::lower);
  EXPECT_EQ(*t.bound_exact, Rational(-2, 10));
}

TEST(SolveTPlus, Dipoles) {
  const auto r = solve_t_plus(charges({1, 1, -1, -1}));
  EXPECT_EQ(*r.t_exact, Rational(1));
  EXPECT_TRUE(r.attained);
  EXPECT_EQ(sorted(r.optimizers), masks({{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
}

TEST(SolveTPlus, PairAndZero) {
  const auto pair = from_matrix(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}});
  const auto r = solve_t_plus(pair);
  EXPECT_EQ(*r.t_exact, Rational(-1));
  EXPECT_FALSE(r.attained);

  const auto zero = from_matrix(std::vector<std::vector<Rational>>(4, std::vector<Rational>(4, 0)));
  const auto z = solve_t_plus(zero);
  EXPECT_EQ(*z.t_exact, Rational(0));
  EXPECT_FALSE(z.attained);
  EXPECT_TRUE(z.optimizers.empty());
  EXPECT_EQ(solve_t_plus(zero.as_float(), float_opts()).t_value, 0.0);
}

TEST(SolveTMinus, ExampleA10) {
  const auto r = solve_t_minus(charges({10, 10, 1}));
  EXPECT_EQ(*r.t_exact, Rational(-100));
  EXPECT_EQ(r.optimizers, masks({{0, 1}}));
}

TEST(SolveTMinus, EqualChargesCollapse) {
  const double k = std::sqrt(2.0 / 3.0);
  const auto c = from_charges(ChargeVector(std::vector<double>(4, k)));
  const auto r = solve_t_minus(c, float_opts());
  EXPECT_NEAR(r.t_value, -4.0 / 3.0, 1e-12);
  EXPECT_EQ(r.optimizers, masks({{0, 1, 2, 3}}));
}

TEST(CriticalInterval, Examples) {
  const auto pair = from_matrix(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}});
  const auto p = critical_interval(pair);
  EXPECT_EQ(p.minus.beta, -1.0);
  EXPECT_TRUE(std::isinf(p.plus.beta) && p.plus.beta > 0);
  EXPECT_EQ(p.plus.kappa, 0);

  const auto plasma = critical_interval(from_two_component(TwoComponentSpec::make(2, 2, Rational(1), Rational(1))));
  EXPECT_EQ(*plasma.plus.beta_exact, Rational(1));
  EXPECT_EQ(plasma.plus.kappa, 2);
  EXPECT_EQ(plasma.plus.max_nests.size(), 2u);

  const auto a10 = critical_interval(charges({10, 10, 1}));
  EXPECT_EQ(*a10.minus.beta_exact, Rational(-1, 100));
  EXPECT_EQ(a10.minus.kappa, 1);
}

TEST(CriticalInterval, DegenerateWhenAllZero) {
  const auto zero = from_matrix(std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, 0)));
  const auto r = critical_interval(zero);
  EXPECT_TRUE(r.degenerate());
  EXPECT_EQ(r.plus.kappa, 0);
  EXPECT_EQ(r.minus.kappa, 0);
  EXPECT_TRUE(r.plus.support.rendered.empty());
}

TEST(LimitSupport, Examples) {
  const auto plasma = critical_interval(from_two_component(TwoComponentSpec::make(2, 2, Rational(1), Rational(1))));
  EXPECT_EQ(plasma.plus.support.joined(), "p1=p3, p2=p4 U p1=p4, p2=p3");

  const double k = std::sqrt(2.0 / 4.0);
  const auto eq = critical_interval(from_charges(ChargeVector(std::vector<double>(5, k))));
  EXPECT_EQ(eq.minus.support.joined(), "p1=p2=p3=p4=p5");

  EXPECT_EQ(critical_interval(charges({10, 10, 1})).minus.support.joined(), "p1=p2");
}

TEST(LimitSupport, InfiniteSideThrows) {
  const auto pair = from_matrix(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}});
  const auto r = solve_t_plus(pair);
  EXPECT_THROW(limit_support(r, NestSearchResult{}), Error);
}

TEST(Oracle, Examples) {
  const auto pair = from_matrix(std::vector<std::vector<Rational>>{{0, 3}, {3, 0}});
  const auto o = brute_force_oracle(pair);
  EXPECT_EQ(*o.t_plus_exact, Rational(-3));
  EXPECT_EQ(*o.t_minus_exact, Rational(-3));

  const auto tri = from_matrix(std::vector<std::vector<Rational>>{{0, 2, 3}, {2, 0, 5}, {3, 5, 0}});
  const Rational expected = std::max({Rational(-2, 10), Rational(-1, 2), Rational(-1, 5), Rational(-1, 3)});
  EXPECT_EQ(Rational(1) / *brute_force_oracle(tri).t_minus_exact, expected);
}

TEST(Solver, SizeLimits) {
  CounterRng rng(5);
  const auto big = testgen::random_float_matrix(rng, 27);
  try {
    solve_t_plus(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InstanceTooLarge);
  }
  SolverOptions o;
  o.mode = ArithmeticMode::exact;
  EXPECT_THROW(solve_t_plus(big.scaled(1.0).as_float(), o), Error);
}

// Properties -------------------------------------------------------------------

TEST(Properties, OracleEquivalenceExact) {
  CounterRng rng(101);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 3 + rng() % 10;
    const auto c = (t % 2) ? testgen::random_integer_matrix(rng, n, 3) : testgen::random_rational_matrix(rng, n);
    const auto o = brute_force_oracle(c);
    const auto p = solve_t_plus(c), m = solve_t_minus(c);
    ASSERT_EQ(*p.t_exact, *o.t_plus_exact) << "trial " << t;
    ASSERT_EQ(*m.t_exact, *o.t_minus_exact) << "trial " << t;
    ASSERT_EQ(sorted(p.optimizers), sorted(o.g_plus)) << "trial " << t;
    ASSERT_EQ(sorted(m.optimizers), sorted(o.g_minus)) << "trial " << t;
  }
}

TEST(Properties, OracleEquivalenceFloat) {
  CounterRng rng(102);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 3 + rng() % 12;
    // Half the trials use integer-valued floats so that float ties actually occur.
    const auto c = (t % 2) ? testgen::random_integer_matrix(rng, n, 2).as_float() : testgen::random_float_matrix(rng, n);
    const auto o = brute_force_oracle(c, true);
    const auto p = solve_t_plus(c, float_opts()), m = solve_t_minus(c, float_opts());
    ASSERT_NEAR(p.t_value, o.t_plus, 1e-9 * std::max(1.0, std::abs(o.t_plus)));
    ASSERT_NEAR(m.t_value, o.t_minus, 1e-9 * std::max(1.0, std::abs(o.t_minus)));
    ASSERT_EQ(sorted(p.optimizers), sorted(o.g_plus)) << "trial " << t;
    ASSERT_EQ(sorted(m.optimizers), sorted(o.g_minus)) << "trial " << t;
  }
}

TEST(Properties, ExactAndFloatAgreeOnIntegerInputs) {
  CounterRng rng(103);
  for (int t = 0; t < 60; ++t) {
    const auto c = testgen::random_integer_matrix(rng, 3 + rng() % 10, 4);
    const auto e = critical_interval(c);
    const auto f = critical_interval(c.as_float(), float_opts());
    // Exact beta is rounded once from a rational; float beta is 1/T in doubles.
    EXPECT_DOUBLE_EQ(e.plus.beta, f.plus.beta);
    EXPECT_DOUBLE_EQ(e.minus.beta, f.minus.beta);
    EXPECT_EQ(sorted(e.plus.opt.optimizers), sorted(f.plus.opt.optimizers));
    EXPECT_EQ(e.plus.kappa, f.plus.kappa);
    EXPECT_EQ(e.minus.kappa, f.minus.kappa);
  }
}

TEST(Properties, ScalingCovariance) {
  CounterRng rng(104);
  for (int t = 0; t < 60; ++t) {
    const auto c = testgen::random_rational_matrix(rng, 3 + rng() % 8);
    const Rational s(testgen::uniform_int(rng, 1, 9), testgen::uniform_int(rng, 1, 9));
    const auto a = critical_interval(c), b = critical_interval(c.scaled(s));
    EXPECT_EQ(*b.plus.opt.t_exact, *a.plus.opt.t_exact * s);
    EXPECT_EQ(*b.minus.opt.t_exact, *a.minus.opt.t_exact * s);
    if (a.plus.finite) { EXPECT_EQ(*b.plus.beta_exact, *a.plus.beta_exact / s); }
    if (a.minus.finite) { EXPECT_EQ(*b.minus.beta_exact, *a.minus.beta_exact / s); }
    EXPECT_EQ(sorted(a.plus.opt.optimizers), sorted(b.plus.opt.optimizers));
    EXPECT_EQ(sorted(a.minus.opt.optimizers), sorted(b.minus.opt.optimizers));
    EXPECT_EQ(a.plus.kappa, b.plus.kappa);
    EXPECT_EQ(a.minus.kappa, b.minus.kappa);
    EXPECT_EQ(a.plus.max_nests, b.plus.max_nests);
    EXPECT_EQ(a.minus.max_nests, b.minus.max_nests);
  }
}

TEST(Properties, NegationDuality) {
  CounterRng rng(105);
  for (int t = 0; t < 60; ++t) {
    const auto c = testgen::random_rational_matrix(rng, 3 + rng() % 8);
    const auto a = critical_interval(c), b = critical_interval(c.negated());
    EXPECT_EQ(*b.plus.opt.t_exact, -*a.minus.opt.t_exact);
    EXPECT_EQ(sorted(b.plus.opt.optimizers), sorted(a.minus.opt.optimizers));
    if (a.minus.finite) { EXPECT_EQ(*b.plus.beta_exact, -*a.minus.beta_exact); }
    EXPECT_EQ(b.plus.finite, a.minus.finite);
  }
}

TEST(Properties, PermutationEquivariance) {
  CounterRng rng(106);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng() % 8;
    const auto c = testgen::random_rational_matrix(rng, n);
    const auto perm = testgen::random_permutation(rng, n);
    const auto a = critical_interval(c), b = critical_interval(c.permuted(perm));
    EXPECT_EQ(*a.plus.opt.t_exact, *b.plus.opt.t_exact);
    EXPECT_EQ(*a.minus.opt.t_exact, *b.minus.opt.t_exact);
    EXPECT_EQ(permute_family(a.plus.opt.optimizers, perm), sorted(b.plus.opt.optimizers));
    EXPECT_EQ(permute_family(a.minus.opt.optimizers, perm), sorted(b.minus.opt.optimizers));
    EXPECT_EQ(a.plus.kappa, b.plus.kappa);
    EXPECT_EQ(a.minus.kappa, b.minus.kappa);
  }
}

TEST(Properties, IntervalCorrectnessExhaustive) {
  CounterRng rng(107);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 2 + rng() % 11;
    const auto c = testgen::random_float_matrix(rng, n);
    const auto r = critical_interval(c, float_opts());
    auto admissible = [&](double beta) {
      for (std::uint32_t m = 0; m < (1u << n); ++m) {
        const SubsetMask s(m);
        if (s.size() < 2) continue;
        if (!(beta * subset_sum(c, s) + (s.size() - 1) > 0.0)) return false;
      }
      return true;
    };
    const double lo = std::isfinite(r.minus.beta) ? r.minus.beta : -50.0;
    const double hi = std::isfinite(r.plus.beta) ? r.plus.beta : 50.0;
    for (int k = 1; k <= 10; ++k) EXPECT_TRUE(admissible(lo + (hi - lo) * k / 11.0));
    if (r.plus.finite) { EXPECT_FALSE(admissible(r.plus.beta + 1e-6)); }
    if (r.minus.finite) { EXPECT_FALSE(admissible(r.minus.beta - 1e-6)); }
  }
}

TEST(Properties, KappaAndSignBounds) {
  CounterRng rng(108);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng() % 11;
    const auto c = testgen::random_rational_matrix(rng, n);
    const auto r = critical_interval(c);
    EXPECT_LT(r.minus.beta, 0.0);
    EXPECT_GT(r.plus.beta, 0.0);
    for (const CriticalSide* s : {&r.plus, &r.minus}) {
      ASSERT_TRUE(s->kappa.has_value());
      EXPECT_LE(*s->kappa, static_cast<int>(n) - 1);
      if (s->finite) {
        EXPECT_GE(*s->kappa, 1);
        EXPECT_FALSE(s->opt.optimizers.empty());
        for (const auto& nest : s->max_nests) {
          EXPECT_EQ(static_cast<int>(nest.size()), *s->kappa);
          EXPECT_TRUE(nest.is_laminar());
        }
        EXPECT_EQ(s->support.rendered.size(), s->max_nests.size());
      }
    }
  }
}

TEST(Properties, ThreadCountDoesNotChangeResults) {
  CounterRng rng(109);
  const auto c = testgen::random_float_matrix(rng, 18);
  SolverOptions one = float_opts(), many = float_opts();
  one.threads = 1;
  many.threads = 4;
  const auto a = critical_interval(c, one), b = critical_interval(c, many);
  EXPECT_EQ(a.plus.opt.t_value, b.plus.opt.t_value);
  EXPECT_EQ(a.minus.opt.t_value, b.minus.opt.t_value);
  EXPECT_EQ(a.plus.opt.optimizers, b.plus.opt.optimizers);
  EXPECT_EQ(a.minus.opt.optimizers, b.minus.opt.optimizers);
}

TEST(Properties, TieToleranceGroupsNearTies) {
  // Two pairs whose ratios differ by 1e-12 tie under the default tolerance only.
  const auto c = from_matrix(std::vector<std::vector<double>>{
      {0, -1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1 - 1e-12}, {0, 0, -1 - 1e-12, 0}});
  auto o = float_opts();
  EXPECT_EQ(solve_t_plus(c, o).optimizers.size(), 2u);
  o.tie_tolerance = 1e-14;
  EXPECT_EQ(solve_t_plus(c, o).optimizers.size(), 1u);
}
