#include <gtest/gtest.h>

#include "support.hpp"

using namespace loggas;

TEST(Arboricity, Examples) {
  const auto k4 = arboricity(GraphSpec::complete(4));
  EXPECT_EQ(k4.fractional, Rational(2));
  EXPECT_EQ(k4.arboricity, 2);

  const auto p4 = arboricity(GraphSpec::path(4));
  EXPECT_EQ(p4.fractional, Rational(1));
  EXPECT_EQ(p4.arboricity, 1);

  const auto c5 = arboricity(GraphSpec::cycle(5));
  EXPECT_EQ(c5.fractional, Rational(5, 4));
  EXPECT_EQ(c5.arboricity, 2);
  EXPECT_EQ(c5.witness, SubsetMask::full(5));
}

TEST(Arboricity, Edgeless) {
  try {
    arboricity(GraphSpec::make(3, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EdgelessGraph);
  }
}

TEST(ForestOracle, Examples) {
  EXPECT_EQ(forest_partition_oracle(GraphSpec::complete(4)), 2);
  EXPECT_EQ(forest_partition_oracle(GraphSpec::complete(5)), 3);
  EXPECT_EQ(forest_partition_oracle(GraphSpec::path(6)), 1);
  EXPECT_EQ(forest_partition_oracle(GraphSpec::petersen()), 2);
  EXPECT_THROW(forest_partition_oracle(GraphSpec::complete(11)), Error);
}

TEST(SkCheck, Examples) {
  EXPECT_TRUE(sk_ground_state_check(from_charges(ChargeVector(std::vector<Rational>{1, 1, -1, -1}))));
  EXPECT_TRUE(sk_ground_state_check(from_matrix(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}})));
}

TEST(Properties, NashWilliamsAgreement) {
  for (std::size_t n : {3u, 4u, 5u}) EXPECT_EQ(arboricity(GraphSpec::complete(n)).arboricity, forest_partition_oracle(GraphSpec::complete(n)));
  EXPECT_EQ(arboricity(GraphSpec::petersen()).arboricity, 2);
  CounterRng rng(501);
  for (int t = 0; t < 50; ++t) {
    const auto g = testgen::random_connected_graph(rng, 2 + rng() % 6, 0.5);
    EXPECT_EQ(arboricity(g).arboricity, forest_partition_oracle(g));
  }
  for (int t = 0; t < 10; ++t) {
    const auto tree = testgen::random_tree(rng, 2 + rng() % 9);
    EXPECT_EQ(arboricity(tree).arboricity, 1);
    EXPECT_EQ(forest_partition_oracle(tree), 1);
  }
}

TEST(Properties, CompleteGraphFractionalArboricity) {
  for (std::size_t n = 3; n <= 10; ++n) EXPECT_EQ(arboricity(GraphSpec::complete(n)).fractional, Rational(n, 2));
}

TEST(Properties, InducedSubgraphsSufficeForFractionalArboricity) {
  CounterRng rng(502);
  for (int t = 0; t < 40; ++t) {
    const auto g = testgen::random_connected_graph(rng, 2 + rng() % 5, 0.4);
    EXPECT_EQ(arboricity(g).fractional, fractional_arboricity_all_subgraphs(g));
  }
}

TEST(Properties, SkIdentityOnRandomInstances) {
  CounterRng rng(503);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 9;
    EXPECT_TRUE(sk_ground_state_check(testgen::random_rational_matrix(rng, n))) << t;
    SolverOptions o;
    o.mode = ArithmeticMode::floating;
    EXPECT_TRUE(sk_ground_state_check(testgen::random_float_matrix(rng, n), o)) << t;
  }
}
