#include <gtest/gtest.h>

#include <random>

#include "ctxrand/combinat.hpp"
#include "ctxrand/epsmodels.hpp"
#include "ctxrand/theta.hpp"
#include "oracles.hpp"

using namespace ctxrand;

TEST(Independence, FamilyGraphs) {
  EXPECT_EQ(weighted_independence_number(build_gd(3)).value, Rational(7));
  EXPECT_EQ(weighted_independence_number(build_odd_cycle(5)).value, Rational(2));
  for (int d = 3; d <= 12; ++d) EXPECT_EQ(weighted_independence_number(build_gd(d)).value, Rational(2 * d + 1));
  const WeightedGraph edgeless(3, {}, {Rational(1, 3), Rational(2), Rational(5, 7)});
  EXPECT_EQ(weighted_independence_number(edgeless).value, edgeless.total_weight());
  EXPECT_EQ(weighted_independence_number(WeightedGraph::unweighted(0, {})).value, Rational(0));
}

TEST(Independence, WitnessIsIndependentAndAttainsValue) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(rng, 3 + trial % 14, 0.3, true);
    const auto r = weighted_independence_number(g);
    Rational s(0);
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      s += g.weight(r.witness[i]);
      for (std::size_t j = i + 1; j < r.witness.size(); ++j) EXPECT_FALSE(g.adjacent(r.witness[i], r.witness[j]));
    }
    EXPECT_EQ(s, r.value);
    EXPECT_TRUE(std::is_sorted(r.witness.begin(), r.witness.end()));
  }
}

TEST(Independence, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + trial % 20;
    const double p = 0.1 + 0.8 * ((trial * 53) % 100) / 100.0;
    const auto g = oracle::random_graph(rng, n, p, trial % 2 == 0);
    ASSERT_EQ(weighted_independence_number(g).value, oracle::alpha(g)) << "trial " << trial << " n=" << n;
  }
}

TEST(FractionalPacking, PublishedValues) {
  EXPECT_NEAR(fractional_packing_number(build_gd(3)).value, 8.0, 1e-6);
  const auto g9 = fractional_packing_number(build_gd(9));
  EXPECT_NEAR(g9.value, 20.0, 1e-6);
  EXPECT_NEAR(fractional_packing_number(WeightedGraph::unweighted(2, {{0, 1}})).value, 1.0, 1e-7);
  EXPECT_NEAR(fractional_packing_number(build_odd_cycle(5)).value, 2.5, 1e-7);
  for (int d = 3; d <= 12; ++d) EXPECT_NEAR(fractional_packing_number(build_gd(d)).value, 2 * d + 2, 1e-6) << d;
}

TEST(FractionalPacking, AssignmentRespectsCliques) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = oracle::random_graph(rng, 4 + trial % 9, 0.45, true);
    const auto r = fractional_packing_number(g);
    ASSERT_EQ(static_cast<int>(r.assignment.size()), g.size());
    double obj = 0;
    const auto w = g.real_weights();
    for (int v = 0; v < g.size(); ++v) {
      EXPECT_GE(r.assignment[v], -1e-7);
      EXPECT_LE(r.assignment[v], 1 + 1e-7);
      obj += w[v] * r.assignment[v];
    }
    EXPECT_NEAR(obj, r.value, 1e-7);
    for (const auto& c : enumerate_maximal_cliques(g)) {
      double s = 0;
      for (int v : c.members) s += r.assignment[v];
      EXPECT_LE(s, 1 + 1e-7);
    }
  }
}

TEST(Sandwich, AlphaThetaPacking) {
  std::mt19937_64 rng(99);
  std::vector<WeightedGraph> graphs{build_gd(3), build_gd(4), build_odd_cycle(7), build_odd_cycle(9)};
  for (int i = 0; i < 12; ++i) graphs.push_back(oracle::random_graph(rng, 5 + i % 7, 0.4, true));
  for (const auto& g : graphs) {
    const double a = to_double(weighted_independence_number(g).value);
    const double t = lovasz_theta(g).value;
    const double s = fractional_packing_number(g).value;
    EXPECT_LE(a, t + 1e-6);
    EXPECT_LE(t, s + 1e-6);
  }
}

TEST(EpsilonIndependence, FullViewPreservesAlpha) {
  std::vector<WeightedGraph> graphs{build_gd(3)};
  for (int n = 5; n <= 11; n += 2) graphs.push_back(build_odd_cycle(n));
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 50; ++i) graphs.push_back(oracle::random_graph(rng, 2 + i % 11, 0.35 + 0.01 * i, i % 3 == 0));
  for (const auto& g : graphs) {
    const auto e = epsilon_expand(g, 0.3);
    const auto full = strict_and_full_views(e).second;
    EXPECT_EQ(weighted_independence_number(full).value, oracle::alpha(g));
  }
}

TEST(EpsilonIndependence, OddCycleValue) {
  for (int n : {5, 7, 9})
    for (double eps : {0.0, 0.1, 0.25, 0.5, 0.9}) {
      const auto r = epsilon_independence(epsilon_expand(build_odd_cycle(n), eps));
      EXPECT_EQ(r.alpha_strict, Rational(n, 2));
      EXPECT_EQ(r.alpha_full, Rational((n - 1) / 2));
      EXPECT_NEAR(r.value, (n - 1 + eps) / 2, 1e-15);
    }
}

TEST(EpsilonIndependence, QubitFanBound) {
  const auto fan = qubit_fan(3);
  EXPECT_NEAR(epsilon_independence_bound(fan_epsilon_graph(fan)), 2.25, 1e-12);
}

TEST(EpsilonIndependence, AffineAndIncreasingInEpsilon) {
  const auto g = build_gd(3);
  double prev = -1;
  for (double eps = 0.0; eps < 0.95; eps += 0.1) {
    const double b = epsilon_independence_bound(epsilon_expand(g, eps));
    EXPECT_GE(b, prev - 1e-12);
    prev = b;
  }
  const double b0 = epsilon_independence_bound(epsilon_expand(g, 0.0));
  const double b1 = epsilon_independence_bound(epsilon_expand(g, 0.4));
  const double b2 = epsilon_independence_bound(epsilon_expand(g, 0.8));
  EXPECT_NEAR(b2 - b1, b1 - b0, 1e-12);
  EXPECT_NEAR(b0, 7.0, 1e-12);
}
