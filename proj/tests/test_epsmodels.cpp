#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ctxrand/combinat.hpp"
#include "ctxrand/epsmodels.hpp"
#include "ctxrand/errors.hpp"
#include "ctxrand/theta.hpp"

using namespace ctxrand;
using std::numbers::pi;

namespace {

// Midpoint quadrature over the sphere of `density * indicator`, in polar
// coordinates about the z axis.
template <class F>
double sphere_integral(F f, int nt = 1200, int np = 1200) {
  double s = 0;
  for (int i = 0; i < nt; ++i) {
    const double t = pi * (i + 0.5) / nt;
    for (int j = 0; j < np; ++j) {
      const double p = 2 * pi * (j + 0.5) / np;
      s += f(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)) * std::sin(t);
    }
  }
  return s * (pi / nt) * (2 * pi / np);
}

}  // namespace

TEST(QubitFan, Construction) {
  EXPECT_NEAR(qubit_fan(2).epsilon, 0.5, 1e-15);
  EXPECT_NEAR(qubit_fan(3).epsilon, 0.25, 1e-15);
  EXPECT_EQ(qubit_fan(2).v0.size(), 2u);
  EXPECT_THROW(qubit_fan(1), DomainError);
  for (int n = 2; n <= 50; ++n) {
    const auto f = qubit_fan(n);
    Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
    for (int k = 0; k < n; ++k) {
      EXPECT_EQ(f.v0[k].dot(f.v1[k]), 0.0);
      EXPECT_NEAR(f.v0[k].norm(), 1.0, 1e-15);
      sum += f.v0[k] * f.v0[k].transpose() + f.v1[k] * f.v1[k].transpose();
      if (k + 1 < n) {
        EXPECT_NEAR(std::pow(f.v0[k].dot(f.v1[k + 1]), 2), f.epsilon, 1e-12);
        EXPECT_NEAR(std::pow(f.v1[k].dot(f.v0[k + 1]), 2), f.epsilon, 1e-12);
      }
    }
    EXPECT_NEAR(std::pow(f.v0[n - 1].dot(f.v0[0]), 2), f.epsilon, 1e-12);
    EXPECT_NEAR(std::pow(f.v1[n - 1].dot(f.v1[0]), 2), f.epsilon, 1e-12);
    EXPECT_LE((sum - n * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(QubitFan, EpsilonGraphMatchesOverlaps) {
  for (int n = 2; n <= 12; ++n) {
    const auto f = qubit_fan(n);
    const auto g = fan_epsilon_graph(f);
    EXPECT_EQ(g.size(), 2 * n);
    EXPECT_EQ(static_cast<int>(g.strict_edges().size()), n);
    EXPECT_EQ(static_cast<int>(g.eps_edges().size()), 2 * n);
    auto vec = [&](int id) { return id % 2 == 0 ? f.v0[id / 2] : f.v1[id / 2]; };
    for (const auto& [u, v] : g.strict_edges()) EXPECT_NEAR(vec(u).dot(vec(v)), 0.0, 1e-15);
    for (const auto& [u, v] : g.eps_edges()) EXPECT_NEAR(std::pow(vec(u).dot(vec(v)), 2), f.epsilon, 1e-12);
  }
}

TEST(QubitGap, Values) {
  const auto g3 = qubit_contextuality_gap(3);
  EXPECT_NEAR(g3.quantum_value, 3, 1e-12);
  EXPECT_NEAR(g3.eps_onc_bound, 2.25, 1e-12);
  EXPECT_TRUE(g3.eps_below_half);
  const auto g2 = qubit_contextuality_gap(2);
  EXPECT_NEAR(g2.eps_onc_bound, 1.5, 1e-12);
  EXPECT_FALSE(g2.eps_below_half);
  const auto g10 = qubit_contextuality_gap(10);
  EXPECT_NEAR(g10.eps_onc_bound, 9 + std::pow(std::sin(pi / 20), 2), 1e-12);
  for (int n = 3; n <= 50; ++n) {
    const auto q = qubit_contextuality_gap(n);
    EXPECT_LE(q.completeness_error, 1e-12);
    EXPECT_NEAR(q.quantum_value - q.eps_onc_bound, 1 - q.epsilon, 1e-12);
    EXPECT_GT(q.quantum_value, q.eps_onc_bound);
    EXPECT_NEAR(q.eps_onc_bound, epsilon_independence_bound(fan_epsilon_graph(qubit_fan(n))), 1e-12);
  }
}

TEST(OddCycles, Thresholds) {
  EXPECT_NEAR(odd_cycle_threshold(5), 0.47214, 1e-5);
  EXPECT_EQ(odd_cycle_threshold(3), 0.0);
  EXPECT_EQ(min_admissible_cycle(0.9), 25);
  EXPECT_GE(odd_cycle_threshold(25), 0.9);
  for (int n = 5; n <= 41; n += 2) {
    const double t = odd_cycle_threshold(n);
    EXPECT_NEAR(theta_odd_cycle_closed(n), odd_cycle_eps_alpha(n, t), 1e-10);
    for (double f : {0.0, 0.3, 0.9, 0.999}) EXPECT_GT(theta_odd_cycle_closed(n), odd_cycle_eps_alpha(n, f * t));
  }
  EXPECT_THROW(odd_cycle_threshold(4), InvalidParameter);
  EXPECT_THROW(min_admissible_cycle(1.0), InvalidParameter);
}

TEST(OddCycles, AdmissibleLengthsBeatClassical) {
  // (eps, n) pairs meeting n >= ceil(pi^2 / (4 (1 - eps))).
  const std::pair<double, int> pairs[] = {{0.1, 5}, {0.3, 5}, {0.5, 7}, {0.7, 9}, {0.9, 25}};
  for (const auto& [eps, n] : pairs) {
    EXPECT_GE(n, std::ceil(pi * pi / (4 * (1 - eps))));
    EXPECT_GE(odd_cycle_threshold(n), eps);
    EXPECT_GT(theta_odd_cycle_closed(n), odd_cycle_eps_alpha(n, eps)) << eps;
  }
  EXPECT_EQ(min_admissible_cycle(0.7), 9);
}

TEST(OddCycles, LengthBoundAloneIsNotSufficientForShortCycles) {
  // tan x > x, so the length bound overestimates the threshold; at the
  // smallest admissible length the quantum value can still lose.
  EXPECT_EQ(min_admissible_cycle(0.5), 5);
  EXPECT_LT(theta_odd_cycle_closed(5), odd_cycle_eps_alpha(5, 0.5));
  EXPECT_GT(theta_odd_cycle_closed(7), odd_cycle_eps_alpha(7, 0.5));
  EXPECT_EQ(min_admissible_cycle(0.1), 3);
  EXPECT_LT(theta_odd_cycle_closed(3), odd_cycle_eps_alpha(3, 0.1));
}

TEST(HvModels, ClosedForms) {
  const auto k = ks_model_agreement(pi / 3);
  EXPECT_NEAR(k.model_prob, 0.375, 1e-15);
  EXPECT_NEAR(k.overlap, 0.25, 1e-15);
  const auto small = ks_model_agreement(0.01);
  EXPECT_NEAR(small.model_prob / small.overlap, 2.0, 1e-3);
  const auto edge = ks_model_agreement(pi / 2);
  EXPECT_NEAR(edge.model_prob, 0.5, 1e-15);
  EXPECT_NEAR(edge.overlap, 0.5, 1e-15);

  const auto b = bell_mermin_agreement(pi / 6);
  EXPECT_NEAR(b.model_prob, 0.5, 1e-15);
  EXPECT_NEAR(b.overlap, 0.25, 1e-15);
  const auto b1 = bell_mermin_agreement(pi / 2);
  EXPECT_NEAR(b1.model_prob, 1, 1e-15);
  EXPECT_NEAR(b1.overlap, 1, 1e-15);
  const auto b2 = bell_mermin_agreement(0.1);
  EXPECT_NEAR(b2.model_prob, 0.0998, 1e-4);
  EXPECT_NEAR(b2.overlap, 0.00997, 1e-5);

  for (int i = 1; i <= 100; ++i) {
    const double t = pi / 2 * i / 101;
    const auto ks = ks_model_agreement(t);
    const auto bm = bell_mermin_agreement(t);
    const double c = std::cos(t);
    EXPECT_NEAR(ks.model_prob - ks.overlap, (c - c * c) / 2, 1e-15);
    EXPECT_GT(ks.model_prob, ks.overlap);
    EXPECT_GT(bm.model_prob, bm.overlap);
  }
  EXPECT_THROW(ks_model_agreement(0.0), DomainError);
  EXPECT_THROW(bell_mermin_agreement(2.0), DomainError);
}

TEST(HvModels, ClosedFormsMatchSphereQuadrature) {
  for (double t : {0.3, pi / 6, pi / 3, 1.3}) {
    const double s = std::sin(t), c = std::cos(t);
    const double ks = sphere_integral([&](double x, double, double z) {
      return (z > 0 && z < s && x > 0) ? z / pi : 0.0;
    });
    EXPECT_NEAR(ks, ks_model_agreement(t).model_prob, 1e-3) << t;
    const double bm = sphere_integral([&](double x, double, double z) {
      return (c * x + s * (1 + z) > 0 && -c * x + s * (1 + z) > 0) ? 1.0 / (4 * pi) : 0.0;
    });
    EXPECT_NEAR(bm, bell_mermin_agreement(t).model_prob, 1e-3) << t;
  }
}

TEST(HvModels, MonteCarlo) {
  const auto k = monte_carlo_hv_check(HvModel::ks, pi / 3, 1000000, 17);
  EXPECT_NEAR(k.estimate, 0.375, 4 * k.std_error);
  const auto b = monte_carlo_hv_check(HvModel::bell_mermin, pi / 6, 1000000, 18);
  EXPECT_NEAR(b.estimate, 0.5, 4 * b.std_error);
  EXPECT_EQ(b.samples, 1000000);
  EXPECT_THROW(monte_carlo_hv_check(HvModel::bell_mermin, 0.5, 0, 1), InvalidParameter);
}

TEST(HvModels, MonteCarloIsReproducibleAcrossJobCounts) {
  const auto a = monte_carlo_hv_check(HvModel::ks, 0.7, 300000, 99, 1);
  const auto b = monte_carlo_hv_check(HvModel::ks, 0.7, 300000, 99, 3);
  const auto c = monte_carlo_hv_check(HvModel::ks, 0.7, 300000, 100, 1);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_NE(a.estimate, c.estimate);
}
