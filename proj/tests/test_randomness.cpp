#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ctxrand/combinat.hpp"
#include "ctxrand/errors.hpp"
#include "ctxrand/npa.hpp"
#include "ctxrand/theta.hpp"

using namespace ctxrand;

namespace {

const ContextualityScenario& s3() {
  static const auto s = make_scenario(3);
  return s;
}

const MomentRelaxation& relax(NpaLevel level) {
  static const auto r1 = build_moment_relaxation(s3(), NpaLevel::one);
  static const auto rab = build_moment_relaxation(s3(), NpaLevel::one_ab);
  return level == NpaLevel::one ? r1 : rab;
}

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

// Value of a monomial under a deterministic classical strategy, computed
// directly from the letters.
double monomial_value(const Word& w, const std::vector<Vertex>& fired, int eve) {
  double v = 1;
  for (Vertex u : w.device) v *= std::count(fired.begin(), fired.end(), u) ? 1.0 : 0.0;
  if (w.eve != 0 && w.eve != eve) v = 0;
  return v;
}

}  // namespace

TEST(Scenario, Structure) {
  const auto& s = s3();
  EXPECT_EQ(s.graph, build_gd(3));
  EXPECT_EQ(s.contexts.size(), 16u);
  EXPECT_EQ(s.star_context.members.size(), 3u);
  EXPECT_EQ(s.eve_outcomes, 4);
  EXPECT_EQ(s.score_constant, 17.0);
  EXPECT_DOUBLE_EQ(s.score_from_expression(s.expression_from_score(7.3)), 7.3);
  EXPECT_EQ(parse_npa_level("1+AB"), NpaLevel::one_ab);
  EXPECT_EQ(to_string(NpaLevel::two), "2");
  EXPECT_THROW(parse_npa_level("3"), InvalidParameter);
}

TEST(Canonical, RewritingRules) {
  const auto& s = s3();
  const int a = gd_vertex(1, 2), b = gd_vertex(2, 2), c = gd_vertex(1, 3);
  const auto idem = canonicalize(s, Word{{a, a}, 0});
  EXPECT_FALSE(idem.zero);
  EXPECT_EQ(idem.word.device, std::vector<Vertex>{a});
  EXPECT_TRUE(canonicalize(s, Word{{a, c}, 0}).zero);
  EXPECT_EQ(canonicalize(s, Word{{b, a}, 2}).word, canonicalize(s, Word{{a, b}, 2}).word);
  EXPECT_EQ(canonicalize(s, Word{{a, b, b, a}, 1}).word.device, (std::vector<Vertex>{a, b, a}));
}

TEST(Relaxation, Sizes) {
  EXPECT_EQ(relax(NpaLevel::one).dim(), 19);
  EXPECT_EQ(relax(NpaLevel::one_ab).dim(), 64);
  const auto& r = relax(NpaLevel::one_ab);
  EXPECT_EQ(r.monomials[0], Word{});
  for (int i = 0; i < r.dim(); ++i)
    for (int j = 0; j < r.dim(); ++j) EXPECT_EQ(r.entry(i, j), r.entry(j, i));
}

TEST(Relaxation, DeterministicStrategyIsFeasible) {
  const auto& r = relax(NpaLevel::one_ab);
  const auto alpha = weighted_independence_number(s3().graph);
  const auto& star = s3().star_context.members;
  int fired_star = 0;
  for (int a = 0; a < 3; ++a)
    if (std::count(alpha.witness.begin(), alpha.witness.end(), star[a])) fired_star = a + 1;
  const int eve = fired_star ? fired_star : 4;
  const auto y = deterministic_moments(r, alpha.witness, eve);

  Eigen::VectorXd v(r.dim());
  for (int i = 0; i < r.dim(); ++i) v(i) = monomial_value(r.monomials[i], alpha.witness, eve);
  const Eigen::MatrixXd expected = v * v.transpose();
  EXPECT_LE((assemble_moment_matrix(r, y) - expected).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(min_eig(assemble_moment_matrix(r, y)), -1e-12);
  EXPECT_DOUBLE_EQ(evaluate_score(r, y), 7.0);
  EXPECT_DOUBLE_EQ(evaluate_objective(r, y), 1.0);
}

TEST(Guessing, ClassicalEndpointIsPredictable) {
  const auto g = guessing_probability(relax(NpaLevel::one_ab), 7.0);
  EXPECT_NEAR(g.p_guess, 1.0, 1e-5);
  EXPECT_NEAR(tradeoff_from(g).g(7.0), 1.0, 1e-5);
  EXPECT_GE(min_eig(g.moment_matrix), -1e-7);
  EXPECT_NEAR(evaluate_score(relax(NpaLevel::one_ab), g.moments), 7.0, 1e-6);
}

TEST(Guessing, BeyondThetaIsInfeasible) {
  const auto g = guessing_probability(relax(NpaLevel::one_ab), 7.9);
  EXPECT_TRUE(infeasible_detected(g.status));
  EXPECT_TRUE(std::isnan(g.p_guess));
}

TEST(Guessing, QuantumEndpointNearUniform) {
  const double theta = theta_gd_analytic(3);
  const auto g = guessing_probability(relax(NpaLevel::one_ab), theta - 1e-6);
  EXPECT_NEAR(g.p_guess, 1.0 / 3, 2e-2);
  EXPECT_GE(-std::log2(g.p_guess), 1.5);
}

TEST(Guessing, LevelsAreOrdered) {
  for (double w : {7.2, 7.5}) {
    const auto lo = guessing_probability(relax(NpaLevel::one), w);
    const auto hi = guessing_probability(relax(NpaLevel::one_ab), w);
    EXPECT_GE(lo.p_guess, hi.p_guess - 1e-6) << w;
  }
}

TEST(Guessing, CertificateBoundsTheValue) {
  for (double w : {7.1, 7.4, 7.6}) {
    const auto g = guessing_probability(relax(NpaLevel::one_ab), w);
    ASSERT_EQ(g.status, SolveStatus::optimal);
    EXPECT_GE(min_eig(g.certificate), -1e-7);
    EXPECT_GE(g.upper_bound, g.p_guess - 1e-7);
    EXPECT_NEAR(g.upper_bound, g.p_guess, 1e-6);
    EXPECT_NEAR(g.lambda0 * w + g.intercept, g.upper_bound, 1e-9);
    EXPECT_GT(g.p_guess, 1.0 / 3);
    EXPECT_LT(g.p_guess, 1.0);
  }
}

TEST(Tradeoff, FamilyDominatesAndTouches) {
  const auto& r = relax(NpaLevel::one_ab);
  const double lo = 7.0, hi = theta_gd_analytic(3) - 1e-6;
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(lo + (hi - lo) * i / 19);
  const auto curve = min_entropy_curve(r, grid);
  ASSERT_EQ(curve.size(), 20u);
  EXPECT_NEAR(curve.front().h_min, 0.0, 1e-5);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].h_min, curve[i - 1].h_min - 1e-6);

  const std::vector<double> anchors{7.0, 7.3, 7.6, 7.67};
  const auto family = min_tradeoff_family(r, anchors);
  ASSERT_EQ(family.size(), anchors.size());
  for (const auto& f : family) {
    for (const auto& p : curve) EXPECT_GE(f.g(p.omega), p.p_guess - 1e-6) << f.anchor << " at " << p.omega;
    EXPECT_NEAR(f.g(f.anchor), guessing_probability(r, f.anchor).p_guess, 1e-5);
  }
  EXPECT_NEAR(family[0].f(7.0), 0.0, 1e-5);
}

TEST(Tradeoff, ParallelCurveMatchesSerial) {
  const auto& r = relax(NpaLevel::one_ab);
  const std::vector<double> grid{7.1, 7.35, 7.55};
  const auto a = min_entropy_curve(r, grid, 1);
  const auto b = min_entropy_curve(r, grid, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(a[i].p_guess, b[i].p_guess);
}
