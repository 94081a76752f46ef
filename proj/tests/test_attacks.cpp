#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "ctxrand/attacks.hpp"
#include "ctxrand/errors.hpp"

using namespace ctxrand;

namespace {

bool all_degrees(const WeightedGraph& g, int d) {
  for (int v = 0; v < g.size(); ++v)
    if (g.degree(v) != d) return false;
  return true;
}

std::pair<ArrangementCase, ArrangementCase> bases() { return base_realizations(); }

}  // namespace

TEST(BaseRealizations, VerifyExactly) {
  const auto [k22, k3] = bases();
  EXPECT_TRUE(verify_nd_realization(k22.arrangement, k22.realization).ok);
  EXPECT_TRUE(verify_nd_realization(k3.arrangement, k3.realization).ok);
  EXPECT_TRUE(is_magic(k22.arrangement));
  EXPECT_TRUE(is_magic(k3.arrangement));
  // K3 with f3 = {u2,u3}: u1 reads -1 with probability 1/2 in every context.
  EXPECT_EQ(minus_marginal(k3.arrangement, k3.realization, 0, 0), Rational(1, 2));
  EXPECT_EQ(minus_marginal(k3.arrangement, k3.realization, 1, 0), Rational(1, 2));
}

TEST(BaseRealizations, IntersectionGraphs) {
  const auto [k22, k3] = bases();
  const auto c4 = intersection_graph(k22.arrangement);
  EXPECT_EQ(c4.size(), 4);
  EXPECT_EQ(c4.edges().size(), 4u);
  EXPECT_TRUE(all_degrees(c4, 2));
  EXPECT_FALSE(c4.adjacent(0, 1));  // e1, e2 are disjoint
  const auto tri = intersection_graph(k3.arrangement);
  EXPECT_EQ(tri.edges().size(), 3u);
  EXPECT_TRUE(all_degrees(tri, 2));

  const auto k33 = intersection_graph(magic_square());
  EXPECT_EQ(k33.size(), 6);
  EXPECT_EQ(k33.edges().size(), 9u);
  for (int r = 0; r < 3; ++r) {
    EXPECT_FALSE(k33.adjacent(r, (r + 1) % 3));
    EXPECT_FALSE(k33.adjacent(3 + r, 3 + (r + 1) % 3));
    for (int c = 0; c < 3; ++c) EXPECT_TRUE(k33.adjacent(r, 3 + c));
  }
  const auto k5 = intersection_graph(magic_pentagram());
  EXPECT_EQ(k5.size(), 5);
  EXPECT_EQ(k5.edges().size(), 10u);
  EXPECT_TRUE(all_degrees(k5, 4));
}

TEST(BaseRealizations, MagicTargets) {
  EXPECT_TRUE(is_magic(magic_square()));
  EXPECT_TRUE(is_magic(magic_pentagram()));
  auto even = magic_square();
  even.labels[0] = -1;
  EXPECT_FALSE(is_magic(even));
  EXPECT_EQ(parse_magic_target("square"), MagicTarget::magic_square);
  EXPECT_EQ(parse_magic_target("pentagram"), MagicTarget::pentagram);
  EXPECT_THROW(parse_magic_target("cube"), InvalidParameter);
}

TEST(Verification, ReportsViolations) {
  auto [k22, k3] = bases();
  auto r = k22.realization;
  r.tables[0][0] -= Rational(1, 4);
  r.tables[0][3] += Rational(1, 4);
  auto rep = verify_nd_realization(k22.arrangement, r);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.violation.empty());

  r = k3.realization;
  r.tables[2][1] = Rational(1);
  r.tables[2][2] = Rational(0);
  EXPECT_FALSE(verify_nd_realization(k3.arrangement, r).ok);  // marginal mismatch

  r = k3.realization;
  r.tables[0][0] = Rational(3, 4);
  r.tables[0][3] = Rational(1, 4);
  r.tables[0][1] = Rational(1, 4);
  r.tables[0][2] = Rational(-1, 4);
  EXPECT_FALSE(verify_nd_realization(k3.arrangement, r).ok);  // negative, wrong parity

  r.tables.pop_back();
  EXPECT_THROW(verify_nd_realization(k3.arrangement, r), InvalidParameter);
}

TEST(Flips, PreserveValidityAndParity) {
  const auto [k22, k3] = bases();
  for (const auto& base : {k22, k3}) {
    const int m = static_cast<int>(base.arrangement.hyperedges.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const auto flipped = flip_labels_along_path(base.arrangement, base.realization, {i, j});
        EXPECT_EQ(flipped.arrangement.labels[i], -base.arrangement.labels[i]);
        EXPECT_EQ(flipped.arrangement.labels[j], -base.arrangement.labels[j]);
        EXPECT_TRUE(verify_nd_realization(flipped.arrangement, flipped.realization).ok);
        EXPECT_TRUE(is_magic(flipped.arrangement));
        const auto back = flip_labels_along_path(flipped.arrangement, flipped.realization, {i, j});
        EXPECT_EQ(back.arrangement.labels, base.arrangement.labels);
        EXPECT_EQ(back.realization.tables, base.realization.tables);
      }
  }
  // Move the -1 label of K_{2,2} from e4 to e1.
  const auto moved = flip_labels_along_path(k22.arrangement, k22.realization, {0, 3});
  EXPECT_EQ(moved.arrangement.labels, (std::vector<int>{-1, 1, 1, 1}));
}

TEST(Lift, IdentityEmbedding) {
  const auto [k22, k3] = bases();
  MinorEmbedding emb{{0, 1, 2}, {{0}, {1}, {2}}};
  const auto r = lift_realization(k3, k3.arrangement, emb);
  EXPECT_EQ(r.tables, k3.realization.tables);
}

TEST(Lift, TriangleIntoMagicSquare) {
  const auto [k22, k3] = bases();
  const auto square = magic_square();
  // f1 -> R0, f2 -> C0, f3 -> R1; u1 = f1 & f2 -> cell 0, u3 = f2 & f3 -> cell 3,
  // u2 = f1 & f3 runs R0 -> C2 -> R1 through cells 2 and 5.
  MinorEmbedding emb{{0, 3, 1}, {{0}, {2, 5}, {3}}};
  EXPECT_NO_THROW(validate_embedding(k3.arrangement, square, emb));
  const auto r = lift_realization(k3, square, emb);
  const auto rep = verify_nd_realization(square, r);
  EXPECT_TRUE(rep.ok) << rep.violation;
  EXPECT_EQ(minus_marginal(square, r, 0, 2), Rational(1, 2));
  EXPECT_EQ(minus_marginal(square, r, 5, 5), Rational(1, 2));

  MinorEmbedding bad{{0, 3, 0}, {{0}, {2, 5}, {3}}};
  EXPECT_THROW(validate_embedding(k3.arrangement, square, bad), InvalidParameter);
}

TEST(Attack, EveryContextIsDeterministic) {
  for (auto [target, count] : {std::pair{MagicTarget::magic_square, 6}, std::pair{MagicTarget::pentagram, 5}}) {
    for (int c = 0; c < count; ++c) {
      const auto res = deterministic_context_attack(target, c);
      const auto rep = verify_nd_realization(res.arrangement, res.realization);
      ASSERT_TRUE(rep.ok) << rep.violation;
      const auto& members = res.arrangement.hyperedges[c];
      ASSERT_EQ(res.predicted.size(), members.size());
      int product = 1;
      for (std::size_t k = 0; k < members.size(); ++k) {
        const Rational p = minus_marginal(res.arrangement, res.realization, c, members[k]);
        EXPECT_TRUE(p == Rational(0) || p == Rational(1));
        EXPECT_EQ(res.predicted[k], p == Rational(1) ? -1 : 1);
        product *= res.predicted[k];
      }
      EXPECT_EQ(product, res.arrangement.labels[c]);
    }
    EXPECT_THROW(deterministic_context_attack(target, count), InvalidParameter);
  }
}

TEST(ArrangementIo, RoundTripAndErrors) {
  for (const auto& a : {magic_square(), magic_pentagram(), bases().first.arrangement}) {
    std::stringstream ss;
    write_arrangement(ss, a);
    const auto b = read_arrangement(ss);
    EXPECT_EQ(b.num_vertices, a.num_vertices);
    EXPECT_EQ(b.hyperedges, a.hyperedges);
    EXPECT_EQ(b.labels, a.labels);
  }
  for (const char* bad : {"arrangement 2\n", "arrangement 2 1\nhe 1 0 1\n",
                          "arrangement 2 2\nhe 2 0 1\nhe 1 0 1\n", "arrangement 2 2\nhe 1 0 1\n",
                          "arrangement 4 2\nhe 1 0 1\nhe 1 2 3\n"}) {
    std::istringstream is(bad);
    EXPECT_THROW(read_arrangement(is), ParseError) << bad;
  }
  std::istringstream ok("# two parallel contexts\narrangement 2 2\nhe 1 0 1\nhe -1 0 1\n");
  EXPECT_EQ(read_arrangement(ok).labels, (std::vector<int>{1, -1}));
}

TEST(SiC, MaximallyEntangledState) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  for (int d = 2; d <= 4; ++d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    EXPECT_NEAR(si_c_entangled_check(d, v), 1.0, 1e-12);
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(d);
    basis(d - 1) = 1;
    EXPECT_NEAR(si_c_entangled_check(d, basis), 1.0, 1e-12);
  }
  Eigen::VectorXcd w(2);
  w << 1, std::complex<double>(0, 1);
  EXPECT_THROW(si_c_entangled_check(2, w), DomainError);
}

TEST(SiC, ProductStateIsNotPerfect) {
  // |+>|0> with P = |0><0|: <A> = 0 on the first factor, so the correlation vanishes.
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
  p(0, 0) = 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(2) = 1 / std::sqrt(2.0);
  EXPECT_NEAR(si_c_correlation(p, psi), 0.0, 1e-12);
  EXPECT_LT(si_c_correlation(p, psi), 1.0);
}
