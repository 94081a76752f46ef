#include "ctxrand/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

#include "ctxrand/errors.hpp"

namespace ctxrand {

SdpProblem lovasz_theta_program(const WeightedGraph& g) {
  const int n = g.size();
  SdpProblem p = SdpProblem::single_block(n + 1);
  const auto w = g.real_weights();
  for (int u = 0; u < n; ++u) p.objective.add(0, 0, u + 1, 0.5 * w[u]);
  SparseBlockMatrix top;
  top.add(0, 0, 0, 1.0);
  p.add_constraint(std::move(top), 1.0);
  for (int u = 0; u < n; ++u) {
    SparseBlockMatrix a;
    a.add(0, u + 1, u + 1, 1.0);
    a.add(0, 0, u + 1, -0.5);
    p.add_constraint(std::move(a), 0.0);
  }
  for (auto [u, v] : g.edges()) {
    SparseBlockMatrix a;
    a.add(0, u + 1, v + 1, 0.5);
    p.add_constraint(std::move(a), 0.0);
  }
  return p;
}

ThetaResult lovasz_theta(const WeightedGraph& g, double tol) {
  ThetaResult r;
  if (g.size() == 0) {
    r.value = 0.0;
    r.moment_matrix = Eigen::MatrixXd::Ones(1, 1);
    r.status = SolveStatus::optimal;
    return r;
  }
  SdpOptions opt;
  opt.tol = tol;
  SdpSolution s = solve_sdp(lovasz_theta_program(g), opt);
  r.value = s.primal_value;
  r.moment_matrix = s.X.at(0);
  r.status = s.status;
  r.gap = s.gap;
  return r;
}

namespace {

Eigen::MatrixXd permute_bordered(const Eigen::MatrixXd& x, const Permutation& p) {
  const Eigen::Index m = x.rows();
  Eigen::MatrixXd out(m, m);
  auto idx = [&](Eigen::Index i) -> Eigen::Index { return i == 0 ? 0 : p[i - 1] + 1; };
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(idx(i), idx(j)) = x(i, j);
  return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

constexpr std::size_t kMaxGroupOrder = 5040;

}  // namespace

Eigen::MatrixXd symmetrize_solution(const WeightedGraph& g, const Eigen::MatrixXd& x,
                                    const std::vector<Permutation>& perms) {
  const int n = g.size();
  if (x.rows() != n + 1 || x.cols() != n + 1) throw InvalidParameter("moment matrix has wrong size");
  for (const auto& p : perms)
    if (!verify_automorphism(g, p)) throw InvalidParameter("permutation is not an automorphism");
  if (perms.empty()) return x;

  Permutation id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  std::set<Permutation> group{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty() && group.size() <= kMaxGroupOrder) {
    std::vector<Permutation> next;
    for (const auto& h : frontier)
      for (const auto& p : perms) {
        Permutation c = compose(p, h);
        if (group.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  if (group.size() <= kMaxGroupOrder) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (const auto& h : group) acc += permute_bordered(x, h);
    return acc / static_cast<double>(group.size());
  }
  // Large group: repeated pairwise averaging converges to the group average.
  Eigen::MatrixXd cur = x;
  for (int sweep = 0; sweep < 100000; ++sweep) {
    Eigen::MatrixXd before = cur;
    for (const auto& p : perms) cur = 0.5 * (cur + permute_bordered(cur, p));
    if ((cur - before).cwiseAbs().maxCoeff() < 1e-15) break;
  }
  return cur;
}

namespace {

using Poly = std::vector<double>;  // coefficients, lowest degree first

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

std::vector<double> real_roots(Poly p) {
  while (p.size() > 1 && std::abs(p.back()) < 1e-300) p.pop_back();
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> out;
  for (int i = 0; i < deg; ++i) {
    auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) < 1e-7) out.push_back(z.real());
  }
  return out;
}

struct Pentagon {
  double t, a, b, c;
  explicit Pentagon(double t_)
      : t(t_), a(2.0 * (t_ - 1.0) / t_), b((t_ - 2.0) / t_), c(2.0 * std::sqrt(t_ - 1.0) / t_) {}
  static double q(double x) { return std::max(0.0, -2.0 * x * x + 3.0 * x - 1.0); }
  double f(double x) const { return 5.0 / t - 1.0 + a * x + b / x + c * std::sqrt(q(x)) / x; }
  // Derivative without the common positive factor: (a x^2 - b) sqrt(q) - c (1.5x - 1).
  double g(double x) const { return (a * x * x - b) * std::sqrt(q(x)) - c * (1.5 * x - 1.0); }
};

double golden_max(const Pentagon& p, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = p.f(x1), f2 = p.f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = p.f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = p.f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ConditionalMax theta_c5_conditional(double t) {
  if (!(t >= 3.0)) throw DomainError("theta_c5_conditional needs t >= 3");
  const Pentagon p(t);
  std::vector<double> cand;
  // For t >= 9 the stationary points are known in closed form; listing them
  // first keeps the exact argmax when a numerically found root ties with it.
  if (t >= 9.0) {
    const double h = 0.25 * std::sqrt((t - 9.0) / (t - 1.0));
    for (double x : {0.75 - h, 0.75 + h})
      if (std::abs(p.g(x)) < 1e-6) cand.push_back(x);
  }
  cand.push_back(0.5);
  cand.push_back(1.0);

  constexpr int kGrid = 400;
  std::vector<double> fx(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) fx[i] = p.f(0.5 + 0.5 * i / kGrid);
  for (int i = 1; i < kGrid; ++i)
    if (fx[i] >= fx[i - 1] && fx[i] >= fx[i + 1])
      cand.push_back(golden_max(p, 0.5 + 0.5 * (i - 1) / kGrid, 0.5 + 0.5 * (i + 1) / kGrid));

  // Squared stationarity: (a x^2 - b)^2 q(x) - c^2 (1.5x - 1)^2 = 0.
  const Poly quad{-p.b, 0.0, p.a};
  const Poly qpoly{-1.0, 3.0, -2.0};
  const Poly lin{-p.c, 1.5 * p.c};
  for (double x : real_roots(sub(mul(mul(quad, quad), qpoly), mul(lin, lin)))) {
    if (x < 0.5 - 1e-9 || x > 1.0 + 1e-9) continue;
    x = std::clamp(x, 0.5, 1.0);
    if (std::abs(p.g(x)) < 1e-6) cand.push_back(x);
  }

  ConditionalMax best{-std::numeric_limits<double>::infinity(), 0.5};
  for (double x : cand) {
    const double v = p.f(x);
    if (v > best.value + 1e-14 * std::abs(v)) best = {v, x};
  }
  return best;
}

double theta_gd_analytic(int d) {
  if (d < 3) throw DomainError("theta_gd_analytic needs d >= 3");
  return d * theta_c5_conditional(static_cast<double>(d)).value;
}

double theta_odd_cycle_closed(int n) {
  if (n < 3 || n % 2 == 0) throw InvalidParameter("odd cycle needs odd n >= 3");
  const double c = std::cos(std::numbers::pi / n);
  return n * c / (1.0 + c);
}

EpsThetaResult epsilon_theta_relaxation(const EpsilonGraph& g, double tol) {
  const int n = g.size();
  if (n == 0) throw InvalidParameter("empty epsilon graph");
  const double se = std::sqrt(g.epsilon());
  std::vector<double> s;
  for (double w : g.real_weights()) s.push_back(std::sqrt(w));

  SdpProblem p;
  p.blocks = {{n, false}, {n, false}};
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) {
      if (se > 0) p.objective.add(0, u, v, se * s[u] * s[v]);
      p.objective.add(1, u, v, (1.0 - se) * s[u] * s[v]);
    }
  for (auto [u, v] : g.strict_edges()) {
    SparseBlockMatrix a, b;
    a.add(0, u, v, 0.5);
    b.add(1, u, v, 0.5);
    p.add_constraint(std::move(a), 0.0);
    p.add_constraint(std::move(b), 0.0);
  }
  for (auto [u, v] : g.eps_edges()) {
    SparseBlockMatrix b;
    b.add(1, u, v, 0.5);
    p.add_constraint(std::move(b), 0.0);
  }
  for (int u = 0; u < n; ++u) {
    SparseBlockMatrix a;
    a.add(0, u, u, 1.0);
    a.add(1, u, u, -1.0);
    p.add_constraint(std::move(a), 0.0);
  }
  // Tr Y = 1 follows from Tr X = 1 and the diagonal coupling, so it is not imposed twice.
  SparseBlockMatrix tr;
  for (int u = 0; u < n; ++u) tr.add(0, u, u, 1.0);
  p.add_constraint(std::move(tr), 1.0);

  SdpOptions opt;
  opt.tol = tol;
  SdpSolution sol = solve_sdp(p, opt);
  EpsThetaResult r;
  r.value = sol.primal_value;
  r.X = sol.X.at(0);
  r.Y = sol.X.at(1);
  r.status = sol.status;
  return r;
}

OrthonormalRep recover_orthonormal_rep(const EpsThetaResult& r, const EpsilonGraph& g,
                                       double rank_tol) {
  const int n = g.size();
  if (r.X.rows() != n || r.Y.rows() != n) throw InvalidParameter("relaxation does not match graph");
  const double se = std::sqrt(g.epsilon());
  const Eigen::MatrixXd z = se * r.X + (1.0 - se) * r.Y;
  const PsdFactor f = psd_factor(z, rank_tol);
  const auto w = g.real_weights();

  std::vector<int> zero_rows;
  for (int u = 0; u < n; ++u)
    if (f.vectors.row(u).norm() <= std::sqrt(rank_tol)) zero_rows.push_back(u);
  const int dim = f.rank + static_cast<int>(zero_rows.size());

  OrthonormalRep rep;
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim);
  int extra = f.rank;
  for (int u = 0; u < n; ++u) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    if (std::find(zero_rows.begin(), zero_rows.end(), u) != zero_rows.end()) {
      v(extra++) = 1.0;
    } else {
      v.head(f.rank) = f.vectors.row(u).transpose();
      psi.head(f.rank) += std::sqrt(w[u]) * v.head(f.rank);
      v.normalize();
    }
    rep.vectors.push_back(std::move(v));
  }
  if (psi.norm() == 0.0) throw Error("recovered state vanishes");
  rep.state = psi / psi.norm();
  for (int u = 0; u < n; ++u) {
    const double o = rep.state.dot(rep.vectors[u]);
    rep.value += w[u] * o * o;
  }
  return rep;
}

}  // namespace ctxrand
