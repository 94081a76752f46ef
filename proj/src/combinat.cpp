#include "ctxrand/combinat.hpp"

#include <algorithm>
#include <numeric>

#include <boost/dynamic_bitset.hpp>
#include <boost/integer/common_factor.hpp>

#include "ctxrand/errors.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

namespace {

using Bits = boost::dynamic_bitset<>;

class IndependenceSearch {
 public:
  IndependenceSearch(const WeightedGraph& g) : g_(g), n_(g.size()) {
    std::int64_t lcm = 1;
    for (const auto& w : g.weights()) lcm = boost::integer::lcm(lcm, w.denominator());
    scale_ = lcm;
    w_.resize(n_);
    for (int v = 0; v < n_; ++v) w_[v] = g.weight(v).numerator() * (lcm / g.weight(v).denominator());
    nbr_.assign(n_, Bits(n_));
    for (auto [u, v] : g.edges()) {
      nbr_[u].set(v);
      nbr_[v].set(u);
    }
    by_weight_.resize(n_);
    std::iota(by_weight_.begin(), by_weight_.end(), 0);
    std::stable_sort(by_weight_.begin(), by_weight_.end(),
                     [&](int a, int b) { return w_[a] > w_[b]; });
  }

  IndependenceResult run() {
    Bits p(n_);
    p.set();
    std::vector<Vertex> current;
    search(p, 0, current);
    std::sort(best_set_.begin(), best_set_.end());
    return {Rational(best_, scale_), best_set_};
  }

 private:
  // Greedy partition of P into cliques; an independent set meets each clique
  // at most once, so the sum of per-clique maximum weights bounds it.
  std::int64_t clique_cover_bound(const Bits& p) const {
    std::vector<Bits> cliques;
    std::vector<std::int64_t> top;
    for (int v : by_weight_) {
      if (!p.test(v)) continue;
      bool placed = false;
      for (std::size_t c = 0; c < cliques.size(); ++c) {
        if (cliques[c].is_subset_of(nbr_[v])) {
          cliques[c].set(v);
          placed = true;
          break;
        }
      }
      if (!placed) {
        cliques.emplace_back(n_);
        cliques.back().set(v);
        top.push_back(w_[v]);  // heaviest first, so the founder is the max
      }
    }
    return std::accumulate(top.begin(), top.end(), std::int64_t{0});
  }

  void search(Bits p, std::int64_t weight, std::vector<Vertex>& current) {
    // Vertices isolated within P are always taken.
    std::size_t pushed = 0;
    for (auto v = p.find_first(); v != Bits::npos; v = p.find_next(v)) {
      if (!p.intersects(nbr_[v])) {
        weight += w_[v];
        current.push_back(static_cast<Vertex>(v));
        ++pushed;
        p.reset(v);
      }
    }
    if (p.none()) {
      if (weight > best_ || best_set_.empty()) {
        best_ = weight;
        best_set_ = current;
      }
    } else if (weight + clique_cover_bound(p) > best_) {
      Vertex pick = -1;
      std::size_t best_deg = 0;
      for (auto v = p.find_first(); v != Bits::npos; v = p.find_next(v)) {
        std::size_t deg = (p & nbr_[v]).count();
        if (pick < 0 || deg > best_deg) {
          pick = static_cast<Vertex>(v);
          best_deg = deg;
        }
      }
      current.push_back(pick);
      search(p - nbr_[pick] - single(pick), weight + w_[pick], current);
      current.pop_back();
      p.reset(pick);
      search(p, weight, current);
    }
    current.resize(current.size() - pushed);
  }

  Bits single(int v) const {
    Bits b(n_);
    b.set(v);
    return b;
  }

  const WeightedGraph& g_;
  int n_;
  std::int64_t scale_ = 1;
  std::vector<std::int64_t> w_;
  std::vector<Bits> nbr_;
  std::vector<int> by_weight_;
  std::int64_t best_ = 0;
  std::vector<Vertex> best_set_;
};

}  // namespace

IndependenceResult weighted_independence_number(const WeightedGraph& g) {
  if (g.size() == 0) return {Rational(0), {}};
  return IndependenceSearch(g).run();
}

PackingResult fractional_packing_number(const WeightedGraph& g, double tol) {
  const int n = g.size();
  if (n == 0) return {0.0, {}};
  const auto cliques = enumerate_maximal_cliques(g);
  LpProblem lp;
  lp.c = Eigen::Map<const Eigen::VectorXd>(g.real_weights().data(), n);
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cliques.size()), n);
  lp.b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cliques.size()));
  for (std::size_t c = 0; c < cliques.size(); ++c)
    for (Vertex v : cliques[c].members) lp.A(static_cast<Eigen::Index>(c), v) = 1.0;
  lp.upper = Eigen::VectorXd::Ones(n);
  LpOptions opt;
  opt.tol = std::min(tol, 1e-9) * 1e-1;
  LpSolution sol = solve_lp(lp, opt);
  if (sol.status != LpStatus::optimal) throw Error("fractional packing LP did not converge");
  PackingResult r;
  r.value = sol.value;
  r.assignment.assign(sol.x.data(), sol.x.data() + n);
  return r;
}

EpsilonIndependence epsilon_independence(const EpsilonGraph& g) {
  auto [strict, full] = strict_and_full_views(g);
  EpsilonIndependence r;
  r.alpha_strict = weighted_independence_number(strict).value;
  r.alpha_full = weighted_independence_number(full).value;
  const double e = g.epsilon();
  r.value = to_double(r.alpha_full) + e * to_double(r.alpha_strict - r.alpha_full);
  return r;
}

double epsilon_independence_bound(const EpsilonGraph& g) { return epsilon_independence(g).value; }

}  // namespace ctxrand
