#include "ctxrand/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/dynamic_bitset.hpp>

#include "ctxrand/errors.hpp"

namespace ctxrand {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      long long p = std::stoll(text, &used);
      if (used != text.size()) throw ParseError("bad rational: " + text);
      return Rational(p);
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    long long p = std::stoll(num, &used);
    if (used != num.size()) throw ParseError("bad rational: " + text);
    long long q = std::stoll(den, &used);
    if (used != den.size() || q == 0) throw ParseError("bad rational: " + text);
    return Rational(p, q);
  } catch (const std::logic_error&) {
    throw ParseError("bad rational: " + text);
  }
}

namespace {

std::vector<Edge> normalize_edges(int n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
      throw InvalidParameter("edge endpoint out of range");
    if (e.first == e.second) throw InvalidParameter("self loop");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void check_weights(int n, const std::vector<Rational>& weights) {
  if (static_cast<int>(weights.size()) != n) throw InvalidParameter("weight vector has wrong length");
  for (const auto& w : weights)
    if (w <= 0) throw InvalidParameter("weights must be positive");
}

std::vector<double> as_doubles(const std::vector<Rational>& ws) {
  std::vector<double> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(to_double(w));
  return out;
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::vector<Rational> weights,
                             std::vector<std::string> labels)
    : n_(n), weights_(std::move(weights)), labels_(std::move(labels)) {
  if (n < 0) throw InvalidParameter("negative vertex count");
  check_weights(n, weights_);
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw InvalidParameter("label table has wrong length");
  edges_ = normalize_edges(n, std::move(edges));
  adj_.assign(n, {});
  matrix_.assign(static_cast<std::size_t>(n) * n, 0);
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    matrix_[static_cast<std::size_t>(u) * n + v] = 1;
    matrix_[static_cast<std::size_t>(v) * n + u] = 1;
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

WeightedGraph WeightedGraph::unweighted(int n, std::vector<Edge> edges) {
  return WeightedGraph(n, std::move(edges), std::vector<Rational>(n, Rational(1)));
}

std::vector<double> WeightedGraph::real_weights() const { return as_doubles(weights_); }

Rational WeightedGraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), Rational(0));
}

bool WeightedGraph::adjacent(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidParameter("vertex out of range");
  return matrix_[static_cast<std::size_t>(u) * n_ + v] != 0;
}

std::string WeightedGraph::label(Vertex v) const {
  if (labels_.empty()) return std::to_string(v);
  return labels_.at(v);
}

bool WeightedGraph::operator==(const WeightedGraph& o) const {
  return n_ == o.n_ && edges_ == o.edges_ && weights_ == o.weights_ && labels_ == o.labels_;
}

EpsilonGraph::EpsilonGraph(int n, std::vector<Edge> strict, std::vector<Edge> eps,
                           std::vector<Rational> weights, double epsilon,
                           std::vector<std::string> labels)
    : n_(n), weights_(std::move(weights)), epsilon_(epsilon), labels_(std::move(labels)) {
  if (n < 0) throw InvalidParameter("negative vertex count");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in [0,1)");
  check_weights(n, weights_);
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw InvalidParameter("label table has wrong length");
  strict_ = normalize_edges(n, std::move(strict));
  eps_ = normalize_edges(n, std::move(eps));
  std::vector<Edge> both;
  std::set_intersection(strict_.begin(), strict_.end(), eps_.begin(), eps_.end(),
                        std::back_inserter(both));
  if (!both.empty()) throw InvalidParameter("edge is both strict and epsilon");
}

std::vector<double> EpsilonGraph::real_weights() const { return as_doubles(weights_); }

bool EpsilonGraph::operator==(const EpsilonGraph& o) const {
  return n_ == o.n_ && strict_ == o.strict_ && eps_ == o.eps_ && weights_ == o.weights_ &&
         epsilon_ == o.epsilon_ && labels_ == o.labels_;
}

Vertex gd_vertex(int i, int j) { return 5 * (i - 1) + (j - 1); }

WeightedGraph build_gd(int d) {
  if (d < 3) throw InvalidParameter("G_d needs d >= 3");
  const int n = 5 * d;
  std::vector<Edge> edges;
  std::vector<Rational> weights(n, Rational(1));
  std::vector<std::string> labels(n);
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= 5; ++j) {
      labels[gd_vertex(i, j)] = "v" + std::to_string(i) + "_" + std::to_string(j);
      edges.emplace_back(gd_vertex(i, j), gd_vertex(i, j % 5 + 1));
    }
    weights[gd_vertex(i, 1)] = Rational(2);
    for (int k = i + 1; k <= d; ++k) edges.emplace_back(gd_vertex(i, 1), gd_vertex(k, 1));
  }
  return WeightedGraph(n, std::move(edges), std::move(weights), std::move(labels));
}

Permutation block_swap_permutation(int d, int i, int k) {
  if (i < 1 || k < 1 || i > d || k > d) throw InvalidParameter("block index out of range");
  Permutation p(5 * d);
  std::iota(p.begin(), p.end(), 0);
  for (int j = 1; j <= 5; ++j) std::swap(p[gd_vertex(i, j)], p[gd_vertex(k, j)]);
  return p;
}

WeightedGraph build_cycle(int n) {
  if (n < 3) throw InvalidParameter("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return WeightedGraph::unweighted(n, std::move(edges));
}

WeightedGraph build_odd_cycle(int n) {
  if (n < 3 || n % 2 == 0) throw InvalidParameter("odd cycle needs odd n >= 3");
  return build_cycle(n);
}

namespace {

using Bits = boost::dynamic_bitset<>;

void bron_kerbosch(const std::vector<Bits>& nbr, std::vector<Vertex>& r, Bits p, Bits x,
                   std::vector<Clique>& out) {
  if (p.none() && x.none()) {
    Clique c{r};
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
    return;
  }
  // Pivot maximizing |P ∩ N(u)| over P ∪ X.
  Bits px = p | x;
  std::size_t best = 0;
  Vertex pivot = -1;
  for (auto u = px.find_first(); u != Bits::npos; u = px.find_next(u)) {
    std::size_t c = (p & nbr[u]).count();
    if (pivot < 0 || c > best) {
      best = c;
      pivot = static_cast<Vertex>(u);
    }
  }
  Bits cand = p - nbr[pivot];
  for (auto v = cand.find_first(); v != Bits::npos; v = cand.find_next(v)) {
    r.push_back(static_cast<Vertex>(v));
    bron_kerbosch(nbr, r, p & nbr[v], x & nbr[v], out);
    r.pop_back();
    p.reset(v);
    x.set(v);
  }
}

}  // namespace

std::vector<Clique> enumerate_maximal_cliques(const WeightedGraph& g) {
  const int n = g.size();
  std::vector<Clique> out;
  if (n == 0) return out;
  std::vector<Bits> nbr(n, Bits(n));
  for (auto [u, v] : g.edges()) {
    nbr[u].set(v);
    nbr[v].set(u);
  }
  Bits p(n), x(n);
  p.set();
  std::vector<Vertex> r;
  bron_kerbosch(nbr, r, p, x, out);
  std::sort(out.begin(), out.end());
  return out;
}

EpsilonGraph epsilon_expand(const WeightedGraph& g, double epsilon, EpsEdgeRule rule) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in [0,1)");
  const auto cliques = enumerate_maximal_cliques(g);
  struct Copy {
    Vertex v;
    int clique;
  };
  std::vector<Copy> copies;
  std::vector<int> count(g.size(), 0);
  std::vector<std::vector<int>> membership(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    for (int c = 0; c < static_cast<int>(cliques.size()); ++c) {
      const auto& m = cliques[c].members;
      if (std::binary_search(m.begin(), m.end(), v)) {
        copies.push_back({v, c});
        ++count[v];
      }
    }
  }
  auto contains = [&](int c, Vertex v) {
    const auto& m = cliques[c].members;
    return std::binary_search(m.begin(), m.end(), v);
  };
  const int n = static_cast<int>(copies.size());
  std::vector<Rational> weights(n);
  std::vector<std::string> labels(n);
  for (int k = 0; k < n; ++k) {
    weights[k] = g.weight(copies[k].v) / Rational(count[copies[k].v]);
    labels[k] = g.label(copies[k].v) + "@C" + std::to_string(copies[k].clique);
  }
  std::vector<Edge> strict, eps;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Vertex u = copies[a].v, v = copies[b].v;
      if (u == v || !g.adjacent(u, v)) continue;
      const int cu = copies[a].clique, cv = copies[b].clique;
      if (cu == cv) {
        strict.emplace_back(a, b);
      } else if (rule == EpsEdgeRule::cross_context ||
                 (contains(cu, v) || contains(cv, u))) {
        eps.emplace_back(a, b);
      }
    }
  }
  return EpsilonGraph(n, std::move(strict), std::move(eps), std::move(weights), epsilon,
                      std::move(labels));
}

std::pair<WeightedGraph, WeightedGraph> strict_and_full_views(const EpsilonGraph& g) {
  std::vector<Edge> full = g.strict_edges();
  full.insert(full.end(), g.eps_edges().begin(), g.eps_edges().end());
  return {WeightedGraph(g.size(), g.strict_edges(), g.weights(), g.labels()),
          WeightedGraph(g.size(), std::move(full), g.weights(), g.labels())};
}

bool verify_automorphism(const WeightedGraph& g, const Permutation& perm) {
  const int n = g.size();
  if (static_cast<int>(perm.size()) != n) throw InvalidParameter("permutation length mismatch");
  std::vector<char> seen(n, 0);
  for (Vertex v : perm) {
    if (v < 0 || v >= n || seen[v]) throw InvalidParameter("not a permutation");
    seen[v] = 1;
  }
  for (Vertex v = 0; v < n; ++v)
    if (g.weight(v) != g.weight(perm[v])) return false;
  for (auto [u, v] : g.edges())
    if (!g.adjacent(perm[u], perm[v])) return false;
  return true;
}

}  // namespace ctxrand
