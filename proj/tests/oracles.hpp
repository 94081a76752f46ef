#pragma once

// Brute-force reference implementations. Exponential on purpose; only used on
// small inputs.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ctxrand/graph.hpp"

namespace oracle {

using ctxrand::Rational;
using ctxrand::WeightedGraph;

inline bool independent(const WeightedGraph& g, std::uint32_t mask) {
  for (const auto& [u, v] : g.edges())
    if ((mask >> u & 1) && (mask >> v & 1)) return false;
  return true;
}

inline bool is_clique(const WeightedGraph& g, std::uint32_t mask) {
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if ((mask >> u & 1) && (mask >> v & 1) && !g.adjacent(u, v)) return false;
  return true;
}

inline Rational alpha(const WeightedGraph& g) {
  Rational best(0);
  for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
    if (!independent(g, mask)) continue;
    Rational s(0);
    for (int v = 0; v < g.size(); ++v)
      if (mask >> v & 1) s += g.weight(v);
    if (s > best) best = s;
  }
  return best;
}

// Maximal cliques as sorted vertex lists, in lexicographic order.
inline std::vector<std::vector<int>> maximal_cliques(const WeightedGraph& g) {
  const int n = g.size();
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!is_clique(g, mask)) continue;
    bool maximal = true;
    for (int v = 0; v < n && maximal; ++v)
      if (!(mask >> v & 1) && is_clique(g, mask | (1u << v))) maximal = false;
    if (!maximal) continue;
    std::vector<int> c;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) c.push_back(v);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline WeightedGraph random_graph(std::mt19937_64& rng, int n, double p, bool weighted) {
  std::vector<ctxrand::Edge> edges;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u(rng) < p) edges.push_back({a, b});
  std::vector<Rational> w(n, Rational(1));
  if (weighted) {
    std::uniform_int_distribution<int> num(1, 9), den(1, 4);
    for (auto& x : w) x = Rational(num(rng), den(rng));
  }
  return WeightedGraph(n, edges, w);
}

}  // namespace oracle
