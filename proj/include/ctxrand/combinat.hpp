#pragma once

#include <vector>

#include "ctxrand/graph.hpp"

namespace ctxrand {

struct IndependenceResult {
  Rational value;
  std::vector<Vertex> witness;  // sorted independent set attaining value
};

// Exact maximum-weight independent set.
IndependenceResult weighted_independence_number(const WeightedGraph& g);

struct PackingResult {
  double value = 0.0;
  std::vector<double> assignment;  // per-vertex x_v
};

// Fractional packing number: max sum w_v x_v subject to every maximal clique
// having total x at most 1, x >= 0.
PackingResult fractional_packing_number(const WeightedGraph& g, double tol = 1e-9);

struct EpsilonIndependence {
  double value = 0.0;
  Rational alpha_strict;  // alpha(G')
  Rational alpha_full;    // alpha(G'')
};

EpsilonIndependence epsilon_independence(const EpsilonGraph& g);
// eps * alpha(G') + (1 - eps) * alpha(G'').
double epsilon_independence_bound(const EpsilonGraph& g);

}  // namespace ctxrand
