#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace ctxrand {

using Rational = boost::rational<std::int64_t>;
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;  // always stored with first < second
using Permutation = std::vector<Vertex>;

double to_double(const Rational& r);
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);

// Simple undirected graph on dense ids 0..n-1 with positive rational weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges, std::vector<Rational> weights,
                std::vector<std::string> labels = {});

  // Unit weights.
  static WeightedGraph unweighted(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(Vertex v) const { return weights_.at(v); }
  std::vector<double> real_weights() const;
  Rational total_weight() const;

  bool adjacent(Vertex u, Vertex v) const;
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  int degree(Vertex v) const { return static_cast<int>(adj_.at(v).size()); }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Vertex v) const;

  bool operator==(const WeightedGraph& other) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Rational> weights_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::uint8_t> matrix_;
};

// Graph with two edge classes: strict (exclusive) and epsilon (almost exclusive).
class EpsilonGraph {
 public:
  EpsilonGraph() = default;
  EpsilonGraph(int n, std::vector<Edge> strict, std::vector<Edge> eps,
               std::vector<Rational> weights, double epsilon,
               std::vector<std::string> labels = {});

  int size() const { return n_; }
  const std::vector<Edge>& strict_edges() const { return strict_; }
  const std::vector<Edge>& eps_edges() const { return eps_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::vector<double> real_weights() const;
  double epsilon() const { return epsilon_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const EpsilonGraph& other) const;

 private:
  int n_ = 0;
  std::vector<Edge> strict_;
  std::vector<Edge> eps_;
  std::vector<Rational> weights_;
  double epsilon_ = 0.0;
  std::vector<std::string> labels_;
};

struct Clique {
  std::vector<Vertex> members;  // sorted ascending
  auto operator<=>(const Clique&) const = default;
};

// G_d: d pentagons v_{i,1..5}, the v_{i,1} joined into a central clique.
// Vertex v_{i,j} (1-based) has id 5(i-1)+(j-1).
WeightedGraph build_gd(int d);
Vertex gd_vertex(int i, int j);
// Permutation of G_d's vertices exchanging pentagon i with pentagon k (1-based).
Permutation block_swap_permutation(int d, int i, int k);

WeightedGraph build_odd_cycle(int n);
WeightedGraph build_cycle(int n);

// All maximal cliques, each sorted, listed in lexicographic order.
std::vector<Clique> enumerate_maximal_cliques(const WeightedGraph& g);

enum class EpsEdgeRule {
  // Copies u^(C), v^(C') with C != C' are epsilon-adjacent whenever u and v
  // are adjacent in the original graph.
  cross_context,
  // Additionally require that C or C' contains both u and v. For odd cycles
  // this yields 2n epsilon edges instead of 3n.
  shared_context,
};

EpsilonGraph epsilon_expand(const WeightedGraph& g, double epsilon,
                            EpsEdgeRule rule = EpsEdgeRule::cross_context);

// (G', G''): strict edges only, and strict plus epsilon edges.
std::pair<WeightedGraph, WeightedGraph> strict_and_full_views(const EpsilonGraph& g);

bool verify_automorphism(const WeightedGraph& g, const Permutation& perm);

// Text format:
//   graph <n> <m_strict> <m_eps>
//   [eps <epsilon>]
//   w <v> <weight>         one per vertex
//   [l <v> <label>]
//   e <u> <v>              strict edges
//   xe <u> <v>             epsilon edges
void write_graph(std::ostream& os, const WeightedGraph& g);
void write_graph(std::ostream& os, const EpsilonGraph& g);
std::string graph_to_text(const WeightedGraph& g);
std::string graph_to_text(const EpsilonGraph& g);
// Reads either flavour; a plain graph is returned with no epsilon edges.
EpsilonGraph read_graph(std::istream& is);
EpsilonGraph graph_from_text(const std::string& text);
WeightedGraph read_weighted_graph(std::istream& is);

}  // namespace ctxrand
