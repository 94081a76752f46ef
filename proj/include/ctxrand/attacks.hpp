#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctxrand/graph.hpp"

namespace ctxrand {

// Hypergraph with +-1 labels on hyperedges. Valid arrangements are connected
// and every vertex lies in exactly two hyperedges.
struct SignedArrangement {
  int num_vertices = 0;
  std::vector<std::vector<int>> hyperedges;  // member order fixes table bit order
  std::vector<int> labels;

  void validate() const;
  // The two hyperedges containing v, ascending.
  std::pair<int, int> incidence(int v) const;
  int position(int e, int v) const;  // index of v inside hyperedge e, -1 if absent
};

// One exact table per hyperedge over its +-1 strings. Entry `mask` has bit k
// set when member k takes value -1.
struct NdRealization {
  std::vector<std::vector<Rational>> tables;
};

// Embedding of a base intersection graph into a target one. Base hyperedge h
// goes to target hyperedge hyperedge_map[h]; base vertex x (an edge of the
// base intersection graph) goes to a chain of target vertices that starts in
// the image of x's lower hyperedge and ends in the image of its higher one.
struct MinorEmbedding {
  std::vector<int> hyperedge_map;
  std::vector<std::vector<int>> vertex_paths;
};

struct VerificationReport {
  bool ok = true;
  std::string violation;  // first violation found
};

WeightedGraph intersection_graph(const SignedArrangement& a);
bool is_magic(const SignedArrangement& a);
VerificationReport verify_nd_realization(const SignedArrangement& a, const NdRealization& r,
                                         double tol = 0.0);
// Marginal probability that vertex v reads -1 in hyperedge e.
Rational minus_marginal(const SignedArrangement& a, const NdRealization& r, int e, int v);

struct ArrangementCase {
  SignedArrangement arrangement;
  NdRealization realization;
};

// K_{2,2}: e1={v1,v2}, e2={v3,v4}, e3={v1,v3}, e4={v2,v4}, l(e4)=-1.
// K_3: f1={u1,u2}, f2={u1,u3}, f3={u2,u3}, l(f3)=-1. Vertices are 0-based.
std::pair<ArrangementCase, ArrangementCase> base_realizations();

// Flips the labels of hyperedges first and second along a shortest chain of
// hyperedges, negating the shared coordinate at every pivot.
ArrangementCase flip_labels_along_path(const SignedArrangement& a, const NdRealization& r,
                                       std::pair<int, int> edge_pair);

void validate_embedding(const SignedArrangement& base, const SignedArrangement& target,
                        const MinorEmbedding& emb);

// Realization for the target built from the base one: image hyperedges copy
// the base tables (+1 padding), chain-internal hyperedges repeat the carried
// value, all others output +1; labels are then moved to the target's own
// labels by pairwise flips.
NdRealization lift_realization(const ArrangementCase& base, const SignedArrangement& target,
                               const MinorEmbedding& emb);

// Rows R0..R2 are hyperedges 0..2 and columns C0..C2 are 3..5; vertex 3r+c
// sits at row r, column c. Column C2 carries the -1 label.
SignedArrangement magic_square();
// Lines L0..L4; the vertex shared by lines i<j is numbered in lexicographic
// order of (i, j). Line L4 carries the -1 label.
SignedArrangement magic_pentagram();

enum class MagicTarget { magic_square, pentagram };
MagicTarget parse_magic_target(const std::string& text);

struct AttackResult {
  SignedArrangement arrangement;
  NdRealization realization;
  MinorEmbedding embedding;
  int context = 0;
  std::vector<int> predicted;  // deterministic value of each member of the context
};

AttackResult deterministic_context_attack(MagicTarget target, int context);

// <psi| A (x) A |psi> with A = 1 - 2P, P the projector onto v, and psi the
// maximally entangled state (1/sqrt d) sum_i |ii>.
double si_c_entangled_check(int d, const Eigen::VectorXd& v);
// Complex version; throws DomainError unless P equals its transpose.
double si_c_entangled_check(int d, const Eigen::VectorXcd& v);
// Same observable on an arbitrary two-qudit state.
double si_c_correlation(const Eigen::MatrixXcd& projector, const Eigen::VectorXcd& state);

void write_arrangement(std::ostream& os, const SignedArrangement& a);
SignedArrangement read_arrangement(std::istream& is);

}  // namespace ctxrand
