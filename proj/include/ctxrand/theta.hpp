#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ctxrand/graph.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

// Bordered formulation on index 0 plus one index per vertex:
//   max sum_u w_u X_{0,u+1}  s.t. X_00 = 1, X_{u+1,u+1} = X_{0,u+1}, X_{u+1,v+1} = 0 on edges.
SdpProblem lovasz_theta_program(const WeightedGraph& g);

struct ThetaResult {
  double value = 0.0;
  Eigen::MatrixXd moment_matrix;  // (n+1) x (n+1)
  SolveStatus status = SolveStatus::max_iterations;
  double gap = 0.0;
};

ThetaResult lovasz_theta(const WeightedGraph& g, double tol = 1e-8);

// Averages X over the group generated by the given vertex automorphisms
// (acting on indices 1..n, index 0 fixed). Throws InvalidParameter if a
// permutation is not an automorphism of g.
Eigen::MatrixXd symmetrize_solution(const WeightedGraph& g, const Eigen::MatrixXd& x,
                                    const std::vector<Permutation>& perms);

struct ConditionalMax {
  double value = 0.0;
  double argmax = 0.0;
};

// Maximum over x in [1/2, 1] of the single-pentagon objective with central
// weight t (the per-block contribution to theta(G_t)).
ConditionalMax theta_c5_conditional(double t);
double theta_gd_analytic(int d);
double theta_odd_cycle_closed(int n);

struct EpsThetaResult {
  double value = 0.0;
  Eigen::MatrixXd X;  // strict-edge block
  Eigen::MatrixXd Y;  // strict + epsilon block
  SolveStatus status = SolveStatus::max_iterations;
};

// Two-block relaxation: X vanishes on strict edges, Y on all edges,
// diag X = diag Y, Tr X = Tr Y = 1; objective
// sqrt(eps) s^T X s + (1 - sqrt(eps)) s^T Y s with s = sqrt(w).
EpsThetaResult epsilon_theta_relaxation(const EpsilonGraph& g, double tol = 1e-8);

struct OrthonormalRep {
  Eigen::VectorXd state;                // unit vector psi
  std::vector<Eigen::VectorXd> vectors;  // unit vector per vertex
  double value = 0.0;                    // sum_v w_v |<psi|v>|^2
};

OrthonormalRep recover_orthonormal_rep(const EpsThetaResult& r, const EpsilonGraph& g,
                                       double rank_tol = 1e-9);

}  // namespace ctxrand
