#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctxrand {

enum class SolveStatus {
  optimal,
  max_iterations,
  primal_infeasible,  // no X satisfies the equalities
  dual_infeasible,    // primal objective unbounded above
};

std::string to_string(SolveStatus s);
inline bool infeasible_detected(SolveStatus s) {
  return s == SolveStatus::primal_infeasible || s == SolveStatus::dual_infeasible;
}

struct BlockSpec {
  int size = 0;
  bool diagonal = false;  // LP-style block: only diagonal entries exist
};

// Symmetric block-diagonal matrix given by upper-triangular entries. An entry
// (r, c, v) with r != c stands for v at both (r, c) and (c, r).
struct SparseBlockMatrix {
  struct Entry {
    int block;
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;

  void add(int block, int row, int col, double value);
  bool empty() const { return entries.empty(); }
};

// maximize <C, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_k) PSD.
// Dual: minimize b^T y  s.t.  Z = sum_i y_i A_i - C PSD.
struct SdpProblem {
  std::vector<BlockSpec> blocks;
  SparseBlockMatrix objective;
  std::vector<SparseBlockMatrix> constraints;
  std::vector<double> rhs;

  static SdpProblem single_block(int dim);
  int add_constraint(SparseBlockMatrix a, double b);
  int num_constraints() const { return static_cast<int>(constraints.size()); }
};

struct SdpOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.95;
  double infeasibility_tol = 1e-8;
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<Eigen::MatrixXd> X;  // one dense matrix per block
  std::vector<Eigen::MatrixXd> Z;
  Eigen::VectorXd y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // relative duality gap
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

// Primal-dual interior point method (Nesterov-Todd scaling, Mehrotra
// predictor-corrector). Deterministic and single threaded.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// <A, X> for a sparse symmetric A against dense blocks.
double inner_product(const SparseBlockMatrix& a, const std::vector<Eigen::MatrixXd>& x);

enum class LpStatus { optimal, unbounded, infeasible, max_iterations };
std::string to_string(LpStatus s);

// maximize c^T x  s.t.  A x <= b,  0 <= x <= upper  (upper may be empty or +inf).
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd upper;
};

struct LpOptions {
  double tol = 1e-9;
  int max_iterations = 200;
};

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd duals;  // multipliers of A x <= b
  LpStatus status = LpStatus::max_iterations;
};

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

struct PsdFactor {
  Eigen::MatrixXd vectors;  // row i is the vector of index i; X ~= V V^T
  int rank = 0;
  double gram_error = 0.0;  // max |X - V V^T| entry
};

// Eigen-decomposition based factorization. Eigenvalues in [-rank_tol, rank_tol]
// are dropped; anything below -rank_tol raises NotPsdError.
PsdFactor psd_factor(const Eigen::MatrixXd& x, double rank_tol = 1e-9);

}  // namespace ctxrand
