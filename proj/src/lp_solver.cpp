#include <cmath>

#include "ctxrand/errors.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::max_iterations: return "max-iterations";
  }
  return "unknown";
}

// Standard form on one diagonal block: [x | row slacks | upper-bound slacks].
LpSolution solve_lp(const LpProblem& p, const LpOptions& options) {
  const int n = static_cast<int>(p.c.size());
  const int m = static_cast<int>(p.b.size());
  if (p.A.rows() != m || p.A.cols() != n) throw InvalidParameter("LP matrix has wrong shape");
  if (p.upper.size() != 0 && p.upper.size() != n) throw InvalidParameter("LP upper bounds have wrong length");
  if (n == 0) throw InvalidParameter("LP has no variables");
  std::vector<int> bounded;
  for (int j = 0; j < p.upper.size(); ++j) {
    if (p.upper(j) < 0) {
      LpSolution s;
      s.status = LpStatus::infeasible;
      return s;
    }
    if (std::isfinite(p.upper(j))) bounded.push_back(j);
  }
  const int dim = n + m + static_cast<int>(bounded.size());
  SdpProblem sdp;
  sdp.blocks.push_back({dim, true});
  for (int j = 0; j < n; ++j)
    if (p.c(j) != 0.0) sdp.objective.add(0, j, j, p.c(j));
  for (int i = 0; i < m; ++i) {
    SparseBlockMatrix row;
    for (int j = 0; j < n; ++j)
      if (p.A(i, j) != 0.0) row.add(0, j, j, p.A(i, j));
    row.add(0, n + i, n + i, 1.0);
    sdp.add_constraint(std::move(row), p.b(i));
  }
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    SparseBlockMatrix row;
    row.add(0, bounded[k], bounded[k], 1.0);
    row.add(0, n + m + static_cast<int>(k), n + m + static_cast<int>(k), 1.0);
    sdp.add_constraint(std::move(row), p.upper(bounded[k]));
  }
  SdpOptions so;
  so.tol = options.tol;
  so.max_iterations = options.max_iterations;
  SdpSolution r = solve_sdp(sdp, so);
  LpSolution out;
  switch (r.status) {
    case SolveStatus::optimal: out.status = LpStatus::optimal; break;
    case SolveStatus::primal_infeasible: out.status = LpStatus::infeasible; break;
    case SolveStatus::dual_infeasible: out.status = LpStatus::unbounded; break;
    case SolveStatus::max_iterations: out.status = LpStatus::max_iterations; break;
  }
  out.x = r.X[0].diagonal().head(n);
  out.value = p.c.dot(out.x);
  out.duals = r.y.head(m);
  return out;
}

}  // namespace ctxrand
