#include <cmath>

#include "ctxrand/errors.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

PsdFactor psd_factor(const Eigen::MatrixXd& x, double rank_tol) {
  if (x.rows() != x.cols()) throw InvalidParameter("psd_factor needs a square matrix");
  if (!(rank_tol >= 0)) throw InvalidParameter("rank_tol must be non-negative");
  const Eigen::MatrixXd sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const auto& lam = es.eigenvalues();
  if (x.rows() > 0 && lam(0) < -rank_tol)
    throw NotPsdError("matrix has eigenvalue " + std::to_string(lam(0)));
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > rank_tol) keep.push_back(static_cast<int>(i));
  PsdFactor f;
  f.rank = static_cast<int>(keep.size());
  f.vectors.resize(x.rows(), f.rank);
  // Largest eigenvalue first.
  for (int c = 0; c < f.rank; ++c) {
    const int i = keep[keep.size() - 1 - c];
    f.vectors.col(c) = es.eigenvectors().col(i) * std::sqrt(lam(i));
  }
  f.gram_error = x.rows() ? (x - f.vectors * f.vectors.transpose()).cwiseAbs().maxCoeff() : 0.0;
  return f;
}

}  // namespace ctxrand
