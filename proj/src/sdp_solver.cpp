#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

#include "ctxrand/errors.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::primal_infeasible: return "infeasible-detected (primal)";
    case SolveStatus::dual_infeasible: return "infeasible-detected (dual)";
  }
  return "unknown";
}

void SparseBlockMatrix::add(int block, int row, int col, double value) {
  if (row > col) std::swap(row, col);
  entries.push_back({block, row, col, value});
}

SdpProblem SdpProblem::single_block(int dim) {
  SdpProblem p;
  p.blocks.push_back({dim, false});
  return p;
}

int SdpProblem::add_constraint(SparseBlockMatrix a, double b) {
  constraints.push_back(std::move(a));
  rhs.push_back(b);
  return static_cast<int>(constraints.size()) - 1;
}

double inner_product(const SparseBlockMatrix& a, const std::vector<Eigen::MatrixXd>& x) {
  double s = 0.0;
  for (const auto& e : a.entries) {
    const auto& m = x.at(e.block);
    s += e.row == e.col ? e.value * m(e.row, e.row) : 2.0 * e.value * m(e.row, e.col);
  }
  return s;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Blocks = std::vector<MatrixXd>;

struct Term {
  int r, c;
  double v;
};

struct Block {
  int n = 0;
  bool diag = false;
  std::vector<Term> objective;
  std::vector<std::pair<int, std::vector<Term>>> parts;  // constraint id, its terms in this block
};

// Per-block Nesterov-Todd scaling data.
struct Scaling {
  MatrixXd G, Ginv, W, Linv, Rinv;
  VectorXd sv;  // eigenvalues of the scaled point
};

double term_inner(const Block& b, const std::vector<Term>& t, const MatrixXd& x) {
  double s = 0.0;
  if (b.diag) {
    for (const auto& e : t) s += e.v * x(e.r, 0);
  } else {
    for (const auto& e : t) s += e.r == e.c ? e.v * x(e.r, e.r) : 2.0 * e.v * x(e.r, e.c);
  }
  return s;
}

void term_add(const Block& b, MatrixXd& x, const std::vector<Term>& t, double scale) {
  if (b.diag) {
    for (const auto& e : t) x(e.r, 0) += scale * e.v;
  } else {
    for (const auto& e : t) {
      x(e.r, e.c) += scale * e.v;
      if (e.r != e.c) x(e.c, e.r) += scale * e.v;
    }
  }
}

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double frob(const Blocks& a) { return std::sqrt(dot(a, a)); }

// Largest step t in (0, inf] such that X + t dX stays PSD, with X = L L^T.
double max_step(bool diag, const MatrixXd& x, const MatrixXd& linv, const MatrixXd& dx) {
  double lam;
  if (diag) {
    lam = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i) lam = std::min(lam, dx(i, 0) / x(i, 0));
  } else {
    MatrixXd s = linv * dx * linv.transpose();
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
    lam = es.eigenvalues()(0);
  }
  return lam < 0 ? -1.0 / lam : std::numeric_limits<double>::infinity();
}

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& opt) : opt_(opt) {
    m_ = p.num_constraints();
    if (static_cast<int>(p.rhs.size()) != m_) throw InvalidParameter("rhs length mismatch");
    if (p.blocks.empty()) throw InvalidParameter("SDP has no blocks");
    for (const auto& bs : p.blocks) {
      if (bs.size <= 0) throw InvalidParameter("empty SDP block");
      Block b;
      b.n = bs.size;
      b.diag = bs.diagonal;
      blocks_.push_back(b);
      dim_ += bs.size;
    }
    b_ = Eigen::Map<const VectorXd>(p.rhs.data(), m_);
    auto per_block = [&](const SparseBlockMatrix& a) {
      std::vector<std::map<std::pair<int, int>, double>> acc(blocks_.size());
      for (const auto& e : a.entries) {
        if (e.block < 0 || e.block >= static_cast<int>(blocks_.size()))
          throw InvalidParameter("entry refers to a missing block");
        const Block& b = blocks_[e.block];
        int r = std::min(e.row, e.col), c = std::max(e.row, e.col);
        if (r < 0 || c >= b.n) throw InvalidParameter("entry outside its block");
        if (b.diag && r != c) throw InvalidParameter("off-diagonal entry in a diagonal block");
        acc[e.block][{r, c}] += e.value;
      }
      std::vector<std::vector<Term>> out(blocks_.size());
      for (std::size_t k = 0; k < acc.size(); ++k)
        for (const auto& [rc, v] : acc[k])
          if (v != 0.0) out[k].push_back({rc.first, rc.second, v});
      return out;
    };
    auto obj = per_block(p.objective);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k].objective = obj[k];
    for (int i = 0; i < m_; ++i) {
      auto parts = per_block(p.constraints[i]);
      for (std::size_t k = 0; k < blocks_.size(); ++k)
        if (!parts[k].empty()) blocks_[k].parts.emplace_back(i, std::move(parts[k]));
    }
    C_ = zeros();
    for (std::size_t k = 0; k < blocks_.size(); ++k) term_add(blocks_[k], C_[k], blocks_[k].objective, 1.0);
  }

  SdpSolution run();

 private:
  Blocks zeros() const {
    Blocks z;
    for (const auto& b : blocks_) z.push_back(b.diag ? MatrixXd::Zero(b.n, 1) : MatrixXd::Zero(b.n, b.n));
    return z;
  }

  VectorXd apply_A(const Blocks& x) const {
    VectorXd out = VectorXd::Zero(m_);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      for (const auto& [i, t] : blocks_[k].parts) out(i) += term_inner(blocks_[k], t, x[k]);
    return out;
  }

  Blocks apply_At(const VectorXd& y) const {
    Blocks out = zeros();
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      for (const auto& [i, t] : blocks_[k].parts) term_add(blocks_[k], out[k], t, y(i));
    return out;
  }

  double constraint_norm(const Block& b, const std::vector<Term>& t) const {
    double s = 0.0;
    for (const auto& e : t) s += (e.r == e.c || b.diag ? 1.0 : 2.0) * e.v * e.v;
    return std::sqrt(s);
  }

  void initial_point(Blocks& x, Blocks& z, VectorXd& y) const {
    x = zeros();
    z = zeros();
    y = VectorXd::Zero(m_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      const double n = b.n;
      double xi = std::max(10.0, std::sqrt(n));
      double eta = std::max(10.0, std::sqrt(n));
      double cnorm = constraint_norm(b, b.objective);
      eta = std::max(eta, cnorm);
      for (const auto& [i, t] : b.parts) {
        double an = constraint_norm(b, t);
        xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + an));
        eta = std::max(eta, an);
      }
      if (b.diag) {
        x[k].setConstant(xi);
        z[k].setConstant(eta);
      } else {
        x[k] = xi * MatrixXd::Identity(b.n, b.n);
        z[k] = eta * MatrixXd::Identity(b.n, b.n);
      }
    }
  }

  bool compute_scaling(const Blocks& x, const Blocks& z, std::vector<Scaling>& sc) const {
    sc.resize(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      Scaling& s = sc[k];
      if (b.diag) {
        if ((x[k].array() <= 0).any() || (z[k].array() <= 0).any()) return false;
        s.W = (x[k].array() / z[k].array()).sqrt();
        s.sv = (x[k].array() * z[k].array()).sqrt();
        continue;
      }
      Eigen::LLT<MatrixXd> lx(x[k]), lz(z[k]);
      if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
      MatrixXd L = lx.matrixL(), R = lz.matrixL();
      const MatrixXd I = MatrixXd::Identity(b.n, b.n);
      s.Linv = L.triangularView<Eigen::Lower>().solve(I);
      s.Rinv = R.triangularView<Eigen::Lower>().solve(I);
      Eigen::JacobiSVD<MatrixXd> svd(R.transpose() * L, Eigen::ComputeFullU | Eigen::ComputeFullV);
      s.sv = svd.singularValues();
      if ((s.sv.array() <= 0).any()) return false;
      const VectorXd isq = s.sv.array().rsqrt();
      const VectorXd sq = s.sv.array().sqrt();
      s.G = L * svd.matrixV() * isq.asDiagonal();
      s.Ginv = sq.asDiagonal() * svd.matrixV().transpose() * s.Linv;
      s.W = s.G * s.G.transpose();
      s.W = 0.5 * (s.W + s.W.transpose());
    }
    return true;
  }

  MatrixXd schur(const std::vector<Scaling>& sc) const {
    MatrixXd M = MatrixXd::Zero(m_, m_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      const MatrixXd& W = sc[k].W;
      if (b.diag) {
        std::vector<std::vector<std::pair<int, double>>> by_row(b.n);
        for (const auto& [i, t] : b.parts)
          for (const auto& e : t) by_row[e.r].emplace_back(i, e.v);
        for (int r = 0; r < b.n; ++r)
          for (const auto& [i, vi] : by_row[r])
            for (const auto& [j, vj] : by_row[r]) M(i, j) += vi * vj * W(r, 0) * W(r, 0);
        continue;
      }
      MatrixXd S(b.n, b.n), T(b.n, b.n);
      for (std::size_t pj = 0; pj < b.parts.size(); ++pj) {
        const auto& [j, tj] = b.parts[pj];
        S.setZero();
        for (const auto& e : tj) {
          const double v = e.r == e.c ? 0.5 * e.v : e.v;
          S.noalias() += v * W.col(e.r) * W.row(e.c);
        }
        T = S + S.transpose();
        for (std::size_t pi = pj; pi < b.parts.size(); ++pi) {
          const auto& [i, ti] = b.parts[pi];
          const double val = term_inner(b, ti, T);
          M(i, j) += val;
          if (i != j) M(j, i) += val;
        }
      }
    }
    return M;
  }

  // Applies W . W per block.
  Blocks wxw(const std::vector<Scaling>& sc, const Blocks& r) const {
    Blocks out(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (blocks_[k].diag) {
        out[k] = sc[k].W.cwiseProduct(r[k]).cwiseProduct(sc[k].W);
      } else {
        out[k] = sc[k].W * r[k] * sc[k].W;
        out[k] = 0.5 * (out[k] + out[k].transpose());
      }
    }
    return out;
  }

  SdpOptions opt_;
  int m_ = 0;
  int dim_ = 0;
  std::vector<Block> blocks_;
  VectorXd b_;
  Blocks C_;
};

struct Factorized {
  Eigen::LLT<MatrixXd> llt;
  Eigen::LDLT<MatrixXd> ldlt;
  bool use_llt = true;
  VectorXd solve(const VectorXd& r) const {
    if (use_llt) return llt.solve(r);
    return ldlt.solve(r);
  }
};

bool factorize(MatrixXd M, Factorized& f) {
  double scale = M.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;
  for (double reg : {1e-15, 1e-13, 1e-11, 1e-9}) {
    MatrixXd Mr = M;
    Mr.diagonal().array() += reg * scale;
    f.llt.compute(Mr);
    if (f.llt.info() == Eigen::Success) {
      f.use_llt = true;
      return true;
    }
  }
  f.ldlt.compute(M);
  f.use_llt = false;
  return f.ldlt.info() == Eigen::Success;
}

SdpSolution Solver::run() {
  Blocks X, Z;
  VectorXd y;
  initial_point(X, Z, y);
  const double bnorm = b_.norm();
  const double cnorm = frob(C_);

  SdpSolution best;
  double best_score = std::numeric_limits<double>::infinity();
  auto record = [&](SdpSolution& s, const Blocks& x, const Blocks& z, const VectorXd& yy) {
    s.X.clear();
    s.Z.clear();
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k].diag) {
        s.X.push_back(MatrixXd(x[k].col(0).asDiagonal()));
        s.Z.push_back(MatrixXd(z[k].col(0).asDiagonal()));
      } else {
        s.X.push_back(x[k]);
        s.Z.push_back(z[k]);
      }
    }
    s.y = yy;
  };

  std::vector<Scaling> sc;
  for (int it = 0; it <= opt_.max_iterations; ++it) {
    Blocks Atyv = apply_At(y);
    Blocks Rd(C_.size());
    for (std::size_t k = 0; k < C_.size(); ++k) Rd[k] = C_[k] - Atyv[k] + Z[k];
    const VectorXd AX = apply_A(X);
    const VectorXd rp = b_ - AX;
    const double pobj = dot(C_, X), dobj = b_.dot(y), xz = dot(X, Z);
    const double pinf = rp.norm() / (1.0 + bnorm);
    const double dinf = frob(Rd) / (1.0 + cnorm);
    const double gap = std::max(std::abs(pobj - dobj), xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (opt_.verbose)
      std::fprintf(stderr, "it %3d pobj % .10e dobj % .10e gap %.2e pinf %.2e dinf %.2e\n", it, pobj,
                   dobj, gap, pinf, dinf);

    const double score = std::max({pinf, dinf, gap});
    if (score < best_score) {
      best_score = score;
      best.primal_value = pobj;
      best.dual_value = dobj;
      best.gap = gap;
      best.primal_infeasibility = pinf;
      best.dual_infeasibility = dinf;
      best.iterations = it;
      record(best, X, Z, y);
    }
    if (pinf < opt_.tol && dinf < opt_.tol && gap < opt_.tol) {
      best.status = SolveStatus::optimal;
      return best;
    }
    // Farkas-type certificates from the current iterate.
    if (dobj < 0) {
      double resid = 0.0;
      for (std::size_t k = 0; k < C_.size(); ++k) resid += (Atyv[k] - Z[k]).squaredNorm();
      if (std::sqrt(resid) <= opt_.infeasibility_tol * (-dobj) && -dobj > 1e-6 * (1.0 + bnorm)) {
        SdpSolution s;
        s.status = SolveStatus::primal_infeasible;
        s.primal_value = pobj;
        s.dual_value = dobj;
        s.gap = gap;
        s.primal_infeasibility = pinf;
        s.dual_infeasibility = dinf;
        s.iterations = it;
        record(s, X, Z, y);
        return s;
      }
    }
    if (pobj > 0 && AX.norm() <= opt_.infeasibility_tol * pobj && pobj > 1e-6 * (1.0 + cnorm)) {
      SdpSolution s;
      s.status = SolveStatus::dual_infeasible;
      s.primal_value = pobj;
      s.dual_value = dobj;
      s.gap = gap;
      s.primal_infeasibility = pinf;
      s.dual_infeasibility = dinf;
      s.iterations = it;
      record(s, X, Z, y);
      return s;
    }
    if (it == opt_.max_iterations) break;

    if (!compute_scaling(X, Z, sc)) {
      if (opt_.verbose) std::fprintf(stderr, "stop: iterate lost definiteness\n");
      break;
    }
    const MatrixXd M = schur(sc);
    Factorized fac;
    if (!factorize(M, fac)) {
      if (opt_.verbose) std::fprintf(stderr, "stop: Schur complement factorization failed\n");
      break;
    }
    const VectorXd base_rhs = apply_A(wxw(sc, Rd)) - rp;
    const double mu = xz / dim_;

    auto direction = [&](const Blocks& Rc, Blocks& dX, Blocks& dZ, VectorXd& dy) {
      const VectorXd rhs = apply_A(Rc) + base_rhs;
      dy = fac.solve(rhs);
      for (int refine = 0; refine < 2; ++refine) dy += fac.solve(rhs - M * dy);
      dZ = apply_At(dy);
      for (std::size_t k = 0; k < dZ.size(); ++k) dZ[k] -= Rd[k];
      Blocks t = wxw(sc, dZ);
      dX.resize(Rc.size());
      for (std::size_t k = 0; k < Rc.size(); ++k) dX[k] = Rc[k] - t[k];
    };
    auto steps = [&](const Blocks& dX, const Blocks& dZ, double& ap, double& ad) {
      ap = ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        ap = std::min(ap, max_step(blocks_[k].diag, X[k], sc[k].Linv, dX[k]));
        ad = std::min(ad, max_step(blocks_[k].diag, Z[k], sc[k].Rinv, dZ[k]));
      }
    };

    // Predictor.
    Blocks Rc(X.size());
    for (std::size_t k = 0; k < X.size(); ++k) Rc[k] = -X[k];
    Blocks dXa, dZa;
    VectorXd dya;
    direction(Rc, dXa, dZa, dya);
    double ap, ad;
    steps(dXa, dZa, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0.0;
    for (std::size_t k = 0; k < X.size(); ++k)
      xz_aff += (X[k] + ap * dXa[k]).cwiseProduct(Z[k] + ad * dZa[k]).sum();
    const double sigma = std::clamp(std::pow(std::max(xz_aff, 0.0) / xz, 3.0), 0.0, 1.0);

    // Corrector: symmetrized complementarity in the scaled space.
    for (std::size_t k = 0; k < X.size(); ++k) {
      const Scaling& s = sc[k];
      if (blocks_[k].diag) {
        VectorXd r = (sigma * mu - s.sv.array().square() - dXa[k].col(0).array() * dZa[k].col(0).array()) /
                     s.sv.array();
        Rc[k] = (s.W.col(0).array().sqrt() * r.array() * s.W.col(0).array().sqrt()).matrix();
        continue;
      }
      MatrixXd dxs = s.Ginv * dXa[k] * s.Ginv.transpose();
      MatrixXd dzs = s.G.transpose() * dZa[k] * s.G;
      MatrixXd rhs = -(0.5 * (dxs * dzs + (dxs * dzs).transpose()));
      const int n = blocks_[k].n;
      for (int i = 0; i < n; ++i) rhs(i, i) += sigma * mu - s.sv(i) * s.sv(i);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rhs(i, j) *= 2.0 / (s.sv(i) + s.sv(j));
      Rc[k] = s.G * rhs * s.G.transpose();
      Rc[k] = 0.5 * (Rc[k] + Rc[k].transpose());
    }
    Blocks dX, dZ;
    VectorXd dy;
    direction(Rc, dX, dZ, dy);
    steps(dX, dZ, ap, ad);
    const double tau = opt_.step_fraction;
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    for (std::size_t k = 0; k < X.size(); ++k) {
      X[k] += ap * dX[k];
      Z[k] += ad * dZ[k];
      if (!blocks_[k].diag) {
        X[k] = 0.5 * (X[k] + X[k].transpose());
        Z[k] = 0.5 * (Z[k] + Z[k].transpose());
      }
    }
    y += ad * dy;
  }
  best.status = SolveStatus::max_iterations;
  return best;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  Solver s(problem, options);
  return s.run();
}

}  // namespace ctxrand
