#include "ewbem/linsolve.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace ewbem {

LinearOperator dense_operator(const MatrixXc& A) {
  return [&A](const VectorXc& x, VectorXc& y) { y.noalias() = A * x; };
}

namespace {

// Complex Givens rotation zeroing b in (a, b).
void make_givens(Complex a, Complex b, double& c, Complex& s) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (na == 0.0) {
    c = 0.0;
    s = std::conj(b) / nb;
  } else {
    const double scale = std::hypot(na, nb);
    c = na / scale;
    s = (a / na) * std::conj(b) / scale;
  }
}

}  // namespace

GmresResult gmres(const LinearOperator& apply_A, const VectorXc& b, const VectorXc& x0, const GmresOptions& options,
                  const LinearOperator& precond) {
  const auto start = std::chrono::steady_clock::now();
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw SolveError("gmres tolerance must lie in (0, 1)");
  if (options.restart < 1 || options.maxiter < 0) throw SolveError("gmres restart/maxiter out of range");
  const Eigen::Index n = b.size();
  if (x0.size() != n) throw SolveError("gmres initial guess has wrong length");

  GmresResult out;
  out.x = x0;
  const double bnorm = b.norm();
  auto finish = [&](double rel) {
    out.stats.final_residual = rel;
    out.stats.converged = rel <= options.tol;
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  if (bnorm == 0.0) {
    out.x.setZero();
    out.stats.initial_residual = 0.0;
    return finish(0.0);
  }

  VectorXc r(n), w(n), z(n);
  apply_A(out.x, w);
  r = b - w;
  double beta = r.norm();
  out.stats.initial_residual = beta / bnorm;
  const double target = options.tol * bnorm;
  if (beta <= target) return finish(beta / bnorm);

  const int m = options.restart;
  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<Complex> sn(m);
  Eigen::VectorXcd g(m + 1);

  int total = 0;
  VectorXc best = out.x;
  double best_res = beta;

  while (total < options.maxiter) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    std::vector<double> history{beta / bnorm};
    int j = 0;
    for (; j < m && total < options.maxiter; ++j) {
      if (precond) {
        precond(V.col(j), z);
        apply_A(z, w);
      } else {
        apply_A(V.col(j), w);
      }
      ++total;
      // Modified Gram-Schmidt, repeated once for stability.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const Complex h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      }
      const double hn = w.norm();
      H(j + 1, j) = hn;
      if (hn > 0.0) V.col(j + 1) = w / hn;

      for (int i = 0; i < j; ++i) {
        const Complex t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      make_givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
      H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
      H(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];

      const double est = std::abs(g[j + 1]);
      history.push_back(est / bnorm);
      if (est <= target || hn == 0.0) {
        ++j;
        break;
      }
    }
    out.cycle_residuals.push_back(std::move(history));

    // Update x with the least-squares Krylov correction.
    const Eigen::VectorXcd y =
        H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    VectorXc update = V.leftCols(j) * y;
    if (precond) {
      precond(update, z);
      out.x += z;
    } else {
      out.x += update;
    }
    apply_A(out.x, w);
    r = b - w;
    beta = r.norm();
    if (beta < best_res) {
      best_res = beta;
      best = out.x;
    }
    out.stats.iterations = total;
    if (beta <= target) return finish(beta / bnorm);
  }

  out.x = best;
  out.stats.iterations = total;
  return finish(best_res / bnorm);
}

BlockDiagonalPreconditioner::BlockDiagonalPreconditioner(const MatrixXc& A) {
  if (A.rows() != A.cols() || A.rows() % 3 != 0) {
    throw SolveError("block-diagonal preconditioner needs a square matrix with size divisible by 3");
  }
  const Eigen::Index nb = A.rows() / 3;
  inverse_.resize(static_cast<std::size_t>(nb));
  for (Eigen::Index blk = 0; blk < nb; ++blk) {
    const Mat3c block = A.block<3, 3>(3 * blk, 3 * blk);
    Eigen::FullPivLU<Mat3c> lu(block);
    const double scale = block.cwiseAbs().maxCoeff();
    lu.setThreshold(1e-13);
    if (scale == 0.0 || !lu.isInvertible()) {
      inverse_[static_cast<std::size_t>(blk)] = Mat3c::Identity();
      ++fallback_;
      std::clog << "warning: singular 3x3 diagonal block " << blk << ", using identity\n";
    } else {
      inverse_[static_cast<std::size_t>(blk)] = lu.inverse();
    }
  }
}

void BlockDiagonalPreconditioner::apply(const VectorXc& x, VectorXc& y) const {
  y.resize(x.size());
  for (std::size_t blk = 0; blk < inverse_.size(); ++blk) {
    const auto o = static_cast<Eigen::Index>(3 * blk);
    y.segment<3>(o).noalias() = inverse_[blk] * x.segment<3>(o);
  }
}

LinearOperator BlockDiagonalPreconditioner::as_operator() const {
  return [this](const VectorXc& x, VectorXc& y) { apply(x, y); };
}

SolutionHistory::SolutionHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw SolveError("solution history capacity must be >= 1");
}

void SolutionHistory::push(VectorXc solution) {
  if (!columns_.empty() && solution.size() != columns_.front().size()) {
    throw SolveError("solution history vectors must share one length");
  }
  columns_.push_front(std::move(solution));
  if (columns_.size() > capacity_) columns_.pop_back();
}

ExtrapolatedGuess sem_initial_guess(const SolutionHistory& history, const LinearOperator& apply_A,
                                    const VectorXc& b) {
  if (history.empty()) throw SolveError("solution extrapolation needs at least one previous solution");
  const std::size_t K = history.size();
  const Eigen::Index n = b.size();

  std::vector<VectorXc> Y(K, VectorXc(n));
  double largest = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    apply_A(history[i], Y[i]);
    largest = std::max(largest, Y[i].norm());
  }

  ExtrapolatedGuess out;
  if (largest == 0.0) {
    out.x0 = history[0];
    out.fell_back = true;
    return out;
  }

  // Thin QR of the kept columns.
  std::vector<VectorXc> Q;
  std::vector<std::size_t> kept;
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  for (std::size_t i = 0; i < K; ++i) {
    VectorXc q = Y[i];
    const auto col = static_cast<Eigen::Index>(Q.size());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < Q.size(); ++p) {
        const Complex h = Q[p].dot(q);
        R(static_cast<Eigen::Index>(p), col) += h;
        q -= h * Q[p];
      }
    }
    const double qn = q.norm();
    if (qn < 1e-10 * largest) {
      R.col(col).setZero();
      continue;
    }
    R(col, col) = qn;
    Q.push_back(q / qn);
    kept.push_back(i);
  }

  if (kept.empty()) {
    out.x0 = history[0];
    out.fell_back = true;
    return out;
  }

  const auto m = static_cast<Eigen::Index>(kept.size());
  Eigen::VectorXcd qb(m);
  for (Eigen::Index p = 0; p < m; ++p) qb[p] = Q[static_cast<std::size_t>(p)].dot(b);  // Q^H b
  const Eigen::VectorXcd s = R.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(qb);

  out.x0 = VectorXc::Zero(n);
  for (Eigen::Index p = 0; p < m; ++p) {
    out.x0 += s[p] * history[kept[static_cast<std::size_t>(p)]];
    out.coefficients.push_back(s[p]);
  }
  out.kept_columns = kept.size();
  return out;
}

}  // namespace ewbem
