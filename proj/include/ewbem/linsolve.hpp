#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "ewbem/types.hpp"

namespace ewbem {

/// y = Op(x). Implementations must not alias x and y.
using LinearOperator = std::function<void(const VectorXc& x, VectorXc& y)>;

/// Wraps a dense matrix as a LinearOperator (the matrix must outlive it).
LinearOperator dense_operator(const MatrixXc& A);

struct SolveStats {
  int k = 0;
  Complex omega{};
  int iterations = 0;
  double initial_residual = 0.0;  // ||b - A x0|| / ||b||
  double final_residual = 0.0;    // true residual of the returned x
  double seconds = 0.0;
  bool converged = false;
};

struct GmresOptions {
  double tol = 1e-5;
  int restart = 60;
  int maxiter = 1000;
};

struct GmresResult {
  VectorXc x;
  SolveStats stats;
  /// Arnoldi residual estimates ||r_j|| / ||b||, one list per restart cycle.
  std::vector<std::vector<double>> cycle_residuals;
};

/// Restarted GMRES with right preconditioning, so the minimized residual is
/// that of the original system. Convergence is declared on the recomputed true
/// residual ||b - A x|| <= tol ||b||. On failure the best iterate is returned
/// with stats.converged = false.
GmresResult gmres(const LinearOperator& apply_A, const VectorXc& b, const VectorXc& x0, const GmresOptions& options,
                  const LinearOperator& precond = {});

/// Inverse of the 3x3 diagonal blocks of A (one per collocation point).
class BlockDiagonalPreconditioner {
 public:
  explicit BlockDiagonalPreconditioner(const MatrixXc& A);

  void apply(const VectorXc& x, VectorXc& y) const;
  LinearOperator as_operator() const;

  /// Blocks that were numerically singular and replaced by the identity.
  int fallback_blocks() const { return fallback_; }

 private:
  std::vector<Mat3c> inverse_;
  int fallback_ = 0;
};

/// Most recent solutions first, at most `capacity` of them.
class SolutionHistory {
 public:
  explicit SolutionHistory(std::size_t capacity);

  void push(VectorXc solution);
  void clear() { columns_.clear(); }

  std::size_t size() const { return columns_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return columns_.empty(); }
  /// i = 0 is the latest solution a_{k-1}.
  const VectorXc& operator[](std::size_t i) const { return columns_[i]; }

 private:
  std::size_t capacity_;
  std::deque<VectorXc> columns_;
};

struct ExtrapolatedGuess {
  VectorXc x0;
  std::vector<Complex> coefficients;  // s, aligned with the kept columns
  std::size_t kept_columns = 0;
  bool fell_back = false;  // no usable column: x0 is the latest solution
};

/// Least-squares extrapolation from previous solutions: with X the history
/// matrix and Y = A X, returns x0 = X s where s minimizes ||Y s - b||. Solved
/// through a thin QR of Y (modified Gram-Schmidt with reorthogonalization),
/// s = R^{-1} Q^H b. Columns whose orthogonalized norm drops below 1e-10 of the
/// largest Y column are discarded. Throws SolveError on an empty history.
ExtrapolatedGuess sem_initial_guess(const SolutionHistory& history, const LinearOperator& apply_A,
                                    const VectorXc& b);

}  // namespace ewbem
