#pragma once

#include <Eigen/Dense>

#include "errors.hpp"

namespace stackgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd symmetrize(const MatrixXd& X) { return 0.5 * (X + X.transpose()); }

inline bool is_symmetric(const MatrixXd& X, double tol = 1e-12) {
  if (X.rows() != X.cols()) return false;
  if (X.size() == 0) return true;
  return (X - X.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline double min_eigenvalue(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double spectral_radius(const MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(A, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// A x = b with an explicit invertibility gate; `what` names the offending
// solve in the error message.
inline MatrixXd solve_invertible(const MatrixXd& A, const MatrixXd& b, const std::string& what) {
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularMatrix(what + ": matrix is numerically singular");
  return lu.solve(b);
}

// Minimum-norm solution of min ||A x - b||_F.
inline MatrixXd min_norm_lstsq(const MatrixXd& A, const MatrixXd& b) {
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
  return cod.solve(b);
}

inline MatrixXd kron(const MatrixXd& A, const MatrixXd& B) {
  MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

// Fixed point of X = C + g A^T X A, iterated from zero; falls back to the
// vectorized direct solve (I - g A^T (x) A^T) vec(X) = vec(C) if the sweep
// budget runs out (useful near the stability margin).
inline MatrixXd discounted_lyapunov(const MatrixXd& A, const MatrixXd& C, double g, double tol = 1e-13,
                                    int max_iters = 200000) {
  const int n = static_cast<int>(A.rows());
  MatrixXd X = MatrixXd::Zero(n, n);
  for (int i = 0; i < max_iters; ++i) {
    MatrixXd Xn = C + g * A.transpose() * X * A;
    const double delta = (Xn - X).norm();
    X = Xn;
    if (delta <= tol) return symmetrize(X);
  }
  const MatrixXd At = A.transpose();
  const MatrixXd lhs = MatrixXd::Identity(n * n, n * n) - g * kron(At, At);
  const MatrixXd rhs = C.reshaped(n * n, 1);
  MatrixXd v = solve_invertible(lhs, rhs, "discounted_lyapunov");
  return symmetrize(v.reshaped(n, n));
}

}  // namespace stackgame
