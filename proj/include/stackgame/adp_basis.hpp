#pragma once

#include <string>

#include <Eigen/Dense>

#include "errors.hpp"
#include "linalg.hpp"

namespace stackgame {

inline int theta_size(int l) { return l * (l + 1) / 2; }

// Quadratic monomials of z in row-major upper-triangular order:
// (z1^2, z1 z2, ..., z1 zl, z2^2, ..., zl^2).
inline VectorXd basis_vector(const VectorXd& z) {
  const int l = static_cast<int>(z.size());
  VectorXd out(theta_size(l));
  int idx = 0;
  for (int j = 0; j < l; ++j)
    for (int k = j; k < l; ++k) out(idx++) = z(j) * z(k);
  return out;
}

// Theta(H): diagonal entries in the diagonal slots of the same ordering,
// summed off-diagonal pairs H(j,k) + H(k,j) elsewhere, so that
// z'Hz = basis_vector(z) . theta_pack(H) for every z.
inline VectorXd theta_pack(const MatrixXd& H) {
  if (H.rows() != H.cols()) throw LengthMismatch("theta_pack: H must be square");
  const int l = static_cast<int>(H.rows());
  VectorXd theta(theta_size(l));
  int idx = 0;
  for (int j = 0; j < l; ++j)
    for (int k = j; k < l; ++k) theta(idx++) = (j == k) ? H(j, j) : H(j, k) + H(k, j);
  return theta;
}

inline MatrixXd theta_unpack(const VectorXd& theta, int l) {
  if (theta.size() != theta_size(l))
    throw LengthMismatch("theta_unpack: expected length " + std::to_string(theta_size(l)) + ", got " +
                         std::to_string(theta.size()));
  MatrixXd H(l, l);
  int idx = 0;
  for (int j = 0; j < l; ++j)
    for (int k = j; k < l; ++k) {
      if (j == k) {
        H(j, j) = theta(idx);
      } else {
        H(j, k) = 0.5 * theta(idx);
        H(k, j) = 0.5 * theta(idx);
      }
      ++idx;
    }
  return H;
}

}  // namespace stackgame
