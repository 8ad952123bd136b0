#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "errors.hpp"
#include "linalg.hpp"

namespace stackgame {

// Two-player game on x' = A x + B1 u + B2 v. Player 1 (leader) pays
// x'Q1x + u'R11u + v'R12v per stage, player 2 (follower) x'Q2x + u'R21u + v'R22v,
// both discounted by gamma. Policies are u = -K1 x, v = -K2 x everywhere.
struct GameSpec {
  MatrixXd A, B1, B2;
  MatrixXd Q1, Q2;
  MatrixXd R11, R12;  // leader's weights on u, v
  MatrixXd R21, R22;  // follower's weights on u, v
  double gamma = 0.9;
  VectorXd x0;
};

struct GainPair {
  MatrixXd K1;  // m1 x n
  MatrixXd K2;  // m2 x n
};

// Leader's announced incentive: u = u^t + M (v - v^t) with u^t = -K1 x,
// v^t = -K2 x. At v = v^t this reduces exactly to the team action.
struct IncentivePolicy {
  GainPair gains;
  MatrixXd M;  // m1 x m2

  VectorXd realized_u(const VectorXd& x, const VectorXd& v) const {
    return -gains.K1 * x + M * (v + gains.K2 * x);
  }
};

namespace detail {

inline void require_shape(const MatrixXd& X, int rows, int cols, const std::string& name) {
  if (X.rows() != rows || X.cols() != cols)
    throw DimensionMismatch(name + " must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                            std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
}

inline MatrixXd checked_weight(const MatrixXd& X, const std::string& name, bool positive_definite) {
  if (!is_symmetric(X, 1e-12)) throw NotSymmetric(name + " is not symmetric (tolerance 1e-12)");
  const MatrixXd S = symmetrize(X);
  const double lambda_min = min_eigenvalue(S);
  if (positive_definite) {
    if (lambda_min <= 1e-10) throw NotPositiveDefinite(name);
  } else {
    if (lambda_min < -1e-10) throw NotPositiveDefinite(name);
  }
  return S;
}

}  // namespace detail

class ValidatedGame {
 public:
  explicit ValidatedGame(GameSpec spec) : spec_(std::move(spec)) {
    n_ = static_cast<int>(spec_.A.rows());
    if (n_ < 1 || spec_.A.cols() != n_) throw DimensionMismatch("A must be square and nonempty");
    if (spec_.B1.rows() != n_ || spec_.B1.cols() < 1) throw DimensionMismatch("B1 must have n rows and at least one column");
    if (spec_.B2.rows() != n_ || spec_.B2.cols() < 1) throw DimensionMismatch("B2 must have n rows and at least one column");
    m1_ = static_cast<int>(spec_.B1.cols());
    m2_ = static_cast<int>(spec_.B2.cols());
    detail::require_shape(spec_.Q1, n_, n_, "Q1");
    detail::require_shape(spec_.Q2, n_, n_, "Q2");
    detail::require_shape(spec_.R11, m1_, m1_, "R11");
    detail::require_shape(spec_.R12, m2_, m2_, "R12");
    detail::require_shape(spec_.R21, m1_, m1_, "R21");
    detail::require_shape(spec_.R22, m2_, m2_, "R22");
    if (spec_.x0.size() != n_) throw DimensionMismatch("x0 must have length n");
    spec_.Q1 = detail::checked_weight(spec_.Q1, "Q1", false);
    spec_.Q2 = detail::checked_weight(spec_.Q2, "Q2", false);
    spec_.R11 = detail::checked_weight(spec_.R11, "R11", true);
    spec_.R12 = detail::checked_weight(spec_.R12, "R12", true);
    spec_.R21 = detail::checked_weight(spec_.R21, "R21", true);
    spec_.R22 = detail::checked_weight(spec_.R22, "R22", true);
    if (!(spec_.gamma > 0.0 && spec_.gamma < 1.0))
      throw DiscountOutOfRange("gamma must lie in (0,1), got " + std::to_string(spec_.gamma));
  }

  int n() const { return n_; }
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int l() const { return n_ + m1_ + m2_; }

  const MatrixXd& A() const { return spec_.A; }
  const MatrixXd& B1() const { return spec_.B1; }
  const MatrixXd& B2() const { return spec_.B2; }
  const MatrixXd& Q1() const { return spec_.Q1; }
  const MatrixXd& Q2() const { return spec_.Q2; }
  const MatrixXd& R11() const { return spec_.R11; }
  const MatrixXd& R12() const { return spec_.R12; }
  const MatrixXd& R21() const { return spec_.R21; }
  const MatrixXd& R22() const { return spec_.R22; }
  double gamma() const { return spec_.gamma; }
  const VectorXd& x0() const { return spec_.x0; }
  const GameSpec& spec() const { return spec_; }

 private:
  GameSpec spec_;
  int n_, m1_, m2_;
};

inline ValidatedGame validate_game(GameSpec spec) { return ValidatedGame(std::move(spec)); }

// (Q, R_u, R_v) triple shared by cost evaluation, the oracle and the learner.
struct CostWeights {
  MatrixXd Q, Ru, Rv;
};

inline CostWeights leader_weights(const ValidatedGame& g) { return {g.Q1(), g.R11(), g.R12()}; }
inline CostWeights follower_weights(const ValidatedGame& g) { return {g.Q2(), g.R21(), g.R22()}; }

inline double one_step_cost(const ValidatedGame& g, int player, const VectorXd& x, const VectorXd& u,
                            const VectorXd& v) {
  if (player != 1 && player != 2) throw DimensionMismatch("player must be 1 or 2");
  if (x.size() != g.n() || u.size() != g.m1() || v.size() != g.m2())
    throw DimensionMismatch("one_step_cost: vector lengths must be (n, m1, m2)");
  if (player == 1) return x.dot(g.Q1() * x) + u.dot(g.R11() * u) + v.dot(g.R12() * v);
  return x.dot(g.Q2() * x) + u.dot(g.R21() * u) + v.dot(g.R22() * v);
}

inline double one_step_cost(const CostWeights& w, const VectorXd& x, const VectorXd& u, const VectorXd& v) {
  return x.dot(w.Q * x) + u.dot(w.Ru * u) + v.dot(w.Rv * v);
}

}  // namespace stackgame
