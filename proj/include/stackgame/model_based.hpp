#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "errors.hpp"
#include "game_model.hpp"
#include "linalg.hpp"

namespace stackgame {

struct SolverConfig {
  double tol = 1e-10;
  int max_iters = 10000;
};

struct TeamSolution {
  MatrixXd P;       // joint value: min over both players of the leader's cost is x0' P x0
  GainPair gains;   // team-optimal (K1, K2)
  int iterations = 0;
  double residual = 0.0;  // Frobenius defect of the closed-loop Riccati identity
};

struct FollowerValue {
  MatrixXd Pv;  // follower's value under team play
  double residual = 0.0;
};

namespace detail {

inline MatrixXd stacked_inputs(const ValidatedGame& g) {
  MatrixXd B(g.n(), g.m1() + g.m2());
  B << g.B1(), g.B2();
  return B;
}

inline MatrixXd stacked_weights(const ValidatedGame& g) {
  MatrixXd R = MatrixXd::Zero(g.m1() + g.m2(), g.m1() + g.m2());
  R.topLeftCorner(g.m1(), g.m1()) = g.R11();
  R.bottomRightCorner(g.m2(), g.m2()) = g.R12();
  return R;
}

}  // namespace detail

// One sweep of the joint value iteration in completed-square form:
//   P+ = Q1 + g A'PA - g^2 A'PB (R + g B'PB)^{-1} B'PA,  B = [B1 B2], R = blkdiag(R11, R12).
inline MatrixXd team_vi_step(const ValidatedGame& g, const MatrixXd& P) {
  const MatrixXd B = detail::stacked_inputs(g);
  const MatrixXd R = detail::stacked_weights(g);
  const double gm = g.gamma();
  const MatrixXd G = R + gm * B.transpose() * P * B;
  const MatrixXd X = solve_invertible(G, B.transpose() * P * g.A(), "team_vi_step");
  return symmetrize(g.Q1() + gm * g.A().transpose() * P * g.A() -
                    gm * gm * g.A().transpose() * P * B * X);
}

// Gains for a given value matrix P:
//   F1 = B1'P [I - g B2 (Rb + g B2'PB2)^{-1} B2'P],  K1 = g (Ra + g F1 B1)^{-1} F1 A
// and symmetrically for K2. Ra weighs u, Rb weighs v.
inline GainPair gains_from_value(const MatrixXd& P, const ValidatedGame& g, const MatrixXd& Ra,
                                 const MatrixXd& Rb) {
  const double gm = g.gamma();
  const MatrixXd I = MatrixXd::Identity(g.n(), g.n());
  const MatrixXd G2 = Rb + gm * g.B2().transpose() * P * g.B2();
  const MatrixXd F1 =
      g.B1().transpose() * P * (I - gm * g.B2() * solve_invertible(G2, g.B2().transpose() * P, "gains_from_value: F1"));
  const MatrixXd G1 = Ra + gm * g.B1().transpose() * P * g.B1();
  const MatrixXd F2 =
      g.B2().transpose() * P * (I - gm * g.B1() * solve_invertible(G1, g.B1().transpose() * P, "gains_from_value: F2"));
  GainPair k;
  k.K1 = gm * solve_invertible(Ra + gm * F1 * g.B1(), F1 * g.A(), "gains_from_value: K1");
  k.K2 = gm * solve_invertible(Rb + gm * F2 * g.B2(), F2 * g.A(), "gains_from_value: K2");
  return k;
}

inline MatrixXd closed_loop(const ValidatedGame& g, const GainPair& k) {
  return g.A() - g.B1() * k.K1 - g.B2() * k.K2;
}

// Defect of P against Q1 + g Acl'PAcl + K1'R11K1 + K2'R12K2.
inline double team_are_residual(const ValidatedGame& g, const MatrixXd& P, const GainPair& k) {
  const MatrixXd Acl = closed_loop(g, k);
  const MatrixXd rhs = g.Q1() + g.gamma() * Acl.transpose() * P * Acl + k.K1.transpose() * g.R11() * k.K1 +
                       k.K2.transpose() * g.R12() * k.K2;
  return (P - rhs).norm();
}

inline TeamSolution solve_team_optimal(const ValidatedGame& g, const SolverConfig& cfg = {}) {
  MatrixXd P = MatrixXd::Zero(g.n(), g.n());
  int iterations = 0;
  bool converged = false;
  for (int i = 0; i < cfg.max_iters; ++i) {
    const MatrixXd Pn = team_vi_step(g, P);
    const double delta = (Pn - P).norm();
    P = Pn;
    ++iterations;
    if (delta <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw MaxIterationsExceeded("solve_team_optimal: no fixed point within " + std::to_string(cfg.max_iters) +
                                " sweeps (is (A,[B1 B2]) stabilizable for this gamma?)");
  TeamSolution s;
  s.P = P;
  s.gains = gains_from_value(P, g, g.R11(), g.R12());
  s.iterations = iterations;
  s.residual = team_are_residual(g, P, s.gains);
  const double rho = spectral_radius(closed_loop(g, s.gains));
  if (std::sqrt(g.gamma()) * rho >= 1.0)
    throw UnstableClosedLoop("solve_team_optimal: converged value does not stabilize, sqrt(gamma)*rho = " +
                             std::to_string(std::sqrt(g.gamma()) * rho));
  return s;
}

// Follower's value of team play: Pv = Q2 + g Acl'PvAcl + K1'R21K1 + K2'R22K2.
// Fixed-point sweeps first; direct vectorized solve if the budget runs out.
inline FollowerValue solve_follower_value(const ValidatedGame& g, const GainPair& k, const SolverConfig& cfg = {}) {
  const MatrixXd Acl = closed_loop(g, k);
  const double gm = g.gamma();
  if (std::sqrt(gm) * spectral_radius(Acl) >= 1.0)
    throw UnstableClosedLoop("solve_follower_value: sqrt(gamma)*rho(A - B1K1 - B2K2) >= 1");
  const MatrixXd C =
      g.Q2() + k.K1.transpose() * g.R21() * k.K1 + k.K2.transpose() * g.R22() * k.K2;
  MatrixXd Pv = MatrixXd::Zero(g.n(), g.n());
  bool converged = false;
  for (int i = 0; i < cfg.max_iters; ++i) {
    const MatrixXd Pn = C + gm * Acl.transpose() * Pv * Acl;
    const double delta = (Pn - Pv).norm();
    Pv = Pn;
    if (delta <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    const int n = g.n();
    const MatrixXd At = Acl.transpose();
    const MatrixXd lhs = MatrixXd::Identity(n * n, n * n) - gm * kron(At, At);
    const MatrixXd v = solve_invertible(lhs, C.reshaped(n * n, 1), "solve_follower_value");
    Pv = v.reshaped(n, n);
  }
  Pv = symmetrize(Pv);
  FollowerValue fv;
  fv.Pv = Pv;
  fv.residual = (Pv - (C + gm * Acl.transpose() * Pv * Acl)).norm();
  return fv;
}

// Shared solver for the incentive relation M'G = C: exact when G' is
// square-invertible, minimum-norm least squares otherwise, with the residual
// gate that turns dimension-infeasible instances into a diagnosable error.
inline MatrixXd incentive_from_relation(const MatrixXd& G, const MatrixXd& C) {
  const MatrixXd Gt = G.transpose();  // n x m1
  MatrixXd M;
  bool solved_exactly = false;
  if (Gt.rows() == Gt.cols()) {
    Eigen::FullPivLU<MatrixXd> lu(Gt);
    if (lu.isInvertible()) {
      M = lu.solve(C.transpose());
      solved_exactly = true;
    }
  }
  if (!solved_exactly) M = min_norm_lstsq(Gt, C.transpose());
  const double residual = (M.transpose() * G - C).norm();
  const double gate = 1e-8 * (1.0 + C.norm());
  if (residual > gate)
    throw IncentiveInfeasible("incentive relation M'G = C unsolvable: residual " + std::to_string(residual) +
                              " exceeds " + std::to_string(gate) +
                              " (no exact incentive matrix for these dimensions/weights)");
  return M;
}

// Theorem-level incentive matrix from G = R21 K1 - g B1'Pv Acl and
// C = g B2'Pv Acl - R22 K2.
inline MatrixXd incentive_matrix(const ValidatedGame& g, const GainPair& k, const FollowerValue& fv) {
  const MatrixXd Acl = closed_loop(g, k);
  const double gm = g.gamma();
  const MatrixXd G = g.R21() * k.K1 - gm * g.B1().transpose() * fv.Pv * Acl;
  const MatrixXd C = gm * g.B2().transpose() * fv.Pv * Acl - g.R22() * k.K2;
  return incentive_from_relation(G, C);
}

// Follower's best response to the announced incentive u = u^t + M (v - v^t).
// Substituting u leaves a single-player LQR with a cross term:
//   stage  x'Q_M x + 2 x'S v + v'R_2M v,   dynamics  A_M x + B_M v,
// with W = K1 - M K2, Q_M = Q2 + W'R21W, S = -W'R21M, R_2M = R22 + M'R21M,
// A_M = A - B1 W, B_M = B1 M + B2. Value iteration from zero, then
//   K2* = (R_2M + g B_M'P B_M)^{-1} (S' + g B_M'P A_M),  v = -K2* x.
inline MatrixXd follower_best_response(const ValidatedGame& g, const IncentivePolicy& pol,
                                       const SolverConfig& cfg = {}) {
  const MatrixXd& M = pol.M;
  if (M.rows() != g.m1() || M.cols() != g.m2()) throw DimensionMismatch("follower_best_response: M must be m1 x m2");
  const MatrixXd W = pol.gains.K1 - M * pol.gains.K2;
  const MatrixXd QM = symmetrize(g.Q2() + W.transpose() * g.R21() * W);
  const MatrixXd S = -W.transpose() * g.R21() * M;
  const MatrixXd R2M = symmetrize(g.R22() + M.transpose() * g.R21() * M);
  const MatrixXd AM = g.A() - g.B1() * W;
  const MatrixXd BM = g.B1() * M + g.B2();
  const double gm = g.gamma();

  MatrixXd P = MatrixXd::Zero(g.n(), g.n());
  bool converged = false;
  for (int i = 0; i < cfg.max_iters; ++i) {
    const MatrixXd L = R2M + gm * BM.transpose() * P * BM;
    const MatrixXd T = S.transpose() + gm * BM.transpose() * P * AM;
    const MatrixXd X = solve_invertible(L, T, "follower_best_response");
    const MatrixXd Pn = symmetrize(QM + gm * AM.transpose() * P * AM - T.transpose() * X);
    const double delta = (Pn - P).norm();
    P = Pn;
    if (delta <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw MaxIterationsExceeded("follower_best_response: value iteration exceeded " +
                                std::to_string(cfg.max_iters) + " sweeps");
  const MatrixXd L = R2M + gm * BM.transpose() * P * BM;
  const MatrixXd T = S.transpose() + gm * BM.transpose() * P * AM;
  return solve_invertible(L, T, "follower_best_response: K2*");
}

// Exact discounted value of the linear policy pair for one player's weights.
inline MatrixXd policy_value(const ValidatedGame& g, const GainPair& k, const CostWeights& w) {
  const MatrixXd Acl = closed_loop(g, k);
  if (std::sqrt(g.gamma()) * spectral_radius(Acl) >= 1.0)
    throw UnstableClosedLoop("policy_value: closed loop is not stable in the discounted sense");
  const MatrixXd C = w.Q + k.K1.transpose() * w.Ru * k.K1 + k.K2.transpose() * w.Rv * k.K2;
  return discounted_lyapunov(Acl, C, g.gamma());
}

// Action-value matrix of a value matrix P under the given stage weights:
//   H = blkdiag(Q, Ru, Rv) + g [A B1 B2]' P [A B1 B2].
inline MatrixXd build_H(const ValidatedGame& g, const MatrixXd& P, const CostWeights& w) {
  const int l = g.l();
  MatrixXd N(g.n(), l);
  N << g.A(), g.B1(), g.B2();
  MatrixXd H = MatrixXd::Zero(l, l);
  H.topLeftCorner(g.n(), g.n()) = w.Q;
  H.block(g.n(), g.n(), g.m1(), g.m1()) = w.Ru;
  H.bottomRightCorner(g.m2(), g.m2()) = w.Rv;
  H += g.gamma() * N.transpose() * P * N;
  return symmetrize(H);
}

}  // namespace stackgame
