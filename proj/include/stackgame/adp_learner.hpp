#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adp_basis.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "linalg.hpp"
#include "model_based.hpp"
#include "plant_sim.hpp"

namespace stackgame {

struct QMatrix {
  MatrixXd H;  // symmetric l x l, l = n + m1 + m2
  int n = 0, m1 = 0, m2 = 0;

  int l() const { return n + m1 + m2; }

  MatrixXd xx() const { return H.topLeftCorner(n, n); }
  MatrixXd ux() const { return H.block(n, 0, m1, n); }
  MatrixXd uu() const { return H.block(n, n, m1, m1); }
  MatrixXd uv() const { return H.block(n, n + m1, m1, m2); }
  MatrixXd vx() const { return H.block(n + m1, 0, m2, n); }
  MatrixXd vu() const { return H.block(n + m1, n, m2, m1); }
  MatrixXd vv() const { return H.block(n + m1, n + m1, m2, m2); }
};

inline QMatrix zero_q(int n, int m1, int m2) {
  return {MatrixXd::Zero(n + m1 + m2, n + m1 + m2), n, m1, m2};
}

enum class Excitation { noise, deterministic };

struct LearnerConfig {
  double epsilon = 1e-8;      // threshold on ||theta_{i+1} - theta_i||
  int max_policy_iters = 100;
  int N = 0;                  // 0 resolves to 4 l(l+1)/2
  double sigma1 = 0.05, sigma2 = 0.05;
  std::uint64_t seed = 0;
  double state_sample_radius = 1.0;
  double ridge = 0.0;
  Excitation excitation = Excitation::noise;
};

struct ConvergenceRow {
  int iter = 0;
  double h_delta = 0.0;
  double k1_err = -1.0;  // vs model-based reference; negative means no reference
  double k2_err = -1.0;
};

struct ConvergenceLog {
  std::vector<ConvergenceRow> rows;
};

// K1 = (H_uu - H_uv H_vv^{-1} H_vu)^{-1} (H_ux - H_uv H_vv^{-1} H_vx), and the
// mirrored expression for K2; with u = -K1 x this is the greedy policy of H.
inline GainPair gains_from_H(const QMatrix& q) {
  MatrixXd rhs_v(q.m2, q.m1 + q.n);
  rhs_v << q.vu(), q.vx();
  const MatrixXd sv = solve_invertible(q.vv(), rhs_v, "gains_from_H: H_vv");
  const MatrixXd sv_u = sv.leftCols(q.m1), sv_x = sv.rightCols(q.n);
  MatrixXd rhs_u(q.m1, q.m2 + q.n);
  rhs_u << q.uv(), q.ux();
  const MatrixXd su = solve_invertible(q.uu(), rhs_u, "gains_from_H: H_uu");
  const MatrixXd su_v = su.leftCols(q.m2), su_x = su.rightCols(q.n);
  GainPair k;
  k.K1 = solve_invertible(q.uu() - q.uv() * sv_u, q.ux() - q.uv() * sv_x, "gains_from_H: Schur(u)");
  k.K2 = solve_invertible(q.vv() - q.vu() * su_v, q.vx() - q.vu() * su_x, "gains_from_H: Schur(v)");
  return k;
}

// One least-squares policy evaluation sweep: regress the targets
//   q = x'Qx + u'Ruu + v'Rvv + g z_next' H_i z_next,
//   z_next = (x', -K1 x', -K2 x'),
// on the quadratic basis of the stored (x, u, v) and unpack the new H.
inline QMatrix ls_policy_eval(const DataBatch& batch, const QMatrix& Hi, const GainPair& gains_i,
                              const CostWeights& w, double gamma, const LearnerConfig& cfg) {
  const int n = Hi.n, m1 = Hi.m1, m2 = Hi.m2, l = Hi.l();
  const int p = theta_size(l);
  const int N = static_cast<int>(batch.tuples.size());
  if (N < p + 1)
    throw TooFewSamples("ls_policy_eval: " + std::to_string(N) + " tuples, but at least " + std::to_string(p + 1) +
                        " are required for l = " + std::to_string(l));

  const VectorXd theta_i = theta_pack(Hi.H);
  Eigen::MatrixXd Phi(N, p);
  Eigen::VectorXd y(N);
  VectorXd z_next(l);
  for (int i = 0; i < N; ++i) {
    const DataTuple& t = batch.tuples[i];
    VectorXd z(l);
    z << t.x, t.u_hat, t.v_hat;
    Phi.row(i) = basis_vector(z);
    z_next << t.x_next, -gains_i.K1 * t.x_next, -gains_i.K2 * t.x_next;
    y(i) = one_step_cost(w, t.x, t.u_hat, t.v_hat) + gamma * basis_vector(z_next).dot(theta_i);
  }

  Eigen::BDCSVD<MatrixXd> svd(Phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * smax) ++rank;
  if (smax == 0.0 || rank < p)
    throw RankDeficient("ls_policy_eval: regressor rank " + std::to_string(rank) + " < " + std::to_string(p) +
                        " (increase N, sigma, or the sample radius)");

  VectorXd theta;
  if (cfg.ridge > 0.0) {
    const MatrixXd Gram = Phi.transpose() * Phi + cfg.ridge * MatrixXd::Identity(p, p);
    theta = Eigen::LDLT<MatrixXd>(Gram).solve(Phi.transpose() * y);
  } else {
    theta = svd.solve(y);
  }
  return {theta_unpack(theta, l), n, m1, m2};
}

struct LearnResult {
  QMatrix H;
  GainPair gains;
  ConvergenceLog log;
  int iterations = 0;
};

namespace detail {

inline GainPair zero_gains(int n, int m1, int m2) {
  return {MatrixXd::Zero(m1, n), MatrixXd::Zero(m2, n)};
}

inline int resolve_samples(const LearnerConfig& cfg, int l) {
  return cfg.N > 0 ? cfg.N : 4 * theta_size(l);
}

inline DataBatch gather(const PlantHandle& env, const GainPair& behavior, const LearnerConfig& cfg) {
  const int N = resolve_samples(cfg, env.n() + env.m1() + env.m2());
  if (cfg.excitation == Excitation::deterministic)
    return collect_batch_deterministic(env, N, cfg.state_sample_radius);
  return collect_batch(env, behavior, cfg.sigma1, cfg.sigma2, N, cfg.state_sample_radius, cfg.seed);
}

}  // namespace detail

// Q-learning policy iteration for the team problem: collect once, then
// alternate least-squares evaluation with greedy improvement until the packed
// H stops moving. The learner touches the plant only through the batch.
inline LearnResult algorithm1_team_optimal(const PlantHandle& env, const CostWeights& w, double gamma,
                                           const LearnerConfig& cfg,
                                           const std::optional<GainPair>& reference = std::nullopt) {
  const int n = env.n(), m1 = env.m1(), m2 = env.m2();
  const DataBatch batch = detail::gather(env, detail::zero_gains(n, m1, m2), cfg);

  QMatrix H = zero_q(n, m1, m2);
  GainPair gains = detail::zero_gains(n, m1, m2);
  LearnResult result;
  for (int i = 0; i < cfg.max_policy_iters; ++i) {
    const QMatrix Hn = ls_policy_eval(batch, H, gains, w, gamma, cfg);
    const double delta = (theta_pack(Hn.H) - theta_pack(H.H)).norm();
    H = Hn;
    gains = gains_from_H(H);
    ConvergenceRow row;
    row.iter = i + 1;
    row.h_delta = delta;
    if (reference) {
      row.k1_err = (gains.K1 - reference->K1).norm();
      row.k2_err = (gains.K2 - reference->K2).norm();
    }
    result.log.rows.push_back(row);
    if (delta <= cfg.epsilon) {
      result.H = H;
      result.gains = gains;
      result.iterations = i + 1;
      return result;
    }
  }
  throw NotConverged("algorithm1_team_optimal: ||theta step|| stayed above epsilon after " +
                     std::to_string(cfg.max_policy_iters) + " policy iterations");
}

struct IncentiveLearnResult {
  QMatrix Hv;
  MatrixXd M;
  MatrixXd G, C;  // reconstructed relation, M'G = C
  ConvergenceLog log;
  int iterations = 0;
};

// Incentive reconstruction: rerun the evaluation sweeps with the follower's
// weights while the system keeps operating at the team gains (they are the
// policy being evaluated — improving inside this loop would converge to the
// follower's own optimum instead of the team-play value). The converged H^v
// then encodes gamma B'Pv[A B1 B2] blockwise, so Theorem-style G and C come
// out of H^v, the known weights and the team gains alone:
//   G = H_uu K1 + H_uv K2 - H_ux,   C = H_vx - H_vu K1 - H_vv K2.
inline IncentiveLearnResult algorithm2_incentive(const PlantHandle& env, const CostWeights& follower_w,
                                                 double gamma, const GainPair& team_gains,
                                                 const LearnerConfig& cfg) {
  const int n = env.n(), m1 = env.m1(), m2 = env.m2();
  const DataBatch batch = detail::gather(env, team_gains, cfg);

  QMatrix H = zero_q(n, m1, m2);
  IncentiveLearnResult result;
  bool converged = false;
  for (int i = 0; i < cfg.max_policy_iters; ++i) {
    const QMatrix Hn = ls_policy_eval(batch, H, team_gains, follower_w, gamma, cfg);
    const double delta = (theta_pack(Hn.H) - theta_pack(H.H)).norm();
    H = Hn;
    ConvergenceRow row;
    row.iter = i + 1;
    row.h_delta = delta;
    result.log.rows.push_back(row);
    if (delta <= cfg.epsilon) {
      result.iterations = i + 1;
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NotConverged("algorithm2_incentive: ||theta step|| stayed above epsilon after " +
                       std::to_string(cfg.max_policy_iters) + " evaluation sweeps");

  result.Hv = H;
  result.G = H.uu() * team_gains.K1 + H.uv() * team_gains.K2 - H.ux();
  result.C = H.vx() - H.vu() * team_gains.K1 - H.vv() * team_gains.K2;
  result.M = incentive_from_relation(result.G, result.C);
  return result;
}

}  // namespace stackgame
