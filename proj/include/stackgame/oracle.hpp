#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "game_model.hpp"
#include "linalg.hpp"

// Brute-force references, deliberately written on a different algebraic route
// than the production solvers so that agreement is evidence rather than an
// identity: the DP below substitutes the minimizing joint gain back into the
// stage cost instead of using the completed-square form.
namespace stackgame {

struct DPTrace {
  int horizon = 0;
  std::vector<MatrixXd> P_sequence;  // P_sequence[0] = 0, backward iterates
  GainPair final_gains;
};

inline DPTrace finite_horizon_dp(const ValidatedGame& g, const CostWeights& w, int horizon) {
  if (horizon < 0) throw DimensionMismatch("finite_horizon_dp: horizon must be >= 0");
  const int n = g.n(), m1 = g.m1(), m2 = g.m2(), m = m1 + m2;
  MatrixXd B(n, m);
  B << g.B1(), g.B2();
  MatrixXd R = MatrixXd::Zero(m, m);
  R.topLeftCorner(m1, m1) = w.Ru;
  R.bottomRightCorner(m2, m2) = w.Rv;
  const double gm = g.gamma();

  DPTrace trace;
  trace.horizon = horizon;
  trace.P_sequence.push_back(MatrixXd::Zero(n, n));
  MatrixXd Kw = MatrixXd::Zero(m, n);
  for (int t = 0; t < horizon; ++t) {
    const MatrixXd& P = trace.P_sequence.back();
    const MatrixXd Gm = R + gm * B.transpose() * P * B;
    Kw = gm * solve_invertible(Gm, B.transpose() * P * g.A(), "finite_horizon_dp");
    const MatrixXd Acl = g.A() - B * Kw;
    trace.P_sequence.push_back(
        symmetrize(w.Q + Kw.transpose() * R * Kw + gm * Acl.transpose() * P * Acl));
  }
  trace.final_gains.K1 = Kw.topRows(m1);
  trace.final_gains.K2 = Kw.bottomRows(m2);
  return trace;
}

enum class Objective { leader, follower };

// Grid of (lo, lo+step, ..., hi), inclusive; lo == hi is the one-point grid.
// Each candidate gain k is scored by the exact scalar policy value p x0^2,
// unstable closed loops scoring +infinity.
inline std::pair<double, double> scalar_gain_search(const ValidatedGame& g, Objective objective,
                                                    const std::variant<double, IncentivePolicy>& fixed_policy,
                                                    double lo, double hi, double step) {
  if (g.n() != 1 || g.m1() != 1 || g.m2() != 1)
    throw DimensionMismatch("scalar_gain_search: requires n = m1 = m2 = 1");
  if (lo > hi) throw EmptyGrid("scalar_gain_search: lo > hi");
  if (step <= 0.0 && lo != hi) throw EmptyGrid("scalar_gain_search: nonpositive step on a nondegenerate range");

  const double a = g.A()(0, 0), b1 = g.B1()(0, 0), b2 = g.B2()(0, 0);
  const double gm = g.gamma();
  const double x0 = g.x0()(0);

  const auto score = [&](double k) {
    double ku, stage;
    if (objective == Objective::leader) {
      if (!std::holds_alternative<double>(fixed_policy))
        throw DimensionMismatch("scalar_gain_search: leader objective expects the follower's gain");
      const double kv = std::get<double>(fixed_policy);
      ku = k;
      const double acl = a - b1 * ku - b2 * kv;
      if (std::sqrt(gm) * std::abs(acl) >= 1.0) return std::numeric_limits<double>::infinity();
      stage = g.Q1()(0, 0) + g.R11()(0, 0) * ku * ku + g.R12()(0, 0) * kv * kv;
      return stage / (1.0 - gm * acl * acl) * x0 * x0;
    }
    // follower objective: candidate k is the follower's gain; the leader is
    // either pinned at -k1 x or plays the announced incentive.
    if (std::holds_alternative<double>(fixed_policy)) {
      ku = std::get<double>(fixed_policy);
    } else {
      const IncentivePolicy& pol = std::get<IncentivePolicy>(fixed_policy);
      const double k1 = pol.gains.K1(0, 0), k2 = pol.gains.K2(0, 0), m = pol.M(0, 0);
      ku = k1 + m * (k - k2);
    }
    const double acl = a - b1 * ku - b2 * k;
    if (std::sqrt(gm) * std::abs(acl) >= 1.0) return std::numeric_limits<double>::infinity();
    stage = g.Q2()(0, 0) + g.R21()(0, 0) * ku * ku + g.R22()(0, 0) * k * k;
    return stage / (1.0 - gm * acl * acl) * x0 * x0;
  };

  const int count = (lo == hi) ? 1 : static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  double best_k = lo, best_j = score(lo);
  for (int i = 1; i < count; ++i) {
    const double k = lo + i * step;
    const double j = score(k);
    if (j < best_j) {
      best_j = j;
      best_k = k;
    }
  }
  return {best_k, best_j};
}

}  // namespace stackgame
