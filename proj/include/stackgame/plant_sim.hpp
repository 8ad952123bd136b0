#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adp_basis.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace stackgame {

// The black box the learners talk to. Dynamics are private: the learner-facing
// surface is dimensions plus step(); only the cost-evaluation routine below
// (which plays the role of the physical plant accumulating its own cost) sees
// the matrices.
class PlantHandle {
 public:
  PlantHandle(MatrixXd A, MatrixXd B1, MatrixXd B2, std::uint64_t seed)
      : A_(std::move(A)), B1_(std::move(B1)), B2_(std::move(B2)), seed_(seed) {
    if (A_.rows() != A_.cols() || B1_.rows() != A_.rows() || B2_.rows() != A_.rows())
      throw DimensionMismatch("PlantHandle: A must be square and B1, B2 must have n rows");
  }

  int n() const { return static_cast<int>(A_.rows()); }
  int m1() const { return static_cast<int>(B1_.cols()); }
  int m2() const { return static_cast<int>(B2_.cols()); }
  std::uint64_t seed() const { return seed_; }

  VectorXd step(const VectorXd& x, const VectorXd& u, const VectorXd& v) const {
    if (x.size() != n() || u.size() != m1() || v.size() != m2())
      throw DimensionMismatch("step: vector lengths must be (n, m1, m2)");
    return A_ * x + B1_ * u + B2_ * v;
  }

 private:
  MatrixXd A_, B1_, B2_;
  std::uint64_t seed_;

  friend double evaluate_cost(const PlantHandle&, const struct Trajectory&, const CostWeights&, double,
                              const struct Tail&);
};

inline PlantHandle make_plant(const ValidatedGame& g, std::uint64_t seed) {
  return PlantHandle(g.A(), g.B1(), g.B2(), seed);
}

struct Trajectory {
  std::vector<VectorXd> states;    // length T+1
  std::vector<VectorXd> u_inputs;  // length T
  std::vector<VectorXd> v_inputs;  // length T
};

// The leader sees the follower's concurrent action (that is how the incentive
// u = u^t + M (v - v^t) is physically realizable); the follower sees the state.
using LeaderPolicy = std::function<VectorXd(const VectorXd& x, const VectorXd& v)>;
using FollowerPolicy = std::function<VectorXd(const VectorXd& x)>;

inline LeaderPolicy linear_leader(const MatrixXd& K1) {
  return [K1](const VectorXd& x, const VectorXd&) { return VectorXd(-K1 * x); };
}

inline FollowerPolicy linear_follower(const MatrixXd& K2) {
  return [K2](const VectorXd& x) { return VectorXd(-K2 * x); };
}

inline LeaderPolicy incentive_leader(const IncentivePolicy& pol) {
  return [pol](const VectorXd& x, const VectorXd& v) { return pol.realized_u(x, v); };
}

inline Trajectory rollout(const PlantHandle& h, const LeaderPolicy& leader, const FollowerPolicy& follower,
                          const VectorXd& x0, int T) {
  if (x0.size() != h.n()) throw DimensionMismatch("rollout: x0 must have length n");
  if (T < 0) throw DimensionMismatch("rollout: T must be >= 0");
  Trajectory traj;
  traj.states.reserve(T + 1);
  traj.u_inputs.reserve(T);
  traj.v_inputs.reserve(T);
  traj.states.push_back(x0);
  for (int k = 0; k < T; ++k) {
    const VectorXd& x = traj.states.back();
    const VectorXd v = follower(x);
    const VectorXd u = leader(x, v);
    traj.v_inputs.push_back(v);
    traj.u_inputs.push_back(u);
    traj.states.push_back(h.step(x, u, v));
  }
  return traj;
}

struct Tail {
  enum Kind { truncate, lyapunov_tail };
  Kind kind = truncate;
  std::optional<GainPair> gains;  // final linear policy, required for lyapunov_tail

  static Tail trunc() { return {}; }
  static Tail lyapunov(GainPair k) { return {lyapunov_tail, std::move(k)}; }
};

// Discounted cost of a recorded trajectory. truncate sums the first T stages;
// lyapunov_tail adds g^T x_T' P x_T with P the exact policy-evaluation value
// of the final linear policy, making the result T-invariant on stable loops.
inline double evaluate_cost(const PlantHandle& h, const Trajectory& traj, const CostWeights& w, double gamma,
                            const Tail& tail) {
  if (traj.states.empty()) throw DimensionMismatch("evaluate_cost: empty trajectory");
  const std::size_t T = traj.u_inputs.size();
  if (traj.states.size() != T + 1 || traj.v_inputs.size() != T)
    throw LengthMismatch("evaluate_cost: expected T+1 states and T inputs per player");
  double cost = 0.0;
  double disc = 1.0;
  for (std::size_t k = 0; k < T; ++k) {
    cost += disc * one_step_cost(w, traj.states[k], traj.u_inputs[k], traj.v_inputs[k]);
    disc *= gamma;
  }
  if (tail.kind == Tail::lyapunov_tail) {
    if (!tail.gains)
      throw TailRequiresLinearPolicy("evaluate_cost: lyapunov_tail needs the final linear policy's gains");
    const MatrixXd Acl = h.A_ - h.B1_ * tail.gains->K1 - h.B2_ * tail.gains->K2;
    if (std::sqrt(gamma) * spectral_radius(Acl) >= 1.0)
      throw UnstableClosedLoop("evaluate_cost: tail policy is not stable in the discounted sense");
    const MatrixXd C = w.Q + tail.gains->K1.transpose() * w.Ru * tail.gains->K1 +
                       tail.gains->K2.transpose() * w.Rv * tail.gains->K2;
    const MatrixXd P = discounted_lyapunov(Acl, C, gamma);
    const VectorXd& xT = traj.states.back();
    cost += disc * xT.dot(P * xT);
  }
  return cost;
}

struct DataTuple {
  VectorXd x, u_hat, v_hat, x_next;
};

struct DataBatch {
  std::vector<DataTuple> tuples;
  std::uint64_t seed = 0;
};

// Step-1 collection: independent restarts x ~ uniform(ball), behavior actions
// u = -K1 x + e1, v = -K2 x + e2 with e ~ N(0, sigma^2 I). Tuple i draws from
// a substream of (seed, i), so batches are reproducible and order-independent.
inline DataBatch collect_batch(const PlantHandle& h, const GainPair& gains, double sigma1, double sigma2, int N,
                               double radius, std::uint64_t seed) {
  if (N < 1) throw TooFewSamples("collect_batch: N must be >= 1");
  if (gains.K1.rows() != h.m1() || gains.K1.cols() != h.n() || gains.K2.rows() != h.m2() ||
      gains.K2.cols() != h.n())
    throw DimensionMismatch("collect_batch: behavior gains must be (m1 x n, m2 x n)");
  DataBatch batch;
  batch.seed = seed;
  batch.tuples.reserve(N);
  for (int i = 0; i < N; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    DataTuple t;
    t.x = rng.ball(h.n(), radius);
    t.u_hat = -gains.K1 * t.x + rng.normal_vec(h.m1(), sigma1);
    t.v_hat = -gains.K2 * t.x + rng.normal_vec(h.m2(), sigma2);
    t.x_next = h.step(t.x, t.u_hat, t.v_hat);
    batch.tuples.push_back(std::move(t));
  }
  return batch;
}

// Noise-free persistently exciting collection for exact regression tests: the
// stacked vectors z = (x, u, v) walk the basis set {r e_i} u {r (e_i + e_j)}
// (full quadratic-basis rank) with a growing integer scale once the set wraps.
inline DataBatch collect_batch_deterministic(const PlantHandle& h, int N, double radius) {
  if (N < 1) throw TooFewSamples("collect_batch_deterministic: N must be >= 1");
  const int l = h.n() + h.m1() + h.m2();
  std::vector<VectorXd> dirs;
  dirs.reserve(theta_size(l));
  for (int i = 0; i < l; ++i) dirs.push_back(VectorXd::Unit(l, i));
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) dirs.push_back(VectorXd::Unit(l, i) + VectorXd::Unit(l, j));

  DataBatch batch;
  batch.tuples.reserve(N);
  const int p = static_cast<int>(dirs.size());
  for (int i = 0; i < N; ++i) {
    const double scale = radius * (1.0 + i / p);
    const VectorXd z = scale * dirs[i % p];
    DataTuple t;
    t.x = z.head(h.n());
    t.u_hat = z.segment(h.n(), h.m1());
    t.v_hat = z.tail(h.m2());
    t.x_next = h.step(t.x, t.u_hat, t.v_hat);
    batch.tuples.push_back(std::move(t));
  }
  return batch;
}

}  // namespace stackgame
