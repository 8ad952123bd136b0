#pragma once

// Shared fixture instances and reference values used across the test binaries.
// References were computed by independent fixed-point iterations (tolerance
// 1e-15) outside this codebase and are frozen here as literals.

#include <stackgame/stackgame.hpp>

namespace fixtures {

using namespace stackgame;

// Scalar benchmark: a=1, b1=b2=1, leader 1/1/1, follower 2/1/1, gamma 0.9.
inline GameSpec scalar_spec() {
  GameSpec s;
  s.A = MatrixXd::Constant(1, 1, 1.0);
  s.B1 = MatrixXd::Constant(1, 1, 1.0);
  s.B2 = MatrixXd::Constant(1, 1, 1.0);
  s.Q1 = MatrixXd::Constant(1, 1, 1.0);
  s.R11 = MatrixXd::Constant(1, 1, 1.0);
  s.R12 = MatrixXd::Constant(1, 1, 1.0);
  s.Q2 = MatrixXd::Constant(1, 1, 2.0);
  s.R21 = MatrixXd::Constant(1, 1, 1.0);
  s.R22 = MatrixXd::Constant(1, 1, 1.0);
  s.gamma = 0.9;
  s.x0 = VectorXd::Constant(1, 1.0);
  return s;
}

constexpr double kScalarP = 1.3545766763482554;
constexpr double kScalarK = 0.354576676348255;   // K1 = K2 at the team optimum
constexpr double kScalarPv = 2.436983085117272;
constexpr double kScalarM = -1.0;
constexpr double kScalarK2Attacked = 0.4418061971222083;
constexpr double kScalarJ1Attacked = 1.3721164055454915;

// Planar benchmark: n=2, m1=m2=1. R22 sits on the consistency root of the
// incentive relation M'G = C (two equations, one unknown), making the
// overdetermined solve exact; nearby R22 values are infeasible.
inline GameSpec planar_spec() {
  GameSpec s;
  s.A = (MatrixXd(2, 2) << 0.9, 0.2, -0.1, 0.8).finished();
  s.B1 = (MatrixXd(2, 1) << 1.0, 0.0).finished();
  s.B2 = (MatrixXd(2, 1) << 0.5, 1.0).finished();
  s.Q1 = MatrixXd::Identity(2, 2);
  s.R11 = MatrixXd::Identity(1, 1);
  s.R12 = MatrixXd::Identity(1, 1);
  s.Q2 = (MatrixXd(2, 2) << 2.0, 0.0, 0.0, 1.0).finished();
  s.R21 = MatrixXd::Identity(1, 1);
  s.R22 = MatrixXd::Constant(1, 1, 1.0000015803120883);
  s.gamma = 0.9;
  s.x0 = VectorXd::Constant(2, 1.0);
  return s;
}

inline MatrixXd planar_P() {
  return (MatrixXd(2, 2) << 1.472395413248447, -0.06112366220793446, -0.06112366220793446,
          1.3515869897751513)
      .finished();
}
inline MatrixXd planar_K1() {
  return (MatrixXd(1, 2) << 0.5024377896999517, -0.01856787944436817).finished();
}
inline MatrixXd planar_K2() {
  return (MatrixXd(1, 2) << 0.04920486966506987, 0.4348417673578469).finished();
}
inline MatrixXd planar_Pv() {
  return (MatrixXd(2, 2) << 2.6154422402786266, -0.06062228619690231, -0.06062228619690231,
          1.3515892968584)
      .finished();
}
constexpr double kPlanarM = -0.5004376978891223;
constexpr double kPlanarJ1 = 2.7017350786077294;

// Degenerate drift-free instance: with A = 0 and Q1 = 0 the value matrix is
// exactly zero and the Q-matrix is the block diagonal of the input weights.
inline GameSpec driftfree_spec() {
  GameSpec s = scalar_spec();
  s.A = MatrixXd::Zero(1, 1);
  s.Q1 = MatrixXd::Zero(1, 1);
  return s;
}

}  // namespace fixtures
