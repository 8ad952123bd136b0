#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_instances.hpp"

using namespace stackgame;

TEST_CASE("theta dimensioning") {
  REQUIRE(theta_size(1) == 1);
  REQUIRE(theta_size(3) == 6);
  REQUIRE(theta_size(4) == 10);
  REQUIRE(theta_size(6) == 21);
}

TEST_CASE("quadratic basis ordering for l = 3") {
  const VectorXd z = (VectorXd(3) << 2.0, 3.0, 5.0).finished();
  const VectorXd zb = basis_vector(z);
  REQUIRE(zb.size() == 6);
  // (z1^2, z1 z2, z1 z3, z2^2, z2 z3, z3^2)
  REQUIRE(zb(0) == 4.0);
  REQUIRE(zb(1) == 6.0);
  REQUIRE(zb(2) == 10.0);
  REQUIRE(zb(3) == 9.0);
  REQUIRE(zb(4) == 15.0);
  REQUIRE(zb(5) == 25.0);
}

TEST_CASE("packing pairs diagonal entries with summed off-diagonals") {
  MatrixXd H(3, 3);
  H << 1.0, 2.0, 3.0, 2.5, 4.0, 5.0, 3.5, 5.5, 6.0;  // deliberately asymmetric
  const VectorXd theta = theta_pack(H);
  REQUIRE(theta.size() == 6);
  REQUIRE(theta(0) == 1.0);
  REQUIRE(theta(1) == 2.0 + 2.5);
  REQUIRE(theta(2) == 3.0 + 3.5);
  REQUIRE(theta(3) == 4.0);
  REQUIRE(theta(4) == 5.0 + 5.5);
  REQUIRE(theta(5) == 6.0);
}

TEST_CASE("quadratic form identity z'Hz = basis(z) . theta(H)") {
  Rng rng(314);
  for (int l = 1; l <= 6; ++l) {
    for (int rep = 0; rep < 20; ++rep) {
      MatrixXd H(l, l);
      for (int i = 0; i < l * l; ++i) H(i / l, i % l) = rng.uniform(-2.0, 2.0);
      H = symmetrize(H);
      VectorXd z(l);
      for (int i = 0; i < l; ++i) z(i) = rng.uniform(-3.0, 3.0);
      const double direct = z.dot(H * z);
      const double packed = basis_vector(z).dot(theta_pack(H));
      REQUIRE(std::abs(direct - packed) < 1e-12 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("pack and unpack round-trip symmetric matrices exactly") {
  Rng rng(2718);
  for (int l = 1; l <= 6; ++l) {
    MatrixXd H(l, l);
    for (int i = 0; i < l * l; ++i) H(i / l, i % l) = rng.uniform(-2.0, 2.0);
    H = symmetrize(H);
    const MatrixXd back = theta_unpack(theta_pack(H), l);
    REQUIRE((back - H).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(is_symmetric(back, 0.0));
  }
}

TEST_CASE("packing validates its inputs") {
  REQUIRE_THROWS_AS(theta_pack(MatrixXd::Zero(2, 3)), LengthMismatch);
  REQUIRE_THROWS_AS(theta_unpack(VectorXd::Zero(5), 3), LengthMismatch);  // needs 6 for l=3
  REQUIRE_THROWS_AS(theta_unpack(VectorXd::Zero(6), 4), LengthMismatch);
}

TEST_CASE("gain extraction from an assembled Q-matrix") {
  using namespace fixtures;
  const ValidatedGame g = validate_game(planar_spec());
  const TeamSolution ts = solve_team_optimal(g);
  const MatrixXd H = build_H(g, ts.P, leader_weights(g));
  const QMatrix q{H, g.n(), g.m1(), g.m2()};
  const GainPair k = gains_from_H(q);
  REQUIRE((k.K1 - ts.gains.K1).norm() < 1e-9);
  REQUIRE((k.K2 - ts.gains.K2).norm() < 1e-9);
}
