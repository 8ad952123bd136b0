#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace stackgame {

// splitmix64: tiny, statistically solid, and fully portable — no reliance on
// std::*_distribution, whose output is implementation-defined, so identical
// seeds give identical batches on every build.
inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    for (int i = 0; i < 4; ++i) splitmix64(state_);  // decorrelate small seeds
  }

  double uniform01() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; consumes exactly two uniforms per draw.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vec(int n, double sigma) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = sigma * normal();
    return v;
  }

  // Uniform over the solid n-ball of the given radius.
  Eigen::VectorXd ball(int n, double radius) {
    Eigen::VectorXd d = normal_vec(n, 1.0);
    double nrm = d.norm();
    while (nrm == 0.0) {  // astronomically unlikely, but keep the direction well defined
      d = normal_vec(n, 1.0);
      nrm = d.norm();
    }
    const double r = radius * std::pow(uniform01(), 1.0 / n);
    return (r / nrm) * d;
  }

 private:
  std::uint64_t state_;
};

// Independent stream for element i of a batch: deterministic partition of the
// seed space so tuples can be produced in any order (or in parallel).
inline Rng substream(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t s = seed;
  const std::uint64_t root = splitmix64(s);
  return Rng(root ^ (0xd1342543de82ef95ull * (i + 1)));
}

}  // namespace stackgame
