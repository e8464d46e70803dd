#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

#include "mapalign/geometry.hpp"

namespace mapalign {

// Explicit draw algorithms on top of mt19937_64 so that generated scenarios are
// reproducible across standard library implementations.

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

inline int uniform_int(std::mt19937_64& gen, int n) {  // in [0, n)
  return static_cast<int>(gen() % static_cast<std::uint64_t>(n));
}

/// Box-Muller standard normal.
inline double normal01(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  while (u1 <= 0.0) u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline Eigen::Vector3d normal3(std::mt19937_64& gen, double sigma) {
  return {sigma * normal01(gen), sigma * normal01(gen), sigma * normal01(gen)};
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& gen, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal01(gen);
  const double n = v.norm();
  if (n < 1e-12) return random_unit_vector(gen, dim);
  return v / n;
}

/// Rotates a unit vector by `angle_rad` toward a random orthogonal direction.
inline Eigen::VectorXd perturb_unit_vector(std::mt19937_64& gen, const Eigen::VectorXd& e,
                                           double angle_rad) {
  if (angle_rad == 0.0) return e;
  Eigen::VectorXd t = random_unit_vector(gen, static_cast<int>(e.size()));
  t -= t.dot(e) * e;
  const double n = t.norm();
  if (n < 1e-9) return e;
  t /= n;
  return std::cos(angle_rad) * e + std::sin(angle_rad) * t;
}

/// Random rotation via random axis and uniform angle (not Haar, adequate for tests).
inline Eigen::Matrix3d random_rotation(std::mt19937_64& gen) {
  Eigen::Vector3d axis = normal3(gen, 1.0);
  while (axis.norm() < 1e-9) axis = normal3(gen, 1.0);
  axis.normalize();
  const double angle = uniform_range(gen, 0.0, 2.0 * kPi);
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

/// splitmix64; used to derive independent per-item seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mapalign
