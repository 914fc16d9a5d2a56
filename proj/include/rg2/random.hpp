#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "rg2/tensor3.hpp"

namespace rg2 {

/// Deterministic generator with identical streams on every platform
/// (std:: distributions are implementation-defined). splitmix64 core.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi).
  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  Eigen::Vector3d vector(double lo = -1.0, double hi = 1.0) {
    return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
  }

  Eigen::Vector3d unit_vector() {
    for (;;) {
      const Eigen::Vector3d v = vector();
      const double n = v.norm();
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

  /// Symmetric form with entries uniform in [lo, hi).
  SymBilinear3d sym(double lo = -1.0, double hi = 1.0) {
    SymBilinear3d s;
    for (int i = 0; i < 6; ++i) s.coeffs()[i] = uniform(lo, hi);
    return s;
  }

  /// SPD form Q exp(diag(u)) Q^T with u uniform in [-log_span, log_span];
  /// condition number at most exp(2 log_span).
  SymBilinear3d spd(double log_span = 0.8) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = uniform(-1.0, 1.0);
    const Eigen::Matrix3d q =
        Eigen::HouseholderQR<Eigen::Matrix3d>(m).householderQ();
    Eigen::Vector3d d;
    for (int i = 0; i < 3; ++i) d[i] = std::exp(uniform(-log_span, log_span));
    return SymBilinear3d::FromMatrix(q * d.asDiagonal() * q.transpose());
  }

 private:
  std::uint64_t state_;
};

}  // namespace rg2
