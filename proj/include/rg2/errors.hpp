#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rg2 {

/// A bilinear form that must be positive definite is not.
/// Carries the offending (smallest) eigenvalue and, for field data,
/// the flat grid index where it occurred (-1 for pointwise data).
class definiteness_error : public std::runtime_error {
 public:
  explicit definiteness_error(double offending_eigenvalue,
                              std::ptrdiff_t grid_point = -1)
      : std::runtime_error(message(offending_eigenvalue, grid_point)),
        eigenvalue_(offending_eigenvalue),
        grid_point_(grid_point) {}

  double eigenvalue() const noexcept { return eigenvalue_; }
  std::ptrdiff_t grid_point() const noexcept { return grid_point_; }

 private:
  static std::string message(double ev, std::ptrdiff_t pt) {
    std::string m = "matrix not positive definite (eigenvalue " +
                    std::to_string(ev) + ")";
    if (pt >= 0) m += " at grid point " + std::to_string(pt);
    return m;
  }
  double eigenvalue_;
  std::ptrdiff_t grid_point_;
};

/// Sectional curvature requested for a (numerically) degenerate plane.
class degenerate_plane_error : public std::runtime_error {
 public:
  explicit degenerate_plane_error(double denominator)
      : std::runtime_error("degenerate plane: Gram determinant " +
                           std::to_string(denominator)),
        denominator_(denominator) {}
  double denominator() const noexcept { return denominator_; }

 private:
  double denominator_;
};

/// A frame precondition is violated (zero covector, frame not rotated /
/// not diagonalized on e1-perp, ...).
class frame_error : public std::runtime_error {
 public:
  explicit frame_error(const std::string& what) : std::runtime_error(what) {}
};

/// Grid construction or compatibility failure.
class grid_error : public std::runtime_error {
 public:
  explicit grid_error(const std::string& what) : std::runtime_error(what) {}
};

/// Finite-difference linearization step lost definiteness.
class step_error : public std::runtime_error {
 public:
  explicit step_error(const std::string& what) : std::runtime_error(what) {}
};

/// Initial data rejected by the parabolicity gate. Carries the offending
/// grid point (-1 for pointwise runs), the worst plane as a 2-vector in
/// chart bivector coordinates, and the failing margin.
class rejection_error : public std::runtime_error {
 public:
  rejection_error(double margin, std::ptrdiff_t grid_point,
                  const Eigen::Vector3d& plane)
      : std::runtime_error(message(margin, grid_point, plane)),
        margin_(margin),
        grid_point_(grid_point),
        plane_(plane) {}

  double margin() const noexcept { return margin_; }
  std::ptrdiff_t grid_point() const noexcept { return grid_point_; }
  const Eigen::Vector3d& plane() const noexcept { return plane_; }

 private:
  static std::string message(double margin, std::ptrdiff_t pt,
                             const Eigen::Vector3d& w) {
    std::string m = "initial data rejected: parabolicity margin " +
                    std::to_string(margin);
    if (pt >= 0) m += " at grid point " + std::to_string(pt);
    m += ", worst plane 2-vector (" + std::to_string(w[0]) + ", " +
         std::to_string(w[1]) + ", " + std::to_string(w[2]) + ")";
    return m;
  }
  double margin_;
  std::ptrdiff_t grid_point_;
  Eigen::Vector3d plane_;
};

}  // namespace rg2
