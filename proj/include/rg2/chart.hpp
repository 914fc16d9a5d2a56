#pragma once

// Curvature of metric fields on periodic coordinate charts via fourth-order
// central finite differences. Charts are T^1 (metric depends on x^1 only,
// full 3x3 form allowed) or T^3, period 2*pi per axis.
//
// Per-point computations are pure functions of the local 2-jet of the
// metric; fields are immutable snapshots and every map below is safe to
// evaluate point-parallel. Loops run in a fixed order so results are
// bit-reproducible.
//
// Differentiation is stencil-based only; a spectral backend would slot in at
// axis_derivative1/2 but is not provided.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rg2/errors.hpp"
#include "rg2/flow.hpp"
#include "rg2/tensor3.hpp"

namespace rg2 {

struct GridSpec {
  int dim = 1;  // 1 or 3
  int n = 128;  // points per axis
  double period = 2.0 * EIGEN_PI;

  std::size_t point_count() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * n * n;
  }
  double spacing() const { return period / n; }

  std::size_t index(int i, int j = 0, int k = 0) const {
    const auto w = [this](int v) {
      v %= n;
      return v < 0 ? v + n : v;
    };
    if (dim == 1) return static_cast<std::size_t>(w(i));
    return (static_cast<std::size_t>(w(i)) * n + w(j)) * n + w(k);
  }

  /// Flat index of the point offset by `shift` steps along `axis`.
  std::size_t neighbor(std::size_t flat, int axis, int shift) const;

  /// Chart coordinates of a flat index.
  Eigen::Vector3d coords(std::size_t flat) const;

  bool operator==(const GridSpec&) const = default;
};

using Sym2Field = std::vector<SymBilinear3d>;
using VectorField = std::vector<Eigen::Vector3d>;
/// Christoffel symbols at a point: gamma[k](i, j) = Gamma^k_ij.
using Christoffel3 = std::array<Eigen::Matrix3d, 3>;
using ChristoffelField = std::vector<Christoffel3>;

/// Periodic grid of symmetric forms used as a metric.
class MetricField {
 public:
  MetricField(GridSpec grid, std::string chart_name, Sym2Field data,
              bool allow_large_3d = false);
  static MetricField constant(GridSpec grid, const SymBilinear3d& value,
                              std::string chart_name = "constant");

  const GridSpec& grid() const { return grid_; }
  const std::string& chart_name() const { return chart_; }
  const Sym2Field& data() const { return data_; }
  const SymBilinear3d& at(std::size_t p) const { return data_[p]; }
  std::size_t size() const { return data_.size(); }

  /// this + s * h, same grid.
  MetricField add_scaled(double s, const Sym2Field& h) const;

 private:
  GridSpec grid_;
  std::string chart_;
  Sym2Field data_;
};

/// Pointwise curvature data of a metric field.
struct CurvatureField {
  ChristoffelField gamma;
  std::vector<Curv3d> riem;
  Sym2Field ricci;
  std::vector<double> scalar;
  std::vector<double> kmin, kmax;  // filled when with_extrema
};

/// Full local 2-jet of the metric at a point: dg[k] = d_k g,
/// ddg[k][l] = d_k d_l g (symmetric in k, l).
struct MetricJet2 {
  SymBilinear3d g;
  std::array<SymBilinear3d, 3> dg;
  std::array<std::array<SymBilinear3d, 3>, 3> ddg;
};

struct PointCurvature {
  Christoffel3 gamma;
  Curv3d riem;
  SymBilinear3d ricci;
  double scalar = 0.0;
};

/// Levi-Civita Gamma^k_ij and curvature from an exact metric 2-jet.
/// This is the single kernel behind curvature(); tests can feed exact
/// derivative data through it to isolate the algebra from the stencils.
PointCurvature curvature_from_jet(const MetricJet2& jet);

/// Gamma^k_ij of a metric field (4th-order stencils).
ChristoffelField christoffel(const MetricField& field);

/// Pointwise Christoffels, Riemann, Ricci, scalar and (optionally) the
/// sectional range of a metric field. Runs the sign-convention self-check
/// (round-sphere jet must give K = +1) before the first real work.
CurvatureField curvature(const MetricField& field, bool with_extrema = true);

/// nabla_i T_jk = d_i T_jk - Gamma^l_ij T_lk - Gamma^l_ik T_jl.
/// Result: per point, array over the derivative index i.
std::vector<std::array<SymBilinear3d, 3>> covariant_derivative_sym2(
    const MetricField& field, const ChristoffelField& gamma,
    const Sym2Field& t);
std::vector<std::array<SymBilinear3d, 3>> covariant_derivative_sym2(
    const MetricField& field, const Sym2Field& t);

/// Central-difference linearization of the flow operator:
/// DL_g(h) ~ (L(g + s h) - L(g - s h)) / (2 s).
Sym2Field linearize_L(const MetricField& field, const Sym2Field& h,
                      const Flow& flow, double s);

/// Same for the gauge-fixed operator L - Lie_V (background g0).
Sym2Field linearize_gauge_fixed(const MetricField& field, const Sym2Field& h,
                                const Flow& flow, const MetricField& g0,
                                double s);

/// Feeds the exact 2-jet of the round-sphere metric (stereographic chart,
/// K = +1) through curvature_from_jet and checks the sign of the result.
/// Convention drift is the classic failure mode here.
bool curvature_sign_self_check();

/// 4th-order periodic derivative of a per-point quantity along an axis.
/// T needs +, -, and double*T.
template <typename T>
std::vector<T> axis_derivative1(const GridSpec& grid, const std::vector<T>& f,
                                int axis) {
  const double inv = 1.0 / (12.0 * grid.spacing());
  std::vector<T> out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const T& fp1 = f[grid.neighbor(p, axis, 1)];
    const T& fp2 = f[grid.neighbor(p, axis, 2)];
    const T& fm1 = f[grid.neighbor(p, axis, -1)];
    const T& fm2 = f[grid.neighbor(p, axis, -2)];
    out[p] = inv * (8.0 * (fp1 - fm1) - (fp2 - fm2));
  }
  return out;
}

template <typename T>
std::vector<T> axis_derivative2(const GridSpec& grid, const std::vector<T>& f,
                                int axis) {
  const double h = grid.spacing();
  const double inv = 1.0 / (12.0 * h * h);
  std::vector<T> out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const T& fp1 = f[grid.neighbor(p, axis, 1)];
    const T& fp2 = f[grid.neighbor(p, axis, 2)];
    const T& fm1 = f[grid.neighbor(p, axis, -1)];
    const T& fm2 = f[grid.neighbor(p, axis, -2)];
    out[p] = inv * (16.0 * (fp1 + fm1) - (fp2 + fm2) - 30.0 * f[p]);
  }
  return out;
}

namespace detail {
// Debug hook for the verify fault-injection path: flips the sign of the
// curvature kernel so the self-check must fail.
extern bool flip_curvature_sign;
}  // namespace detail

}  // namespace rg2
