#pragma once

// Time integration of the gauge-fixed flows: explicit RK4 under a parabolic
// CFL restriction dt <= cfl * h^2 / Lambda, with parabolicity monitoring and
// singularity detectors. A constant-curvature pointwise integrator and a
// high-accuracy scalar ODE reference are included.
//
// The stepper advances serially; right-hand sides are pure per-point maps
// evaluated in fixed order, so identical inputs produce bit-identical
// trajectories.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "rg2/chart.hpp"
#include "rg2/flow.hpp"
#include "rg2/flows.hpp"
#include "rg2/symbol.hpp"

namespace rg2 {

struct Diagnostics {
  double margin = 0.0;     // global min of the flow's parabolicity margin
  double max_riem = 0.0;   // sup over points and planes of |K|
  double min_eig_g = 0.0;  // smallest metric eigenvalue on the grid
  std::size_t worst_point = 0;
  Eigen::Vector3d worst_plane = Eigen::Vector3d::Zero();
};

struct FlowState {
  double t = 0.0;
  MetricField field;
  Flow flow;
  MetricField g0;
  double dt_last = 0.0;
  Diagnostics diag;  // refreshed by the runner after every accepted step
};

enum class StopReason {
  TEndReached,
  ParabolicityLost,
  CurvatureBlowup,
  MetricDegeneracy,
  StepUnderflow,
};

std::string stop_reason_name(StopReason r);

struct RunControls {
  double cfl = 0.2;
  double eps_par = 1e-8;
  double m_max = 1e6;
  double eps_g = 1e-8;
  double dt_min = 1e-12;
  int lambda_every = 10;  // refresh cadence of the CFL scale
  bool force = false;     // skip the initial parabolicity gate
};

struct DiagRow {
  double t, dt, margin, max_riem, min_eig_g;
};

struct RunResult {
  std::vector<DiagRow> trajectory;  // one row per accepted step
  StopReason reason = StopReason::TEndReached;
  long steps = 0;
  Diagnostics initial;
};

Diagnostics monitor(const MetricField& field, const CurvatureField& curv,
                    const Flow& flow);

/// One classical RK4 step of d/dt g = rhs_gauge_fixed(g). Throws
/// definiteness_error if any stage loses positivity (the runner halves dt).
FlowState step_rk4(const FlowState& state, double dt);

/// March the gauge-fixed flow to t_end. The initial state must pass the
/// parabolicity gate (margin > eps_par) unless controls.force; rejection
/// throws rejection_error citing the offending point and plane.
/// on_step, when set, sees every accepted state.
RunResult run(FlowState& state, double dt0, double t_end,
              const RunControls& controls = {},
              const std::function<void(const FlowState&, const DiagRow&)>&
                  on_step = nullptr);

/// Pointwise state on a constant-curvature ray g(t) = c(t) g0, where g0 has
/// sectional curvature k0. Curvature is supplied algebraically, so the full
/// tensor right-hand side can be integrated without a grid.
struct ConstCurvatureState {
  double t = 0.0;
  SymBilinear3d g;
  SymBilinear3d g0;
  double k0 = 1.0;
  Flow flow;

  double scale() const {  // c = tr(g0^-1 g) / 3
    return g.trace_with(inverse_metric(g0)) / 3.0;
  }
};

SymBilinear3d const_curvature_rhs(const ConstCurvatureState& state);
ConstCurvatureState step_rk4(const ConstCurvatureState& state, double dt);

/// Runner for pointwise constant-curvature states; no CFL (dt = dt0), same
/// gate and detectors as the field runner.
RunResult run_point(ConstCurvatureState& state, double dt0, double t_end,
                    const RunControls& controls = {},
                    const std::function<void(const ConstCurvatureState&,
                                             const DiagRow&)>& on_step = nullptr);

/// Scalar reference for the RG2 flow on constant-curvature data:
///   c' = -4 k0 - 4 a k0^2 / c,  c(0) = c0,
/// solved adaptively (Dormand-Prince 4(5), tolerance 1e-12). At a = 0 the
/// solution is c(t) = c0 - 4 k0 t (Ricci-flow limit). If c reaches zero the
/// extinction time is reported and sampling stops there.
struct OdeResult {
  std::vector<std::pair<double, double>> samples;  // (t, c)
  std::optional<double> extinction_time;
};

OdeResult ode_reference(double k0, double a, double c0, double t_end,
                        int n_samples = 101);
OdeResult ode_reference_at(double k0, double a, double c0,
                           const std::vector<double>& sample_times);

}  // namespace rg2
