#include "rg2/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rg2 {

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::TEndReached: return "t_end";
    case StopReason::ParabolicityLost: return "parabolicity_lost";
    case StopReason::CurvatureBlowup: return "curvature_blowup";
    case StopReason::MetricDegeneracy: return "metric_degeneracy";
    case StopReason::StepUnderflow: return "step_underflow";
  }
  return "?";
}

namespace {

bool needs_ricci_eigenvalues(FlowKind k) {
  return k == FlowKind::SquaredRicci || k == FlowKind::Mixed;
}

void ricci_eig_range(const SymBilinear3d& ric, const SymBilinear3d& g,
                     double& mu_min, double& mu_max) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(
      ric.matrix(), g.matrix(), Eigen::EigenvaluesOnly);
  mu_min = es.eigenvalues()[0];
  mu_max = es.eigenvalues()[2];
}

// Largest gauge-fixed symbol eigenvalue over the grid (the CFL scale).
double symbol_sup(const MetricField& field, const CurvatureField& curv,
                  const Flow& flow) {
  double sup = 1.0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    double mu_min = 0.0, mu_max = 0.0;
    if (needs_ricci_eigenvalues(flow.kind))
      ricci_eig_range(curv.ricci[p], field.at(p), mu_min, mu_max);
    sup = std::max(sup, flow_symbol_sup(flow, curv.kmin[p], curv.kmax[p],
                                        mu_min, mu_max));
  }
  return sup;
}

}  // namespace

Diagnostics monitor(const MetricField& field, const CurvatureField& curv,
                    const Flow& flow) {
  if (curv.kmin.size() != field.size())
    throw grid_error("monitor needs curvature with sectional extrema");
  Diagnostics d;
  d.margin = std::numeric_limits<double>::infinity();
  d.max_riem = 0.0;
  d.min_eig_g = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < field.size(); ++p) {
    double mu_min = 0.0, mu_max = 0.0;
    if (needs_ricci_eigenvalues(flow.kind))
      ricci_eig_range(curv.ricci[p], field.at(p), mu_min, mu_max);
    const double m =
        flow_margin(flow, curv.kmin[p], curv.kmax[p], mu_min, mu_max);
    if (m < d.margin) {
      d.margin = m;
      d.worst_point = p;
    }
    d.max_riem = std::max(
        d.max_riem, std::max(std::abs(curv.kmin[p]), std::abs(curv.kmax[p])));
    d.min_eig_g = std::min(d.min_eig_g, field.at(p).min_eigenvalue());
  }
  d.worst_plane =
      parabolicity(curv.riem[d.worst_point], field.at(d.worst_point), flow)
          .worst_plane;
  return d;
}

FlowState step_rk4(const FlowState& state, double dt) {
  const auto f = [&](const MetricField& g) {
    return rhs_gauge_fixed(g, curvature(g, /*with_extrema=*/false), state.flow,
                           state.g0);
  };
  const Sym2Field k1 = f(state.field);
  const Sym2Field k2 = f(state.field.add_scaled(dt / 2, k1));
  const Sym2Field k3 = f(state.field.add_scaled(dt / 2, k2));
  const Sym2Field k4 = f(state.field.add_scaled(dt, k3));
  Sym2Field combo(k1.size());
  for (std::size_t p = 0; p < k1.size(); ++p)
    combo[p] = k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p];
  FlowState next{state.t + dt, state.field.add_scaled(dt / 6, combo),
                 state.flow, state.g0, dt, state.diag};
  return next;
}

namespace {

// Shared runner skeleton: gate, step-with-halving, detectors. Stepping and
// monitoring are supplied by the two state flavors.
template <typename State, typename StepFn, typename MonitorFn,
          typename DtCapFn, typename Hook>
RunResult run_loop(State& state, double dt0, double t_end,
                   const RunControls& controls, StepFn do_step,
                   MonitorFn do_monitor, DtCapFn dt_cap, Hook on_step) {
  RunResult result;
  result.initial = do_monitor(state);
  if (!controls.force && !(result.initial.margin > controls.eps_par))
    throw rejection_error(result.initial.margin,
                          static_cast<std::ptrdiff_t>(result.initial.worst_point),
                          result.initial.worst_plane);

  const double t_eps = 1e-14 * std::max(1.0, std::abs(t_end));
  while (state.t < t_end - t_eps) {
    double dt = std::min({dt0, dt_cap(), t_end - state.t});
    bool stepped = false;
    while (!stepped) {
      if (dt < controls.dt_min) {
        result.reason = StopReason::StepUnderflow;
        return result;
      }
      try {
        State next = do_step(state, dt);
        state = std::move(next);
        stepped = true;
      } catch (const definiteness_error&) {
        dt /= 2;  // stage lost definiteness
      }
    }
    ++result.steps;

    const Diagnostics d = do_monitor(state);
    const DiagRow row{state.t, dt, d.margin, d.max_riem, d.min_eig_g};
    result.trajectory.push_back(row);
    if (on_step) on_step(state, row);

    if (!(d.margin > controls.eps_par)) {
      result.reason = StopReason::ParabolicityLost;
      return result;
    }
    if (d.max_riem > controls.m_max) {
      result.reason = StopReason::CurvatureBlowup;
      return result;
    }
    if (d.min_eig_g < controls.eps_g) {
      result.reason = StopReason::MetricDegeneracy;
      return result;
    }
  }
  result.reason = StopReason::TEndReached;
  return result;
}

}  // namespace

RunResult run(FlowState& state, double dt0, double t_end,
              const RunControls& controls,
              const std::function<void(const FlowState&, const DiagRow&)>&
                  on_step) {
  const double h = state.field.grid().spacing();
  double lambda = 1.0;
  long steps_at_refresh = -1;
  long accepted = 0;

  const auto do_monitor = [&](FlowState& s) {
    const CurvatureField curv = curvature(s.field, /*with_extrema=*/true);
    // refresh the CFL scale every controls.lambda_every accepted steps
    if (steps_at_refresh < 0 ||
        accepted - steps_at_refresh >= controls.lambda_every) {
      lambda = symbol_sup(s.field, curv, s.flow);
      steps_at_refresh = accepted;
    }
    s.diag = monitor(s.field, curv, s.flow);
    return s.diag;
  };
  const auto do_step = [&](const FlowState& s, double dt) {
    FlowState next = step_rk4(s, dt);
    ++accepted;
    return next;
  };
  const auto dt_cap = [&] { return controls.cfl * h * h / lambda; };

  return run_loop(state, dt0, t_end, controls, do_step, do_monitor, dt_cap,
                  on_step);
}

SymBilinear3d const_curvature_rhs(const ConstCurvatureState& state) {
  const double c = state.scale();
  if (!(c > 0)) throw definiteness_error(c);
  const double k = state.k0 / c;
  const SymBilinear3d ric = (2.0 * k) * state.g;
  const Curv3d riem = constant_curvature(k, state.g);
  return rhs_point(state.g, ric, riem, state.flow);
}

ConstCurvatureState step_rk4(const ConstCurvatureState& state, double dt) {
  const auto f = [&](const SymBilinear3d& g) {
    ConstCurvatureState s = state;
    s.g = g;
    return const_curvature_rhs(s);
  };
  const SymBilinear3d k1 = f(state.g);
  const SymBilinear3d k2 = f(state.g + (dt / 2) * k1);
  const SymBilinear3d k3 = f(state.g + (dt / 2) * k2);
  const SymBilinear3d k4 = f(state.g + dt * k3);
  ConstCurvatureState next = state;
  next.t += dt;
  next.g = state.g + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return next;
}

RunResult run_point(ConstCurvatureState& state, double dt0, double t_end,
                    const RunControls& controls,
                    const std::function<void(const ConstCurvatureState&,
                                             const DiagRow&)>& on_step) {
  const auto do_monitor = [&](const ConstCurvatureState& s) {
    Diagnostics d;
    const double c = s.scale();
    const double k = s.k0 / c;
    const double mu = 2.0 * k;  // Ric = 2k g
    d.margin = flow_margin(s.flow, k, k, mu, mu);
    d.max_riem = std::abs(k);
    d.min_eig_g = s.g.min_eigenvalue();
    d.worst_point = 0;
    d.worst_plane = sectional_extrema(constant_curvature(k, s.g), s.g).plane_min;
    return d;
  };
  const auto do_step = [](const ConstCurvatureState& s, double dt) {
    ConstCurvatureState next = step_rk4(s, dt);
    if (!(next.g.min_eigenvalue() > 0)) {
      // signal the runner to halve dt rather than leave the cone
      throw definiteness_error(next.g.min_eigenvalue());
    }
    return next;
  };
  const auto dt_cap = [] { return std::numeric_limits<double>::infinity(); };
  return run_loop(state, dt0, t_end, controls, do_step, do_monitor, dt_cap,
                  on_step);
}

namespace {

// Dormand-Prince 4(5) pair for the scalar reference ODE.
struct Dopri5 {
  template <typename F>
  static bool step(F&& f, double& t, double& y, double& h, double tol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                            e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                            e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const double k1 = f(y);
    const double k2 = f(y + h * a21 * k1);
    const double k3 = f(y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(y5);
    const double y4 =
        y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = tol * std::max(1.0, std::max(std::abs(y), std::abs(y5)));
    const double err = std::abs(y5 - y4);
    if (err <= scale) {
      t += h;
      y = y5;
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(scale / std::max(err, 1e-300), 0.2)));
      return true;
    }
    h *= std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
    return false;
  }
};

}  // namespace

OdeResult ode_reference_at(double k0, double a, double c0,
                           const std::vector<double>& sample_times) {
  if (!(c0 > 0)) throw definiteness_error(c0);
  const auto f = [&](double c) { return -4.0 * k0 - 4.0 * a * k0 * k0 / c; };
  constexpr double tol = 1e-12;
  const double c_floor = 1e-12 * std::max(1.0, c0);

  OdeResult result;
  double t = 0.0, c = c0;
  double h = 1e-4;
  for (double ts : sample_times) {
    while (t < ts - 1e-15 * std::max(1.0, ts)) {
      double h_try = std::min(h, ts - t);
      // bisect the step if it would cross extinction
      for (;;) {
        double t2 = t, c2 = c, h2 = h_try;
        if (!Dopri5::step(f, t2, c2, h2, tol)) {
          if (h2 < 1e-16) {  // stiff collapse towards c = 0
            result.extinction_time = t;
            return result;
          }
          h = h_try = h2;
          continue;
        }
        if (c2 <= c_floor) {
          if (h_try < 1e-14 * std::max(1.0, t)) {
            result.extinction_time = t2;
            return result;
          }
          h_try /= 2;
          continue;
        }
        t = t2;
        c = c2;
        h = std::min(h2, 1.0);
        break;
      }
      if (c <= 2 * c_floor) {
        result.extinction_time = t;
        return result;
      }
    }
    result.samples.emplace_back(ts, c);
  }
  return result;
}

OdeResult ode_reference(double k0, double a, double c0, double t_end,
                        int n_samples) {
  std::vector<double> times;
  const int n = std::max(2, n_samples);
  times.reserve(n);
  for (int i = 0; i < n; ++i) times.push_back(t_end * i / (n - 1));
  return ode_reference_at(k0, a, c0, times);
}

}  // namespace rg2
