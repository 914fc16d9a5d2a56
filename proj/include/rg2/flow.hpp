#pragma once

#include <cmath>
#include <string>

#include "rg2/errors.hpp"

namespace rg2 {

/// The quadratic curvature flows handled by this laboratory, as right-hand
/// sides of d/dt g = L g:
///   Ricci        : -2 Ric
///   RG2 (a)      : -2 Ric - a Riem^2            (Riem^2 = full contraction)
///   RG2Zero (a)  : -a Riem^2                    (scaling invariant)
///   SquaredRicci : -a Ric^2                     (scaling invariant)
///   Mixed (a)    : -2 Ric - a Ric^2
enum class FlowKind { Ricci, RG2, RG2Zero, SquaredRicci, Mixed };

/// Flow kind plus the coupling a where applicable. a may be negative.
struct Flow {
  FlowKind kind = FlowKind::Ricci;
  double a = 0.0;

  static Flow ricci() { return {FlowKind::Ricci, 0.0}; }
  static Flow rg2(double a) { return {FlowKind::RG2, a}; }
  static Flow rg2_zero(double a) { return {FlowKind::RG2Zero, a}; }
  static Flow squared_ricci(double a) { return {FlowKind::SquaredRicci, a}; }
  static Flow mixed(double a) { return {FlowKind::Mixed, a}; }

  /// Effective coupling in front of the quadratic term (0 for Ricci).
  double coupling() const { return kind == FlowKind::Ricci ? 0.0 : a; }
};

inline std::string flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::Ricci: return "ricci";
    case FlowKind::RG2: return "rg2";
    case FlowKind::RG2Zero: return "rg2zero";
    case FlowKind::SquaredRicci: return "squared-ricci";
    case FlowKind::Mixed: return "mixed";
  }
  return "?";
}

inline FlowKind flow_kind_from_name(const std::string& name) {
  if (name == "ricci") return FlowKind::Ricci;
  if (name == "rg2") return FlowKind::RG2;
  if (name == "rg2zero") return FlowKind::RG2Zero;
  if (name == "squared-ricci") return FlowKind::SquaredRicci;
  if (name == "mixed") return FlowKind::Mixed;
  throw grid_error("unknown flow kind '" + name + "'");
}

/// Parabolicity margin of the gauge-fixed flow from the sectional range
/// [kmin, kmax] and the Ricci eigenvalue range [mu_min, mu_max]:
///   Ricci        : 1
///   RG2          : min over planes of 1 + 2 a K
///   RG2Zero      : min over planes of a K
///   SquaredRicci : min over Ricci eigenvalues of a mu
///   Mixed        : min over Ricci eigenvalues of 1 + a mu
/// The flow is accepted iff the margin exceeds eps_par.
inline double flow_margin(const Flow& flow, double kmin, double kmax,
                          double mu_min, double mu_max) {
  switch (flow.kind) {
    case FlowKind::Ricci:
      return 1.0;
    case FlowKind::RG2:
      return std::min(1.0 + 2.0 * flow.a * kmin, 1.0 + 2.0 * flow.a * kmax);
    case FlowKind::RG2Zero:
      return std::min(flow.a * kmin, flow.a * kmax);
    case FlowKind::SquaredRicci:
      return std::min(flow.a * mu_min, flow.a * mu_max);
    case FlowKind::Mixed:
      return std::min(1.0 + flow.a * mu_min, 1.0 + flow.a * mu_max);
  }
  return 0.0;
}

/// Largest eigenvalue of the gauge-fixed principal symbol over all
/// directions at a point (always >= 1); the parabolic CFL scale.
inline double flow_symbol_sup(const Flow& flow, double kmin, double kmax,
                              double mu_min, double mu_max) {
  double top = 1.0;
  switch (flow.kind) {
    case FlowKind::Ricci:
      break;
    case FlowKind::RG2:
      top = std::max(1.0 + 2.0 * flow.a * kmin, 1.0 + 2.0 * flow.a * kmax);
      break;
    case FlowKind::RG2Zero:
      top = std::max(2.0 * flow.a * kmin, 2.0 * flow.a * kmax);
      break;
    case FlowKind::SquaredRicci:
      top = std::max(flow.a * mu_min, flow.a * mu_max);
      break;
    case FlowKind::Mixed:
      top = std::max(1.0 + flow.a * mu_min, 1.0 + flow.a * mu_max);
      break;
  }
  return std::max(1.0, top);
}

}  // namespace rg2
