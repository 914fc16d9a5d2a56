#pragma once

// Geometry presets for runs and tests.

#include <cstdint>

#include "rg2/chart.hpp"
#include "rg2/integrate.hpp"

namespace rg2 {

MetricField make_flat_field(int n, int dim = 1);

/// Flat T^1 metric plus a seeded random trigonometric perturbation: each of
/// the six components gets modes sin(m x), cos(m x), m = 3..6, with uniform
/// coefficients scaled so the total perturbation stays within `amplitude`.
MetricField make_flat_perturbed_1d(int n, double amplitude, std::uint64_t seed);

/// Warped product metric diag(1, f^2, f^2), f(x) = 1 + amplitude * sin(x).
MetricField make_warped_1d(int n, double amplitude);

/// Pointwise state on the constant-curvature ray c(t) g0 with g0 = identity
/// of sectional curvature k0 (curvature supplied algebraically).
ConstCurvatureState make_const_curvature_state(double k0, double c0,
                                               const Flow& flow);

}  // namespace rg2
