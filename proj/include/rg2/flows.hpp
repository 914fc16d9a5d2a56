#pragma once

// Right-hand sides of the quadratic curvature flows, the DeTurck vector
// field, the Lie-derivative correction, and gauge-fixed assembly.

#include "rg2/chart.hpp"
#include "rg2/flow.hpp"
#include "rg2/tensor3.hpp"

namespace rg2 {

/// Flow right-hand side at a point from its curvature data. The RG2
/// quadratic term uses the Ricci-decomposition fast path
/// (2R Ric - 2 Ric^2 + 2|Ric|^2 g - R^2 g); full_contraction switches it to
/// the 4-tensor contraction as a verification mode.
SymBilinear3d rhs_point(const SymBilinear3d& g, const SymBilinear3d& ric,
                        const Curv3d& riem, const Flow& flow,
                        bool full_contraction = false);

Sym2Field rhs(const MetricField& field, const CurvatureField& curv,
              const Flow& flow, bool full_contraction = false);

/// DeTurck's vector field,
///   V^j(g) = -1/2 g0^{jk} g^{pq} (nabla_k (g0)_pq - nabla_p (g0)_qk
///                                  - nabla_q (g0)_pk),
/// nabla the Levi-Civita connection of the evolving g; g0 raises the free
/// index. Vanishes at g = g0.
///
/// For a diffeomorphism phi: (M, g) -> (M, g0) one has
/// V(phi^* g) = -Delta_{g, g0} phi (the harmonic-map Laplacian); that
/// identity drives uniqueness arguments and is recorded here, not simulated
/// (no diffeomorphism integration).
VectorField deturck_vector(const MetricField& field, const MetricField& g0,
                           const ChristoffelField& gamma);
VectorField deturck_vector(const MetricField& field, const MetricField& g0);

/// The other displayed form of the same field,
///   V^j(g) = -g0^{jk} g^{pq} nabla_p (1/2 tr_g(g0) g_qk - (g0)_qk),
/// kept as a cross-check of the index reading.
VectorField deturck_vector_trace_form(const MetricField& field,
                                      const MetricField& g0,
                                      const ChristoffelField& gamma);

/// (Lie_V g)_ik = nabla_i V_k + nabla_k V_i.
Sym2Field lie_derivative_metric(const MetricField& field, const VectorField& v,
                                const ChristoffelField& gamma);
Sym2Field lie_derivative_metric(const MetricField& field, const VectorField& v);

/// Everything the gauge correction needs at one evolving metric: the
/// background, its pointwise inverse, the DeTurck field, and its Lie
/// derivative. V vanishes identically at field = g0.
struct DeTurckData {
  MetricField g0;
  Sym2Field g0_inverse;
  VectorField v;
  Sym2Field lie_v_g;
};

DeTurckData deturck_data(const MetricField& field, const ChristoffelField& gamma,
                         const MetricField& g0);

/// rhs(kind) - Lie_V g with V the DeTurck field of (g, g0); the strongly
/// parabolic operator actually integrated. Equals plain rhs at field = g0.
Sym2Field rhs_gauge_fixed(const MetricField& field, const CurvatureField& curv,
                          const Flow& flow, const MetricField& g0);

}  // namespace rg2
