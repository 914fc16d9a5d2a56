#include "rg2/flows.hpp"

namespace rg2 {

SymBilinear3d rhs_point(const SymBilinear3d& g, const SymBilinear3d& ric,
                        const Curv3d& riem, const Flow& flow,
                        bool full_contraction) {
  const double a = flow.coupling();
  switch (flow.kind) {
    case FlowKind::Ricci:
    case FlowKind::RG2: {
      const SymBilinear3d quad =
          full_contraction ? quad_contraction(riem, g) : quad_via_ricci(ric, g);
      return -2.0 * ric - a * quad;
    }
    case FlowKind::RG2Zero: {
      const SymBilinear3d quad =
          full_contraction ? quad_contraction(riem, g) : quad_via_ricci(ric, g);
      return -a * quad;
    }
    case FlowKind::SquaredRicci:
      return -a * squared_ricci(ric, g);
    case FlowKind::Mixed:
      return -2.0 * ric - a * squared_ricci(ric, g);
  }
  return SymBilinear3d::Zero();
}

Sym2Field rhs(const MetricField& field, const CurvatureField& curv,
              const Flow& flow, bool full_contraction) {
  if (curv.ricci.size() != field.size())
    throw grid_error("curvature field does not match the metric field");
  Sym2Field out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p)
    out[p] = rhs_point(field.at(p), curv.ricci[p], curv.riem[p], flow,
                       full_contraction);
  return out;
}

VectorField deturck_vector(const MetricField& field, const MetricField& g0,
                           const ChristoffelField& gamma) {
  if (!(field.grid() == g0.grid()))
    throw grid_error("background metric lives on a different grid");
  const auto nabla_g0 = covariant_derivative_sym2(field, gamma, g0.data());
  VectorField out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const SymBilinear3d ginv_s = inverse_metric(field.at(p));
    const Eigen::Matrix3d ginv = ginv_s.matrix();
    const Eigen::Matrix3d g0inv = inverse_metric(g0.at(p)).matrix();
    Eigen::Vector3d inner;
    for (int k = 0; k < 3; ++k) {
      // g^{pq} nabla_k (g0)_pq
      const double s = nabla_g0[p][k].trace_with(ginv_s);
      // g^{pq} nabla_p (g0)_qk; the nabla_q term is identical by symmetry
      double t = 0;
      for (int pp = 0; pp < 3; ++pp)
        t += (nabla_g0[p][pp].matrix() * ginv.col(pp))(k);
      inner[k] = s - 2.0 * t;
    }
    out[p] = -0.5 * (g0inv * inner);
  }
  return out;
}

VectorField deturck_vector(const MetricField& field, const MetricField& g0) {
  return deturck_vector(field, g0, christoffel(field));
}

VectorField deturck_vector_trace_form(const MetricField& field,
                                      const MetricField& g0,
                                      const ChristoffelField& gamma) {
  if (!(field.grid() == g0.grid()))
    throw grid_error("background metric lives on a different grid");
  Sym2Field s_field(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const SymBilinear3d ginv = inverse_metric(field.at(p));
    const double trg0 = g0.at(p).trace_with(ginv);
    s_field[p] = 0.5 * trg0 * field.at(p) - g0.at(p);
  }
  const auto nabla_s = covariant_derivative_sym2(field, gamma, s_field);
  VectorField out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const Eigen::Matrix3d ginv = inverse_metric(field.at(p)).matrix();
    const Eigen::Matrix3d g0inv = inverse_metric(g0.at(p)).matrix();
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    for (int pp = 0; pp < 3; ++pp)
      u += nabla_s[p][pp].matrix() * ginv.col(pp);
    out[p] = -(g0inv * u);
  }
  return out;
}

Sym2Field lie_derivative_metric(const MetricField& field, const VectorField& v,
                                const ChristoffelField& gamma) {
  if (v.size() != field.size()) throw grid_error("vector field size mismatch");
  const GridSpec& grid = field.grid();
  VectorField vlow(field.size());
  for (std::size_t p = 0; p < field.size(); ++p)
    vlow[p] = field.at(p).matrix() * v[p];

  std::array<VectorField, 3> dvlow;
  for (int a = 0; a < grid.dim; ++a) dvlow[a] = axis_derivative1(grid, vlow, a);

  Sym2Field out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    Eigen::Matrix3d grad;  // grad(i, k) = nabla_i V_k
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double acc = i < grid.dim ? dvlow[i][p][k] : 0.0;
        for (int l = 0; l < 3; ++l) acc -= gamma[p][l](i, k) * vlow[p][l];
        grad(i, k) = acc;
      }
    out[p] = SymBilinear3d::FromMatrix(grad + grad.transpose());
  }
  return out;
}

Sym2Field lie_derivative_metric(const MetricField& field, const VectorField& v) {
  return lie_derivative_metric(field, v, christoffel(field));
}

DeTurckData deturck_data(const MetricField& field, const ChristoffelField& gamma,
                         const MetricField& g0) {
  DeTurckData d{g0, Sym2Field(g0.size()), deturck_vector(field, g0, gamma), {}};
  for (std::size_t p = 0; p < g0.size(); ++p)
    d.g0_inverse[p] = inverse_metric(g0.at(p));
  d.lie_v_g = lie_derivative_metric(field, d.v, gamma);
  return d;
}

Sym2Field rhs_gauge_fixed(const MetricField& field, const CurvatureField& curv,
                          const Flow& flow, const MetricField& g0) {
  Sym2Field out = rhs(field, curv, flow);
  const VectorField v = deturck_vector(field, g0, curv.gamma);
  const Sym2Field lie = lie_derivative_metric(field, v, curv.gamma);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] -= lie[p];
  return out;
}

}  // namespace rg2
