#include "rg2/chart.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rg2/flows.hpp"

namespace rg2 {

namespace detail {
bool flip_curvature_sign = false;
}

std::size_t GridSpec::neighbor(std::size_t flat, int axis, int shift) const {
  if (dim == 1) return index(static_cast<int>(flat) + shift);
  const int nn = n;
  int k = static_cast<int>(flat % nn);
  int j = static_cast<int>((flat / nn) % nn);
  int i = static_cast<int>(flat / (static_cast<std::size_t>(nn) * nn));
  if (axis == 0) i += shift;
  else if (axis == 1) j += shift;
  else k += shift;
  return index(i, j, k);
}

Eigen::Vector3d GridSpec::coords(std::size_t flat) const {
  const double h = spacing();
  if (dim == 1) return {static_cast<double>(flat) * h, 0.0, 0.0};
  const int nn = n;
  const auto k = flat % nn;
  const auto j = (flat / nn) % nn;
  const auto i = flat / (static_cast<std::size_t>(nn) * nn);
  return {i * h, j * h, k * h};
}

MetricField::MetricField(GridSpec grid, std::string chart_name, Sym2Field data,
                         bool allow_large_3d)
    : grid_(grid), chart_(std::move(chart_name)), data_(std::move(data)) {
  if (grid_.dim != 1 && grid_.dim != 3)
    throw grid_error("grid dimension must be 1 or 3");
  if (grid_.n < 5) throw grid_error("grid needs at least 5 points per axis");
  if (grid_.dim == 3 && grid_.n > 32 && !allow_large_3d)
    throw grid_error("3D grids are bounded to n <= 32 by default");
  if (data_.size() != grid_.point_count())
    throw grid_error("field data size does not match the grid");
}

MetricField MetricField::constant(GridSpec grid, const SymBilinear3d& value,
                                  std::string chart_name) {
  return MetricField(grid, std::move(chart_name),
                     Sym2Field(grid.point_count(), value));
}

MetricField MetricField::add_scaled(double s, const Sym2Field& h) const {
  if (h.size() != data_.size()) throw grid_error("field size mismatch");
  Sym2Field out(data_.size());
  for (std::size_t p = 0; p < data_.size(); ++p)
    out[p] = data_[p] + s * h[p];
  return MetricField(grid_, chart_, std::move(out), /*allow_large_3d=*/true);
}

PointCurvature curvature_from_jet(const MetricJet2& jet) {
  const SymBilinear3d ginv_s = inverse_metric(jet.g);
  const Eigen::Matrix3d ginv = ginv_s.matrix();
  const Eigen::Matrix3d g = jet.g.matrix();

  PointCurvature pc;
  // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double acc = 0;
        for (int l = 0; l < 3; ++l)
          acc += ginv(k, l) * (jet.dg[i](j, l) + jet.dg[j](i, l) -
                               jet.dg[l](i, j));
        pc.gamma[k](i, j) = acc / 2;
        pc.gamma[k](j, i) = acc / 2;
      }
  }

  // d_m g^{kl} = -(g^-1 d_m g g^-1)^{kl}
  std::array<Eigen::Matrix3d, 3> dginv;
  for (int m = 0; m < 3; ++m)
    dginv[m] = -(ginv * jet.dg[m].matrix() * ginv);

  // d_m Gamma^k_ij
  double dgamma[3][3][3][3];
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double acc = 0;
          for (int l = 0; l < 3; ++l) {
            acc += dginv[m](k, l) * (jet.dg[i](j, l) + jet.dg[j](i, l) -
                                     jet.dg[l](i, j));
            acc += ginv(k, l) * (jet.ddg[m][i](j, l) + jet.ddg[m][j](i, l) -
                                 jet.ddg[m][l](i, j));
          }
          dgamma[m][k][i][j] = acc / 2;
          dgamma[m][k][j][i] = acc / 2;
        }

  // Riem(d_i, d_j) d_k = R^l_ijk d_l with
  // R^l_ijk = d_j Gamma^l_ik - d_i Gamma^l_jk
  //           + Gamma^p_ik Gamma^l_jp - Gamma^p_jk Gamma^l_ip
  double rlow[3][3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double rup[3];
        for (int l = 0; l < 3; ++l) {
          double acc = dgamma[j][l][i][k] - dgamma[i][l][j][k];
          for (int p = 0; p < 3; ++p)
            acc += pc.gamma[p](i, k) * pc.gamma[l](j, p) -
                   pc.gamma[p](j, k) * pc.gamma[l](i, p);
          rup[l] = acc;
        }
        for (int l = 0; l < 3; ++l) {
          double acc = 0;
          for (int m = 0; m < 3; ++m) acc += g(l, m) * rup[m];
          rlow[i][j][k][l] = detail::flip_curvature_sign ? -acc : acc;
        }
      }

  // Project onto the structural storage. The (i,j)-antisymmetry is exact in
  // the formula above; the (k,l)-antisymmetry and pair symmetry hold only up
  // to truncation error for FD jets, so average them out.
  Eigen::Matrix3d t;
  for (int a = 0; a < 3; ++a) {
    const int i = detail::kBivPair[a][0], j = detail::kBivPair[a][1];
    for (int b = 0; b < 3; ++b) {
      const int k = detail::kBivPair[b][0], l = detail::kBivPair[b][1];
      t(a, b) = (rlow[i][j][k][l] - rlow[i][j][l][k]) / 2;
    }
  }
  pc.riem = Curv3d(Eigen::Matrix3d(((t + t.transpose()) / 2)), jet.g);
  pc.ricci = ricci_from_riemann(pc.riem, jet.g);
  pc.scalar = pc.ricci.trace_with(ginv_s);
  return pc;
}

namespace {

// Derivative fields of the metric: first along every active axis, second
// pure along each axis, mixed by nested first derivatives (3D only).
struct MetricDerivatives {
  std::array<Sym2Field, 3> d1;
  std::array<std::array<Sym2Field, 3>, 3> d2;
};

MetricDerivatives metric_derivatives(const MetricField& field) {
  const GridSpec& grid = field.grid();
  MetricDerivatives d;
  for (int a = 0; a < grid.dim; ++a)
    d.d1[a] = axis_derivative1(grid, field.data(), a);
  for (int a = 0; a < grid.dim; ++a)
    d.d2[a][a] = axis_derivative2(grid, field.data(), a);
  for (int a = 0; a < grid.dim; ++a)
    for (int b = a + 1; b < grid.dim; ++b) {
      d.d2[a][b] = axis_derivative1(grid, d.d1[a], b);
      d.d2[b][a] = d.d2[a][b];
    }
  return d;
}

MetricJet2 jet_at(const MetricField& field, const MetricDerivatives& d,
                  std::size_t p) {
  MetricJet2 jet;
  jet.g = field.at(p);
  const int dim = field.grid().dim;
  for (int a = 0; a < 3; ++a) {
    jet.dg[a] = a < dim ? d.d1[a][p] : SymBilinear3d::Zero();
    for (int b = 0; b < 3; ++b)
      jet.ddg[a][b] = (a < dim && b < dim) ? d.d2[a][b][p]
                                           : SymBilinear3d::Zero();
  }
  return jet;
}

}  // namespace

bool curvature_sign_self_check() {
  // Stereographic chart of the unit round sphere: g = 4 delta / (1+|x|^2)^2,
  // constant sectional curvature +1. Exact 2-jet at an off-center point.
  const Eigen::Vector3d x(0.1, -0.2, 0.3);
  const double r2 = x.squaredNorm();
  const double w = 1.0 + r2;
  const double phi = 4.0 / (w * w);
  MetricJet2 jet;
  jet.g = phi * SymBilinear3d::Identity();
  for (int k = 0; k < 3; ++k)
    jet.dg[k] = (-16.0 * x[k] / (w * w * w)) * SymBilinear3d::Identity();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      const double dd = -16.0 * (k == l ? 1.0 : 0.0) / (w * w * w) +
                        96.0 * x[k] * x[l] / (w * w * w * w);
      jet.ddg[k][l] = dd * SymBilinear3d::Identity();
    }
  const PointCurvature pc = curvature_from_jet(jet);
  const SectionalRanged r = sectional_extrema(pc.riem, jet.g);
  return std::abs(r.kmin - 1.0) < 1e-8 && std::abs(r.kmax - 1.0) < 1e-8;
}

ChristoffelField christoffel(const MetricField& field) {
  const MetricDerivatives d = metric_derivatives(field);
  ChristoffelField out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    try {
      const SymBilinear3d ginv = inverse_metric(field.at(p));
      const Eigen::Matrix3d gi = ginv.matrix();
      const MetricJet2 jet = jet_at(field, d, p);
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) {
            double acc = 0;
            for (int l = 0; l < 3; ++l)
              acc += gi(k, l) * (jet.dg[i](j, l) + jet.dg[j](i, l) -
                                 jet.dg[l](i, j));
            out[p][k](i, j) = acc / 2;
            out[p][k](j, i) = acc / 2;
          }
    } catch (const definiteness_error& e) {
      throw definiteness_error(e.eigenvalue(), static_cast<std::ptrdiff_t>(p));
    }
  }
  return out;
}

CurvatureField curvature(const MetricField& field, bool with_extrema) {
  if (!curvature_sign_self_check())
    throw std::logic_error(
        "curvature sign convention self-check failed (round sphere K != +1)");
  const MetricDerivatives d = metric_derivatives(field);
  CurvatureField out;
  const std::size_t np = field.size();
  out.gamma.resize(np);
  out.riem.resize(np);
  out.ricci.resize(np);
  out.scalar.resize(np);
  if (with_extrema) {
    out.kmin.resize(np);
    out.kmax.resize(np);
  }
  for (std::size_t p = 0; p < np; ++p) {
    try {
      const PointCurvature pc = curvature_from_jet(jet_at(field, d, p));
      out.gamma[p] = pc.gamma;
      out.riem[p] = pc.riem;
      out.ricci[p] = pc.ricci;
      out.scalar[p] = pc.scalar;
      if (with_extrema) {
        const SectionalRanged r = sectional_extrema(pc.riem, field.at(p));
        out.kmin[p] = r.kmin;
        out.kmax[p] = r.kmax;
      }
    } catch (const definiteness_error& e) {
      throw definiteness_error(e.eigenvalue(), static_cast<std::ptrdiff_t>(p));
    }
  }
  return out;
}

std::vector<std::array<SymBilinear3d, 3>> covariant_derivative_sym2(
    const MetricField& field, const ChristoffelField& gamma,
    const Sym2Field& t) {
  if (t.size() != field.size() || gamma.size() != field.size())
    throw grid_error("field size mismatch");
  const GridSpec& grid = field.grid();
  std::array<Sym2Field, 3> dt;
  for (int a = 0; a < grid.dim; ++a) dt[a] = axis_derivative1(grid, t, a);

  std::vector<std::array<SymBilinear3d, 3>> out(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const Eigen::Matrix3d tm = t[p].matrix();
    for (int i = 0; i < 3; ++i) {
      // A(l, k) = Gamma^l_ik; nabla_i T = dT_i - A^T T - T A
      Eigen::Matrix3d a;
      for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k) a(l, k) = gamma[p][l](i, k);
      const Eigen::Matrix3d di =
          i < grid.dim ? dt[i][p].matrix() : Eigen::Matrix3d::Zero();
      out[p][i] = SymBilinear3d::FromMatrix(di - a.transpose() * tm - tm * a);
    }
  }
  return out;
}

std::vector<std::array<SymBilinear3d, 3>> covariant_derivative_sym2(
    const MetricField& field, const Sym2Field& t) {
  return covariant_derivative_sym2(field, christoffel(field), t);
}

namespace {

Sym2Field rhs_of(const MetricField& field, const Flow& flow) {
  return rhs(field, curvature(field, /*with_extrema=*/false), flow);
}

Sym2Field rhs_gauge_of(const MetricField& field, const Flow& flow,
                       const MetricField& g0) {
  return rhs_gauge_fixed(field, curvature(field, /*with_extrema=*/false), flow,
                         g0);
}

template <typename RhsFn>
Sym2Field central_difference(const MetricField& field, const Sym2Field& h,
                             double s, RhsFn&& f) {
  if (!(s > 0)) throw step_error("linearization step must be positive");
  try {
    const Sym2Field lp = f(field.add_scaled(s, h));
    const Sym2Field lm = f(field.add_scaled(-s, h));
    Sym2Field out(lp.size());
    for (std::size_t p = 0; p < lp.size(); ++p)
      out[p] = (lp[p] - lm[p]) / (2 * s);
    return out;
  } catch (const definiteness_error& e) {
    throw step_error(std::string("linearization step too large: ") + e.what());
  }
}

}  // namespace

Sym2Field linearize_L(const MetricField& field, const Sym2Field& h,
                      const Flow& flow, double s) {
  return central_difference(field, h, s, [&](const MetricField& g) {
    return rhs_of(g, flow);
  });
}

Sym2Field linearize_gauge_fixed(const MetricField& field, const Sym2Field& h,
                                const Flow& flow, const MetricField& g0,
                                double s) {
  return central_difference(field, h, s, [&](const MetricField& g) {
    return rhs_gauge_of(g, flow, g0);
  });
}

}  // namespace rg2
