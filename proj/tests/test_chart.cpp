#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rg2/chart.hpp"
#include "rg2/flows.hpp"
#include "rg2/presets.hpp"
#include "rg2/random.hpp"
#include "rg2/symbol.hpp"

using namespace rg2;

namespace {

double max_field_abs(const Sym2Field& f) {
  double m = 0;
  for (const auto& s : f) m = std::max(m, s.max_abs());
  return m;
}

// g11 = a(x) only: Gamma^1_11 = a'/(2a), analytically flat
MetricField make_stretched_1d(int n, double amp) {
  GridSpec grid;
  grid.dim = 1;
  grid.n = n;
  Sym2Field data(grid.point_count());
  for (std::size_t p = 0; p < data.size(); ++p) {
    const double x = grid.coords(p)[0];
    data[p] = SymBilinear3d::Diagonal(1.0 + amp * std::sin(x), 1.0, 1.0);
  }
  return MetricField(grid, "stretched-1d", std::move(data));
}

}  // namespace

TEST_CASE("grid indexing wraps periodically") {
  GridSpec g1{1, 8, 2 * EIGEN_PI};
  CHECK(g1.neighbor(0, 0, -1) == 7);
  CHECK(g1.neighbor(7, 0, 2) == 1);
  GridSpec g3{3, 5, 2 * EIGEN_PI};
  const std::size_t p = g3.index(4, 0, 3);
  CHECK(g3.neighbor(p, 0, 1) == g3.index(0, 0, 3));
  CHECK(g3.neighbor(p, 1, -1) == g3.index(4, 4, 3));
  CHECK(g3.neighbor(p, 2, 2) == g3.index(4, 0, 0));
}

TEST_CASE("grid construction guards") {
  GridSpec bad{2, 8, 2 * EIGEN_PI};
  CHECK_THROWS_AS(MetricField::constant(bad, SymBilinear3d::Identity()),
                  grid_error);
  GridSpec large{3, 48, 2 * EIGEN_PI};
  CHECK_THROWS_AS(MetricField::constant(large, SymBilinear3d::Identity()),
                  grid_error);
}

TEST_CASE("christoffel: constant field vanishes") {
  const MetricField field = make_flat_field(16);
  for (const auto& gamma : christoffel(field))
    for (int k = 0; k < 3; ++k)
      CHECK(gamma[k].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("christoffel: hand-differentiated 1D example") {
  // g = diag(1 + 0.1 sin x, 1, 1): Gamma^1_11 = 0.05 cos x / (1 + 0.1 sin x)
  const int n = 128;
  const MetricField field = make_stretched_1d(n, 0.1);
  const ChristoffelField gamma = christoffel(field);
  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    const double want = 0.05 * std::cos(x) / (1.0 + 0.1 * std::sin(x));
    worst = std::max(worst, std::abs(gamma[p][0](0, 0) - want));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("christoffel: 4th-order convergence") {
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const int n = level == 0 ? 64 : 128;
    const MetricField field = make_stretched_1d(n, 0.4);
    const ChristoffelField gamma = christoffel(field);
    double worst = 0;
    for (std::size_t p = 0; p < field.size(); ++p) {
      const double x = field.grid().coords(p)[0];
      const double want = 0.2 * std::cos(x) / (1.0 + 0.4 * std::sin(x));
      worst = std::max(worst, std::abs(gamma[p][0](0, 0) - want));
    }
    err[level] = worst;
  }
  const double ratio = err[0] / err[1];
  CHECK(ratio > 12.8);
  CHECK(ratio < 19.2);
}

TEST_CASE("curvature: flat torus is flat, 1D and 3D") {
  for (int dim : {1, 3}) {
    const MetricField field = make_flat_field(dim == 1 ? 32 : 8, dim);
    const CurvatureField curv = curvature(field);
    for (std::size_t p = 0; p < field.size(); ++p) {
      CHECK(curv.riem[p].max_abs() < 1e-12);
      CHECK(curv.ricci[p].max_abs() < 1e-12);
      CHECK(std::abs(curv.kmax[p]) < 1e-12);
    }
  }
}

TEST_CASE("curvature: stretched metric is flat up to truncation") {
  const MetricField field = make_stretched_1d(128, 0.1);
  const CurvatureField curv = curvature(field, false);
  for (std::size_t p = 0; p < field.size(); ++p)
    CHECK(curv.riem[p].max_abs() < 1e-7);
}

TEST_CASE("curvature: warped-product analytic oracle") {
  const int n = 128;
  const double amp = 0.1;
  const MetricField field = make_warped_1d(n, amp);
  const CurvatureField curv = curvature(field);
  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    const double f = 1.0 + amp * std::sin(x);
    const double fp = amp * std::cos(x);
    const double fpp = -amp * std::sin(x);
    SymBilinear3d exact;
    exact(0, 0) = -2 * fpp / f;
    exact(1, 1) = exact(2, 2) = -(f * fpp + fp * fp);
    worst = std::max(worst, (curv.ricci[p] - exact).max_abs());
    // sectional extrema bracket the two principal values
    const double k_mixed = -fpp / f;
    const double k_fiber = -fp * fp / (f * f);
    CHECK(curv.kmin[p] < std::min(k_mixed, k_fiber) + 1e-6);
    CHECK(curv.kmax[p] > std::max(k_mixed, k_fiber) - 1e-6);
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("curvature: exact-jet injection of the round sphere gives K = 1") {
  CHECK(curvature_sign_self_check());
  // the same jet, assembled here, end to end through the kernel
  const Eigen::Vector3d x(0.25, 0.1, -0.3);
  const double w = 1.0 + x.squaredNorm();
  MetricJet2 jet;
  jet.g = (4.0 / (w * w)) * SymBilinear3d::Identity();
  for (int k = 0; k < 3; ++k)
    jet.dg[k] = (-16.0 * x[k] / (w * w * w)) * SymBilinear3d::Identity();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      jet.ddg[k][l] = (-16.0 * (k == l) / (w * w * w) +
                       96.0 * x[k] * x[l] / (w * w * w * w)) *
                      SymBilinear3d::Identity();
  const PointCurvature pc = curvature_from_jet(jet);
  const auto range = sectional_extrema(pc.riem, jet.g);
  CHECK(range.kmin == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(range.kmax == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((pc.ricci - 2.0 * jet.g).max_abs() < 1e-8);
}

TEST_CASE("curvature sign fault injection makes the self-check fail") {
  detail::flip_curvature_sign = true;
  CHECK_FALSE(curvature_sign_self_check());
  const MetricField field = make_flat_field(8);
  CHECK_THROWS_AS((void)curvature(field), std::logic_error);
  detail::flip_curvature_sign = false;
  CHECK(curvature_sign_self_check());
}

TEST_CASE("covariant_derivative_sym2: metric compatibility and trivial cases") {
  const MetricField field = make_warped_1d(256, 0.1);
  const auto nabla_g = covariant_derivative_sym2(field, field.data());
  double worst = 0;
  for (const auto& per_point : nabla_g)
    for (const auto& d : per_point) worst = std::max(worst, d.max_abs());
  CHECK(worst < 1e-10);

  // constant tensor on a flat metric
  const MetricField flat = make_flat_field(16);
  const Sym2Field t(flat.size(), SymBilinear3d::Diagonal(1.0, 2.0, 3.0));
  const auto nabla_t = covariant_derivative_sym2(flat, t);
  for (const auto& per_point : nabla_t)
    for (const auto& d : per_point) CHECK(d.max_abs() == 0.0);
}

TEST_CASE("covariant_derivative_sym2: linearity and scalar product rule") {
  Rng rng(31);
  const MetricField field = make_warped_1d(256, 0.15);
  const ChristoffelField gamma = christoffel(field);
  Sym2Field t(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    SymBilinear3d s;
    s(0, 0) = std::sin(2 * x);
    s(1, 1) = 0.5 * std::cos(x);
    s(0, 2) = 0.3 * std::sin(x);
    s(2, 2) = 1.0;
    t[p] = s;
  }
  const auto nabla_t = covariant_derivative_sym2(field, gamma, t);

  // linearity in T
  Sym2Field t2(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) t2[p] = 2.5 * t[p];
  const auto nabla_t2 = covariant_derivative_sym2(field, gamma, t2);
  for (std::size_t p = 0; p < field.size(); ++p)
    for (int i = 0; i < 3; ++i)
      CHECK((nabla_t2[p][i] - 2.5 * nabla_t[p][i]).max_abs() < 1e-12);

  // product rule oracle: d_i tr_g(T) = g^{jk} (nabla_i T)_jk
  std::vector<double> tr(field.size());
  for (std::size_t p = 0; p < field.size(); ++p)
    tr[p] = t[p].trace_with(inverse_metric(field.at(p)));
  const std::vector<double> dtr = axis_derivative1(field.grid(), tr, 0);
  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double via_nabla =
        nabla_t[p][0].trace_with(inverse_metric(field.at(p)));
    worst = std::max(worst, std::abs(dtr[p] - via_nabla));
  }
  CHECK(worst < 1e-6);  // both sides carry independent stencil error
}

TEST_CASE("3D stencils (all axes, mixed partials) agree with exact jets") {
  // multi-axis metric with an off-diagonal component: every first- and
  // second-derivative stencil, including the nested mixed partials across
  // all axis pairs, contributes
  struct Component {
    int i, j;
    double amp;
    int wx, wy, wz;  // g_ij += amp sin(wx x) sin(wy y) sin(wz z), w = 0: factor 1
  };
  const std::vector<Component> comps = {
      {0, 0, 0.10, 1, 1, 0}, {0, 2, 0.05, 0, 1, 1}, {1, 1, 0.08, 0, 0, 2},
      {1, 2, 0.04, 1, 0, 1}, {2, 2, 0.06, 2, 1, 0}};
  const auto wave = [](int w, double x) { return w ? std::sin(w * x) : 1.0; };
  const auto dwave = [](int w, double x) {
    return w ? w * std::cos(w * x) : 0.0;
  };
  const auto ddwave = [](int w, double x) {
    return w ? -double(w) * w * std::sin(w * x) : 0.0;
  };

  const auto exact_jet = [&](const Eigen::Vector3d& c) {
    MetricJet2 jet;
    jet.g = SymBilinear3d::Identity();
    for (int a = 0; a < 3; ++a) jet.dg[a] = SymBilinear3d::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) jet.ddg[a][b] = SymBilinear3d::Zero();
    for (const Component& m : comps) {
      const int w[3] = {m.wx, m.wy, m.wz};
      double f[3], df[3], ddf[3];
      for (int a = 0; a < 3; ++a) {
        f[a] = wave(w[a], c[a]);
        df[a] = dwave(w[a], c[a]);
        ddf[a] = ddwave(w[a], c[a]);
      }
      jet.g(m.i, m.j) += m.amp * f[0] * f[1] * f[2];
      for (int a = 0; a < 3; ++a) {
        double d = m.amp;
        for (int x = 0; x < 3; ++x) d *= (x == a) ? df[x] : f[x];
        jet.dg[a](m.i, m.j) += d;
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double d = m.amp;
          if (a == b) {
            for (int x = 0; x < 3; ++x) d *= (x == a) ? ddf[x] : f[x];
          } else {
            for (int x = 0; x < 3; ++x)
              d *= (x == a || x == b) ? df[x] : f[x];
          }
          jet.ddg[a][b](m.i, m.j) += d;
        }
    }
    return jet;
  };

  double err[2];
  int level = 0;
  for (int n : {12, 24}) {
    GridSpec grid;
    grid.dim = 3;
    grid.n = n;
    Sym2Field data(grid.point_count());
    for (std::size_t p = 0; p < data.size(); ++p)
      data[p] = exact_jet(grid.coords(p)).g;
    const MetricField field(grid, "mixed-3d", std::move(data));
    const CurvatureField curv = curvature(field, false);
    double worst = 0;
    for (std::size_t p = 0; p < field.size(); ++p) {
      const PointCurvature pc =
          curvature_from_jet(exact_jet(field.grid().coords(p)));
      worst = std::max(worst, (curv.ricci[p] - pc.ricci).max_abs());
      worst = std::max(worst, (curv.riem[p].op() - pc.riem.op())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    err[level++] = worst;
  }
  CHECK(err[1] < 5e-4);
  CHECK(err[0] / err[1] > 10.0);  // ~4th order between n=12 and n=24
}

TEST_CASE("definiteness error carries the grid location") {
  MetricField field = make_flat_field(16);
  Sym2Field h(field.size());
  h[5] = SymBilinear3d::Diagonal(-2.0, 0.0, 0.0);
  const MetricField broken = field.add_scaled(1.0, h);
  try {
    (void)curvature(broken);
    FAIL("expected definiteness_error");
  } catch (const definiteness_error& e) {
    CHECK(e.grid_point() == 5);
    CHECK(e.eigenvalue() < 0);
  }
}

TEST_CASE("linearize_L: zero perturbation and flat plane-wave symbol row") {
  const MetricField flat = make_flat_field(256);
  const Sym2Field zero(flat.size());
  CHECK(max_field_abs(linearize_L(flat, zero, Flow::rg2(0.3), 1e-3)) == 0.0);

  // h = h22 cos(omega x): DL(h)/(-omega^2) has components 11 and 22 equal to
  // h22 cos(omega x) (flat symbol rows), everything else zero
  const int omega = 8;
  Sym2Field h(flat.size());
  for (std::size_t p = 0; p < flat.size(); ++p) {
    SymBilinear3d s;
    s(1, 1) = std::cos(omega * flat.grid().coords(p)[0]);
    h[p] = s;
  }
  const Sym2Field dl = linearize_L(flat, h, Flow::rg2(0.3), 1e-4);
  double worst = 0;
  for (std::size_t p = 0; p < flat.size(); ++p) {
    const double cosx = std::cos(omega * flat.grid().coords(p)[0]);
    SymBilinear3d want;
    want(0, 0) = cosx;
    want(1, 1) = cosx;
    worst = std::max(
        worst, (dl[p] / (-double(omega) * omega) - want).max_abs());
  }
  CHECK(worst < 2e-3);  // stencil error at omega h = 8 * 2pi/256
}

TEST_CASE("linearize_L: linearity in h up to O(s^2)") {
  const MetricField field = make_warped_1d(128, 0.1);
  Rng rng(32);
  Sym2Field h(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    SymBilinear3d s;
    s(0, 0) = 0.4 * std::cos(3 * x);
    s(1, 2) = 0.2 * std::sin(5 * x);
    s(2, 2) = 0.3 * std::cos(x);
    h[p] = s;
  }
  const double s_step = 1e-3;
  const Sym2Field l1 = linearize_L(field, h, Flow::rg2(0.2), s_step);
  Sym2Field h2(field.size());
  for (std::size_t p = 0; p < field.size(); ++p) h2[p] = 2.0 * h[p];
  const Sym2Field l2 = linearize_L(field, h2, Flow::rg2(0.2), s_step);
  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p)
    worst = std::max(worst, (l2[p] - 2.0 * l1[p]).max_abs());
  CHECK(worst < 1e-4);  // cubic remainder ~ s^2
}

TEST_CASE("linearize_L: step too large raises step_error") {
  const MetricField flat = make_flat_field(16);
  const Sym2Field h(flat.size(), SymBilinear3d::Diagonal(1.0, 1.0, 1.0));
  CHECK_THROWS_AS((void)linearize_L(flat, h, Flow::ricci(), 2.0), step_error);
}
