#include "rg2/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "rg2/chart.hpp"
#include "rg2/flows.hpp"
#include "rg2/integrate.hpp"
#include "rg2/presets.hpp"
#include "rg2/random.hpp"
#include "rg2/snapshot_io.hpp"
#include "rg2/symbol.hpp"
#include "rg2/tensor3.hpp"

namespace rg2::verify {

namespace {

std::string fail(const std::string& detail) { return detail; }

std::string pass() { return ""; }

std::string check_bound(double value, double bound, const std::string& label) {
  if (value <= bound) return pass();
  std::ostringstream os;
  os << label << " = " << value << " > " << bound;
  return fail(os.str());
}

double rel_err(const SymBilinear3d& a, const SymBilinear3d& b) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return (a - b).max_abs() / scale;
}

// ---- tensor3 oracles -------------------------------------------------------

std::string inverse_multiply_back() {
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const SymBilinear3d g = rng.spd();
    const SymBilinear3d ginv = inverse_metric(g);
    const Eigen::Matrix3d res =
        g.matrix() * ginv.matrix() - Eigen::Matrix3d::Identity();
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return check_bound(worst, 1e-13, "max |g g^-1 - I|");
}

// four-term Kulkarni-Nomizu formula evaluated directly on dense indices
double kn_direct(const SymBilinear3d& p, const SymBilinear3d& q, int i, int j,
                 int k, int l) {
  return p(i, k) * q(j, l) + p(j, l) * q(i, k) - p(i, l) * q(j, k) -
         p(j, k) * q(i, l);
}

std::string kulkarni_nomizu_formula() {
  Rng rng(102);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d p = rng.sym(), q = rng.sym();
    const Curv3d pq = kulkarni_nomizu(p, q);
    const Curv3d qp = kulkarni_nomizu(q, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            worst = std::max(worst, std::abs(pq.component(i, j, k, l) -
                                             kn_direct(p, q, i, j, k, l)));
            worst = std::max(worst, std::abs(pq.component(i, j, k, l) -
                                             qp.component(i, j, k, l)));
          }
  }
  const SymBilinear3d id = SymBilinear3d::Identity();
  const double gg1212 = kulkarni_nomizu(id, id).component(0, 1, 0, 1);
  if (std::abs(gg1212 - 2.0) > 1e-15)
    return fail("(g ow g)_1212 = " + std::to_string(gg1212) + ", want 2");
  return check_bound(worst, 1e-13, "KN dense mismatch");
}

std::string decomposition_round_trip() {
  Rng rng(103);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SymBilinear3d g = rng.spd();
    const SymBilinear3d ric = rng.sym();
    const SymBilinear3d back = ricci_from_riemann(riemann_from_ricci(ric, g), g);
    worst = std::max(worst, (back - ric).max_abs());
  }
  return check_bound(worst, 1e-12, "round-trip |Ric' - Ric|");
}

std::string quad_identity() {
  Rng rng(104);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SymBilinear3d g = trial % 2 ? rng.spd() : SymBilinear3d::Identity();
    const SymBilinear3d ric = rng.sym();
    const SymBilinear3d a = quad_contraction(riemann_from_ricci(ric, g), g);
    const SymBilinear3d b = quad_via_ricci(ric, g);
    worst = std::max(worst, rel_err(a, b));
  }
  return check_bound(worst, 1e-11, "quad route rel err");
}

std::string trace_identities() {
  Rng rng(105);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = rng.sym();
    const SymBilinear3d g = SymBilinear3d::Identity();
    const Curv3d riem = riemann_from_ricci(ric, g);
    const Eigen::Vector3d e0 = Eigen::Vector3d::Unit(0),
                          e1 = Eigen::Vector3d::Unit(1),
                          e2 = Eigen::Vector3d::Unit(2);
    const double k12 = sectional(riem, g, e0, e1);
    const double k13 = sectional(riem, g, e0, e2);
    const double k23 = sectional(riem, g, e1, e2);
    const double r = scalar_curvature(ric, g);
    worst = std::max(worst, std::abs(r - 2 * (k12 + k13 + k23)));
    worst = std::max(worst, std::abs(ric(0, 0) - (k12 + k13)));
    worst = std::max(worst, std::abs(ric(1, 1) - (k12 + k23)));
    worst = std::max(worst, std::abs(ric(2, 2) - (k13 + k23)));
  }
  return check_bound(worst, 1e-12, "trace identity residual");
}

std::string extrema_vs_sampling() {
  Rng rng(106);
  double worst_bound = 0, worst_sharp = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const SymBilinear3d g = rng.spd();
    const Curv3d riem = riemann_from_ricci(rng.sym(), g);
    const SectionalRanged range = sectional_extrema(riem, g);
    double smin = 1e300, smax = -1e300;
    for (int i = 0; i < 2000; ++i) {
      const Eigen::Vector3d x = rng.vector(), y = rng.vector();
      double k;
      try {
        k = sectional(riem, g, x, y);
      } catch (const degenerate_plane_error&) {
        continue;
      }
      smin = std::min(smin, k);
      smax = std::max(smax, k);
      worst_bound = std::max(
          worst_bound, std::max(range.kmin - k, k - range.kmax));
    }
    worst_sharp = std::max(worst_sharp, std::max(smin - range.kmin,
                                                 range.kmax - smax));
  }
  if (worst_bound > 1e-9)
    return fail("sampled K left [Kmin, Kmax] by " + std::to_string(worst_bound));
  return check_bound(worst_sharp, 0.2, "extrema sharpness gap");
}

std::string frame_orthonormality() {
  Rng rng(107);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const SymBilinear3d g = rng.spd();
    const Eigen::Vector3d xi = rng.unit_vector();
    const Frame3d frame = orthonormal_frame(g, xi);
    worst = std::max(worst, frame.gram_residual());
    // g(e1, .) must be a positive multiple of xi
    const Eigen::Vector3d dual = g.matrix() * frame.e(0);
    const double scale = dual.norm() / xi.norm();
    worst = std::max(worst, (dual - scale * xi).norm());
  }
  return check_bound(worst, 1e-12, "frame residual");
}

std::string rotation_kills_r23() {
  Rng rng(108);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    SymBilinear3d ric = rng.sym(-2.0, 2.0);
    if (trial % 7 == 0) ric(2, 2) = ric(1, 1);  // the equal-diagonal branch
    const Frame3d frame =
        orthonormal_frame(SymBilinear3d::Identity(), Eigen::Vector3d::Unit(0));
    const RotatedFrame<double> rot = rotate_frame_kill_r23(frame, ric);
    const SymBilinear3d ric_rot = in_frame(ric, rot.frame.vectors);
    worst = std::max(worst, std::abs(ric_rot(1, 2)));
    if (trial % 7 == 0 && std::abs(rot.alpha - EIGEN_PI / 4) > 1e-15)
      return fail("alpha != pi/4 on the equal-diagonal branch");
  }
  return check_bound(worst, 1e-12, "|R'23|");
}

// ---- symbol oracles --------------------------------------------------------

SymBilinear3d random_rotated_ricci(Rng& rng) {
  SymBilinear3d ric = rng.sym(-2.0, 2.0);
  ric(1, 2) = 0.0;
  return ric;
}

std::string symbol_spectrum_law() {
  Rng rng(109);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SymBilinear3d ric = random_rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const double r = ric(0, 0) + ric(1, 1) + ric(2, 2);
    const double gamma = (r - 2 * ric(2, 2)) / 2;
    const double beta = (r - 2 * ric(1, 1)) / 2;
    const auto lam = symbol_eigen(beta, gamma, a);
    Eigen::Matrix<double, 6, 1> expect;
    expect << 0, 0, 0, lam[0], lam[1], lam[2];
    std::sort(expect.data(), expect.data() + 6);
    const Eigen::Matrix<double, 6, 1> got = symbol_spectrum(symbol_L(ric, a));
    worst = std::max(worst, (got - expect).cwiseAbs().maxCoeff());
  }
  return check_bound(worst, 1e-10, "spectrum law mismatch");
}

std::string symbol_kernel_law() {
  Rng rng(110);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = random_rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const Symbol6 s = symbol_L(ric, a);
    const Eigen::Vector3d nu = rng.unit_vector();
    // h = xi (x) nu + nu (x) xi with xi dual to e1
    Eigen::Matrix<double, 6, 1> h;
    h << 2 * nu[0], nu[1], nu[2], 0, 0, 0;
    worst = std::max(worst, (s * h).cwiseAbs().maxCoeff());
  }
  return check_bound(worst, 1e-12, "kernel residual");
}

// independent componentwise evaluation of the linearized-operator symbol
// (the delta/dense-component form) against the assembled matrix
std::string symbol_componentwise_oracle() {
  Rng rng(115);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = rng.sym(-2.0, 2.0);
    const double a = rng.uniform(-0.5, 0.8);
    const Curv3d riem = riemann_from_ricci(ric, SymBilinear3d::Identity());
    const SymBilinear3d h = rng.sym(-1.0, 1.0);
    SymBilinear3d brute;
    const double trh = h(0, 0) + h(1, 1) + h(2, 2);
    for (int i = 0; i < 3; ++i)
      for (int k = i; k < 3; ++k) {
        double v = h(i, k);
        if (i == 0 && k == 0) v += trh;
        if (i == 0) v -= h(0, k);
        if (k == 0) v -= h(i, 0);
        for (int s = 0; s < 3; ++s)
          for (int u = 0; u < 3; ++u) {
            if (i == 0) v += a * riem.component(k, s, 0, u) * h(s, u);
            if (k == 0) v += a * riem.component(i, s, 0, u) * h(s, u);
          }
        for (int u = 0; u < 3; ++u) {
          v -= a * riem.component(k, 0, 0, u) * h(i, u);
          v -= a * riem.component(i, 0, 0, u) * h(k, u);
        }
        brute(i, k) = v;
      }
    const Symbol6 s = symbol_L_unrotated(riem, a);
    const SymBilinear3d via_matrix = sym_from_symbol_coords(
        Eigen::Matrix<double, 6, 1>((s * symbol_coords(h)).eval()));
    worst = std::max(worst, (brute - via_matrix).max_abs());
  }
  return check_bound(worst, 1e-13, "componentwise symbol mismatch");
}

std::string gauge_spectrum_law() {
  Rng rng(116);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const SymBilinear3d ric = random_rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const double r = ric(0, 0) + ric(1, 1) + ric(2, 2);
    const auto lam =
        symbol_eigen((r - 2 * ric(1, 1)) / 2, (r - 2 * ric(2, 2)) / 2, a);
    Eigen::Matrix<double, 6, 1> want;
    want << 1, 1, 1, lam[0], lam[1], lam[2];
    std::sort(want.data(), want.data() + 6);
    worst = std::max(worst, (symbol_spectrum(symbol_gauge_fixed(ric, a)) - want)
                                .cwiseAbs()
                                .maxCoeff());
  }
  return check_bound(worst, 1e-10, "gauge-fixed spectrum mismatch");
}

std::string gauge_decomposition() {
  Rng rng(111);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = random_rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const Symbol6 lhs = symbol_gauge_fixed(ric, a);
    const Symbol6 rhs = symbol_L(ric, a) - symbol_deturck_lie();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return check_bound(worst, 1e-14, "gauge decomposition mismatch");
}

std::string symbol_h_triangular() {
  Rng rng(112);
  for (int trial = 0; trial < 100; ++trial) {
    SymBilinear3d ric = rng.sym(-2.0, 2.0);
    ric(1, 2) = 0.0;
    const Symbol6 s = symbol_H(ric);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < i; ++j)
        if (s(i, j) != 0.0) return fail("below-diagonal entry nonzero");
    if (std::abs(s(3, 3) + ric(1, 1)) > 1e-15 ||
        std::abs(s(4, 4) + ric(2, 2)) > 1e-15 ||
        std::abs(s(5, 5) + (ric(1, 1) + ric(2, 2)) / 2) > 1e-15)
      return fail("diagonal of sigma(DH) wrong");
  }
  return pass();
}

std::string parabolicity_gate_cases() {
  const SymBilinear3d id = SymBilinear3d::Identity();
  const Curv3d neg = constant_curvature(-1.0, id);
  const EllipticityReport ok = parabolicity(neg, id, Flow::rg2(0.4));
  if (std::abs(ok.margin - 0.2) > 1e-12 ||
      ok.verdict != Verdict::StronglyElliptic)
    return fail("K=-1, a=0.4 should pass with margin 0.2");
  const EllipticityReport bad = parabolicity(neg, id, Flow::rg2(0.6));
  if (std::abs(bad.margin + 0.2) > 1e-12 ||
      bad.verdict == Verdict::StronglyElliptic)
    return fail("K=-1, a=0.6 should fail with margin -0.2");
  // RG2Zero sign cases
  const Curv3d pos = constant_curvature(0.5, id);
  if (parabolicity(pos, id, Flow::rg2_zero(0.3)).verdict !=
      Verdict::StronglyElliptic)
    return fail("RG2Zero a>0, K>0 should pass");
  if (parabolicity(neg, id, Flow::rg2_zero(-0.3)).verdict !=
      Verdict::StronglyElliptic)
    return fail("RG2Zero a<0, K<0 should pass");
  // mixed-sign curvature defeats a K > 0 for every a
  SymBilinear3d ric;
  ric(0, 0) = 2.0;
  ric(1, 1) = 0.5;
  ric(2, 2) = 0.5;
  const Curv3d mixed = riemann_from_ricci(ric, id);
  for (double a : {0.3, -0.3})
    if (parabolicity(mixed, id, Flow::rg2_zero(a)).verdict ==
        Verdict::StronglyElliptic)
      return fail("RG2Zero must reject mixed-sign curvature");
  return pass();
}

// ---- chart / flows oracles -------------------------------------------------

std::string sign_convention() {
  if (!curvature_sign_self_check())
    return fail("round-sphere jet does not give K = +1");
  return pass();
}

// warped product diag(1, f^2, f^2): Ric_11 = -2 f''/f,
// Ric_22 = Ric_33 = -(f f'' + f'^2), hand-derived.
std::string warped_ricci_oracle() {
  const int n = 128;
  const double amp = 0.1;
  const MetricField field = make_warped_1d(n, amp);
  const CurvatureField curv = curvature(field, false);
  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    const double f = 1.0 + amp * std::sin(x);
    const double fp = amp * std::cos(x);
    const double fpp = -amp * std::sin(x);
    worst = std::max(worst, std::abs(curv.ricci[p](0, 0) + 2 * fpp / f));
    worst = std::max(worst, std::abs(curv.ricci[p](1, 1) + f * fpp + fp * fp));
    worst = std::max(worst, std::abs(curv.ricci[p](2, 2) + f * fpp + fp * fp));
    worst = std::max(worst, std::abs(curv.ricci[p](0, 1)));
  }
  return check_bound(worst, 1e-7, "warped Ricci error at n=128");
}

std::string fd_convergence() {
  const double amp = 0.3;
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const int n = level == 0 ? 64 : 128;
    const MetricField field = make_warped_1d(n, amp);
    const CurvatureField curv = curvature(field, false);
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
    }
    err[level] = worst;
  }
  const double ratio = err[0] / err[1];
  if (ratio < 12.8 || ratio > 19.2)
    return fail("error(64)/error(128) = " + std::to_string(ratio) +
                ", want 16 +- 20%");
  return pass();
}

std::string metric_compatibility() {
  const MetricField field = make_warped_1d(256, 0.1);
  const auto nabla_g = covariant_derivative_sym2(field, field.data());
  double worst = 0;
  for (const auto& per_point : nabla_g)
    for (const auto& d : per_point) worst = std::max(worst, d.max_abs());
  return check_bound(worst, 1e-10, "max |nabla g|");
}

std::string deturck_cross_check() {
  // the displayed forms agree analytically; the trace form differentiates a
  // product, so numerically they match to stencil order
  double err[2];
  int level = 0;
  for (int n : {128, 256}) {
    const MetricField g0 = make_flat_field(n);
    const MetricField field = make_flat_perturbed_1d(n, 0.05, 7);
    const ChristoffelField gamma = christoffel(field);
    const VectorField v1 = deturck_vector(field, g0, gamma);
    const VectorField v2 = deturck_vector_trace_form(field, g0, gamma);
    double worst = 0;
    for (std::size_t p = 0; p < v1.size(); ++p)
      worst = std::max(worst, (v1[p] - v2[p]).cwiseAbs().maxCoeff());
    err[level++] = worst;
  }
  if (err[0] / err[1] < 10.0)
    return fail("two-formula gap not converging at 4th order");
  // zero law at field = g0 and field = c g0
  const MetricField g0 = make_flat_field(64);
  double zero = 0;
  for (double c : {1.0, 2.5}) {
    const MetricField cg0 = g0.add_scaled(c - 1.0, g0.data());
    const VectorField v = deturck_vector(cg0, g0, christoffel(cg0));
    for (const auto& w : v) zero = std::max(zero, w.cwiseAbs().maxCoeff());
  }
  if (zero > 1e-10) return fail("V(c g0) != 0: " + std::to_string(zero));
  return check_bound(err[1], 1e-6, "two-formula mismatch at n=256");
}

std::string rhs_scaling_invariance() {
  // the scale-free kinds are (-1)-homogeneous: c rhs(c g) = rhs(g), the
  // parabolic-rescaling symmetry g -> c g, t -> c^2 t
  Rng rng(113);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const SymBilinear3d g = rng.spd();
    const SymBilinear3d ric = rng.sym();  // Ricci is invariant under g -> c g
    const Curv3d riem = riemann_from_ricci(ric, g);
    const double c = rng.uniform(0.5, 3.0);
    const SymBilinear3d cg = c * g;
    const Curv3d criem = riemann_from_ricci(ric, cg);  // Riem(0,4) scales by c
    for (const Flow& flow : {Flow::rg2_zero(0.3), Flow::squared_ricci(0.3)}) {
      const SymBilinear3d r1 = rhs_point(g, ric, riem, flow);
      const SymBilinear3d r2 = c * rhs_point(cg, ric, criem, flow);
      worst = std::max(worst, rel_err(r1, r2));
    }
  }
  return check_bound(worst, 1e-11, "scaling homogeneity rel err");
}

std::string rhs_rotation_equivariance() {
  Rng rng(114);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const SymBilinear3d g = rng.spd();
    const SymBilinear3d ric = rng.sym();
    const Curv3d riem = riemann_from_ricci(ric, g);
    // constant linear change of frame B
    Eigen::Matrix3d b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
    b += 3.0 * Eigen::Matrix3d::Identity();
    const SymBilinear3d gb = in_frame(g, b);
    const SymBilinear3d ricb = in_frame(ric, b);
    const Curv3d riemb = riemann_from_ricci(ricb, gb);
    for (const Flow& flow :
         {Flow::rg2(0.2), Flow::squared_ricci(0.4), Flow::mixed(0.1)}) {
      const SymBilinear3d lhs = in_frame(rhs_point(g, ric, riem, flow), b);
      const SymBilinear3d rhs_b = rhs_point(gb, ricb, riemb, flow);
      worst = std::max(worst, rel_err(lhs, rhs_b));
    }
  }
  return check_bound(worst, 1e-11, "conjugation equivariance rel err");
}

std::string ode_closed_form() {
  const OdeResult r = ode_reference(1.0, 0.0, 1.0, 0.2, 51);
  double worst = 0;
  for (const auto& [t, c] : r.samples)
    worst = std::max(worst, std::abs(c - (1.0 - 4.0 * t)));
  if (worst > 1e-10) return fail("a=0 closed form err " + std::to_string(worst));
  const OdeResult ext = ode_reference(1.0, 0.0, 1.0, 0.5, 51);
  if (!ext.extinction_time || std::abs(*ext.extinction_time - 0.25) > 1e-9)
    return fail("extinction time != 0.25");
  return pass();
}

std::string rk4_order() {
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const double dt = level == 0 ? 2e-2 : 1e-2;
    ConstCurvatureState s = make_const_curvature_state(1.0, 1.0, Flow::rg2(0.1));
    const int steps = static_cast<int>(std::lround(0.1 / dt));
    for (int i = 0; i < steps; ++i) s = step_rk4(s, dt);
    const OdeResult ref = ode_reference_at(1.0, 0.1, 1.0, {0.1});
    err[level] = std::abs(s.scale() - ref.samples[0].second);
  }
  const double ratio = err[0] / err[1];
  if (ratio < 10.0 || ratio > 24.0)
    return fail("RK4 order ratio " + std::to_string(ratio) + ", want ~16");
  return pass();
}

std::string pointwise_vs_ode() {
  for (const auto& [k0, a] : {std::pair{1.0, 0.1}, std::pair{-1.0, 0.4}}) {
    ConstCurvatureState s = make_const_curvature_state(k0, 1.0, Flow::rg2(a));
    const double dt = 1e-3;
    std::vector<double> times;
    for (int i = 1; i <= 100; ++i) times.push_back(i * dt);
    const OdeResult ref = ode_reference_at(k0, a, 1.0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      s = step_rk4(s, dt);
      const double c_ref = ref.samples[i].second;
      if (std::abs(s.scale() - c_ref) / std::abs(c_ref) > 1e-8)
        return fail("pointwise RG2 diverges from the ODE reference");
    }
  }
  return pass();
}

std::string operator_vs_symbol_quick() {
  // warped background, one frequency, RG2 kind; the acceptance suite covers
  // the full frequency/kind matrix
  const int n = 128;
  const double amp = 0.2, a = 0.1;
  const MetricField field = make_warped_1d(n, amp);
  const CurvatureField curv = curvature(field, false);
  const int omega = 16;
  SymBilinear3d hconst;
  hconst(0, 0) = 0.3;
  hconst(1, 1) = -0.2;
  hconst(0, 2) = 0.25;
  hconst(1, 2) = 0.15;
  Sym2Field h(field.size());
  for (std::size_t p = 0; p < field.size(); ++p)
    h[p] = std::cos(omega * field.grid().coords(p)[0]) * hconst;
  const Sym2Field dl = linearize_L(field, h, Flow::rg2(a), 1e-4);

  double worst = 0;
  for (std::size_t p = 0; p < field.size(); ++p) {
    const double x = field.grid().coords(p)[0];
    const double f = 1.0 + amp * std::sin(x);
    // orthonormal frame e1 = d1, e2 = d2/f, e3 = d3/f; xi = dx^1 is unit
    Eigen::Matrix3d frame = Eigen::Vector3d(1.0, 1.0 / f, 1.0 / f).asDiagonal();
    const SymBilinear3d ric_f = in_frame(curv.ricci[p], frame);
    const Symbol6 s = symbol_flow(ric_f, Flow::rg2(a));
    const Eigen::Matrix<double, 6, 1> hf =
        symbol_coords(in_frame(hconst, frame));
    const SymBilinear3d action_frame =
        sym_from_symbol_coords(Eigen::Matrix<double, 6, 1>((s * hf).eval()));
    // back to chart components
    Eigen::Matrix3d inv_frame = Eigen::Vector3d(1.0, f, f).asDiagonal();
    const SymBilinear3d action = in_frame(action_frame, inv_frame);
    const SymBilinear3d predicted =
        (-double(omega) * omega * std::cos(omega * x)) * action;
    worst = std::max(worst, (dl[p] - predicted).max_abs());
  }
  const double scale = double(omega) * omega * hconst.max_abs();
  return check_bound(worst / scale, 0.05, "operator-vs-symbol rel err");
}

std::string snapshot_round_trip() {
  const MetricField field = make_flat_perturbed_1d(32, 1e-3, 5);
  const std::string path = "/tmp/rg2_verify_snapshot.json";
  write_snapshot(path, field);
  const MetricField back = read_snapshot(path);
  std::remove(path.c_str());
  if (!(back.grid() == field.grid())) return fail("grid changed");
  for (std::size_t p = 0; p < field.size(); ++p)
    for (int i = 0; i < 6; ++i)
      if (back.at(p).coeffs()[i] != field.at(p).coeffs()[i])
        return fail("components not bit-identical");
  return pass();
}

}  // namespace

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"inverse-metric multiply-back", true, inverse_multiply_back},
      {"kulkarni-nomizu four-term formula", true, kulkarni_nomizu_formula},
      {"ricci decomposition round trip", true, decomposition_round_trip},
      {"quadratic-term identity", true, quad_identity},
      {"sectional trace identities", true, trace_identities},
      {"sectional extrema vs plane sampling", true, extrema_vs_sampling},
      {"orthonormal frame residuals", true, frame_orthonormality},
      {"rotation kills R23", true, rotation_kills_r23},
      {"symbol spectrum law", true, symbol_spectrum_law},
      {"symbol componentwise oracle", true, symbol_componentwise_oracle},
      {"symbol kernel law", true, symbol_kernel_law},
      {"gauge decomposition", true, gauge_decomposition},
      {"gauge-fixed spectrum law", true, gauge_spectrum_law},
      {"symbol_H upper triangular", true, symbol_h_triangular},
      {"parabolicity gate cases", true, parabolicity_gate_cases},
      {"curvature sign convention", true, sign_convention},
      {"rhs scaling invariance", true, rhs_scaling_invariance},
      {"rhs conjugation equivariance", true, rhs_rotation_equivariance},
      {"ode reference closed form", true, ode_closed_form},
      {"snapshot round trip", true, snapshot_round_trip},
      {"warped Ricci analytic oracle", false, warped_ricci_oracle},
      {"fd 4th-order convergence", false, fd_convergence},
      {"metric compatibility nabla g = 0", false, metric_compatibility},
      {"deturck two-formula cross-check", false, deturck_cross_check},
      {"rk4 order", false, rk4_order},
      {"pointwise rg2 vs ode reference", false, pointwise_vs_ode},
      {"operator vs symbol (warped, w=16)", false, operator_vs_symbol_quick},
  };
  return all;
}

int run(bool quick, std::ostream& out) {
  int failures = 0;
  for (const Check& c : checks()) {
    if (quick && !c.quick) continue;
    std::string detail;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      out << "[PASS] " << c.name << "\n";
    } else {
      out << "[FAIL] " << c.name << ": " << detail << "\n";
      ++failures;
    }
  }
  if (failures == 0)
    out << "all checks passed\n";
  else
    out << failures << " check(s) failed\n";
  return failures;
}

}  // namespace rg2::verify
