#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rg2/random.hpp"
#include "rg2/symbol.hpp"

using namespace rg2;

namespace {

const SymBilinear3d kId = SymBilinear3d::Identity();

SymBilinear3d rotated_ricci(Rng& rng, double lo = -2.0, double hi = 2.0) {
  SymBilinear3d ric = rng.sym(lo, hi);
  ric(1, 2) = 0.0;
  return ric;
}

// h-coordinate change induced by a linear frame change B (oracle built by
// pushing the six basis forms through in_frame).
Symbol6 h_coordinate_change(const Eigen::Matrix3d& b) {
  Symbol6 t;
  for (int col = 0; col < 6; ++col) {
    Eigen::Matrix<double, 6, 1> e = Eigen::Matrix<double, 6, 1>::Zero();
    e[col] = 1.0;
    t.col(col) = symbol_coords(in_frame(sym_from_symbol_coords(e), b));
  }
  return t;
}

}  // namespace

TEST_CASE("symbol_L: flat matrix rows") {
  const Symbol6 s = symbol_L(SymBilinear3d::Zero(), 0.7);
  Symbol6 want = Symbol6::Zero();
  want(0, 3) = want(0, 4) = 1;
  want(3, 3) = want(4, 4) = want(5, 5) = 1;
  CHECK((s - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symbol_L: constant curvature diagonal block") {
  const double k = -0.35, a = 0.5;
  const SymBilinear3d ric = 2.0 * k * kId;  // R = 6k, R - 2R33 = 2k
  const Symbol6 s = symbol_L(ric, a);
  for (int d : {3, 4, 5})
    CHECK(s(d, d) == doctest::Approx(1 + 2 * a * k).epsilon(1e-14));
  CHECK(s(0, 3) == doctest::Approx(1 + 2 * a * k).epsilon(1e-14));
  CHECK(s(0, 5) == 0.0);
}

TEST_CASE("symbol_L: generic diagonal entries and pre-rotation cross-check") {
  Rng rng(21);
  const double a = 0.3;
  SymBilinear3d ric;
  ric(0, 0) = 1.2;
  ric(1, 1) = -0.4;
  ric(2, 2) = 0.9;
  const Symbol6 s = symbol_L(ric, a);
  // entry (4,4) 1-based: 1 + a (r1 + r2 - r3)
  CHECK(s(3, 3) == doctest::Approx(1 + a * (1.2 - 0.4 - 0.9)).epsilon(1e-14));
  CHECK(s(4, 4) == doctest::Approx(1 + a * (1.2 + 0.4 + 0.9)).epsilon(1e-14));
  CHECK(s(5, 5) == doctest::Approx(1 + a * 1.2).epsilon(1e-14));

  // with R23 = 0 the pre-rotation matrix built from the full R_1212, R_1313,
  // R_1213 components must coincide entrywise
  for (int trial = 0; trial < 200; ++trial) {
    const SymBilinear3d r = rotated_ricci(rng);
    const Curv3d riem = riemann_from_ricci(r, kId);
    const Symbol6 rotated = symbol_L(r, a);
    const Symbol6 unrotated = symbol_L_unrotated(riem, a);
    CHECK((rotated - unrotated).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("symbol_L: frame-not-rotated precondition") {
  SymBilinear3d ric;
  ric(1, 2) = 1e-6;
  CHECK_THROWS_AS((void)symbol_L(ric, 0.1), frame_error);
}

TEST_CASE("symbol_L_unrotated: flat and the 4aR_1213 entry") {
  CHECK((symbol_L_unrotated(Curv3d::Zero(), 0.4) -
         symbol_L(SymBilinear3d::Zero(), 0.4))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // synthetic tensor with only R_1213 = c nonzero:
  // R_1213 = s(0,1) s(0,2) M(2,1) = -M(2,1)
  const double c = 0.8, a = 0.25;
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(2, 1) = m(1, 2) = -c;
  const Curv3d riem(m, kId);
  CHECK(riem.component(0, 1, 0, 2) == doctest::Approx(c));
  const Symbol6 s = symbol_L_unrotated(riem, a);
  CHECK(s(0, 5) == doctest::Approx(4 * a * c).epsilon(1e-14));
  CHECK(s(3, 5) == doctest::Approx(2 * a * c).epsilon(1e-14));
  CHECK(s(5, 3) == doctest::Approx(a * c).epsilon(1e-14));
}

TEST_CASE("symbol_L_unrotated: brute-force componentwise oracle") {
  // independent evaluation of the linearized-operator symbol at unit xi dual
  // to e1 in an orthonormal frame,
  //   sigma(h)_ik = h_ik + d_i1 d_k1 tr(h) - d_i1 h_1k - d_k1 h_i1
  //                 + a R_{ks1u} d_i1 h_su - a R_{k11u} h_iu
  //                 + a R_{is1u} d_k1 h_su - a R_{i11u} h_ku,
  // summed over the dense Riemann components rather than the assembled rows
  Rng rng(20);
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = rng.sym(-2.0, 2.0);
    const double a = rng.uniform(-0.5, 0.8);
    const Curv3d riem = riemann_from_ricci(ric, kId);
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
    const SymBilinear3d via_matrix =
        sym_from_symbol_coords(Eigen::Matrix<double, 6, 1>(
            (s * symbol_coords(h)).eval()));
    CHECK((brute - via_matrix).max_abs() < 1e-13);
  }
}

TEST_CASE("symbol_L_unrotated: conjugate to symbol_L under the alpha rotation") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = rng.sym(-2.0, 2.0);
    const double a = rng.uniform(-0.5, 0.8);
    const Frame3d f = orthonormal_frame(kId, Eigen::Vector3d::Unit(0));
    const auto rot = rotate_frame_kill_r23(f, ric);
    SymBilinear3d ric_rot = in_frame(ric, rot.frame.vectors);
    ric_rot(1, 2) = 0.0;
    const Symbol6 s_rot = symbol_L(ric_rot, a);
    const Symbol6 s_unrot = symbol_L_unrotated(riemann_from_ricci(ric, kId), a);
    // same eigenvalue multiset
    const auto e1 = symbol_spectrum(s_unrot), e2 = symbol_spectrum(s_rot);
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-10);
    // explicit conjugation: h-coordinates transform by the rotation, and the
    // symbol transforms as the induced map S_rot = T S_unrot T^-1
    const Symbol6 t = h_coordinate_change(rot.frame.vectors);
    const Symbol6 conj = t * s_unrot * t.inverse();
    CHECK((conj - s_rot).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("symbol_eigen: closed forms and numeric agreement") {
  const auto flat = symbol_eigen(0.0, 0.0, 0.9);
  CHECK(flat[0] == 1.0);
  CHECK(flat[1] == 1.0);
  CHECK(flat[2] == 1.0);
  const double k = -0.3, a = 0.6;
  const auto cc = symbol_eigen(k, k, a);
  CHECK(cc[0] == doctest::Approx(1 + 2 * a * k));
  CHECK(cc[2] == doctest::Approx(1 + 2 * a * k));

  // beta = -0.4, gamma = 0.2, a = 0.5 -> (1.2, 0.6, 0.9)
  const auto lam = symbol_eigen(-0.4, 0.2, 0.5);
  CHECK(lam[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(lam[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(lam[2] == doctest::Approx(0.9).epsilon(1e-15));
  // realize beta = K(e1,e3), gamma = K(e1,e2) through a diagonal Ricci:
  // R11 = beta + gamma, R22 = alpha + gamma, R33 = alpha + beta
  const double alpha_s = 0.1, beta = -0.4, gamma = 0.2;
  SymBilinear3d ric;
  ric(0, 0) = beta + gamma;
  ric(1, 1) = alpha_s + gamma;
  ric(2, 2) = alpha_s + beta;
  const auto spec = symbol_spectrum(symbol_L(ric, 0.5));
  Eigen::Matrix<double, 6, 1> want;
  want << 0, 0, 0, 0.6, 0.9, 1.2;
  CHECK((spec - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectrum law over 1000 random rotated inputs") {
  Rng rng(23);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SymBilinear3d ric = rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const double r = ric(0, 0) + ric(1, 1) + ric(2, 2);
    const auto lam =
        symbol_eigen((r - 2 * ric(1, 1)) / 2, (r - 2 * ric(2, 2)) / 2, a);
    Eigen::Matrix<double, 6, 1> want;
    want << 0, 0, 0, lam[0], lam[1], lam[2];
    std::sort(want.data(), want.data() + 6);
    worst = std::max(worst, (symbol_spectrum(symbol_L(ric, a)) - want)
                                .cwiseAbs()
                                .maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("kernel_check: gauge kernel and the zero-eigenvalue case") {
  Rng rng(24);
  // flat: dimension 3
  CHECK(kernel_check(symbol_L(SymBilinear3d::Zero(), 0.5)).dim == 3);
  // force lambda3 = 1 + a R11 = 0
  const double a = 0.5;
  SymBilinear3d ric;
  ric(0, 0) = -1.0 / a;
  ric(1, 1) = 0.3;
  ric(2, 2) = -0.2;
  CHECK(kernel_check(symbol_L(ric, a)).dim == 4);
  // random parabolic case: dimension 3, basis in the first three coordinates
  for (int trial = 0; trial < 50; ++trial) {
    const SymBilinear3d r = rotated_ricci(rng, -0.3, 0.3);
    const auto k = kernel_check(symbol_L(r, 0.2));
    CHECK(k.dim == 3);
    CHECK(k.basis.bottomRows(3).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("kernel law: xi (x) nu directions are annihilated") {
  Rng rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const Symbol6 s = symbol_L(rotated_ricci(rng), rng.uniform(-0.5, 0.8));
    const Eigen::Vector3d nu = rng.unit_vector();
    Eigen::Matrix<double, 6, 1> h;
    h << 2 * nu[0], nu[1], nu[2], 0, 0, 0;
    CHECK((s * h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("symbol_deturck_lie: block entries") {
  const Symbol6 d = symbol_deturck_lie();
  CHECK(d(0, 0) == -1.0);
  CHECK(d(1, 1) == -1.0);
  CHECK(d(2, 2) == -1.0);
  CHECK(d(0, 3) == 1.0);
  CHECK(d(0, 4) == 1.0);
  CHECK(d.row(5).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.row(3).cwiseAbs().maxCoeff() == 0.0);
  // applied to h = xi (x) nu + nu (x) xi: returns -h
  Rng rng(26);
  const Eigen::Vector3d nu = rng.unit_vector();
  Eigen::Matrix<double, 6, 1> h;
  h << 2 * nu[0], nu[1], nu[2], 0, 0, 0;
  CHECK(((d * h) + h).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("symbol_gauge_fixed: decomposition, flat and constant curvature") {
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const SymBilinear3d ric = rotated_ricci(rng);
    const double a = rng.uniform(-0.5, 0.8);
    const Symbol6 lhs = symbol_gauge_fixed(ric, a);
    const Symbol6 rhs = symbol_L(ric, a) - symbol_deturck_lie();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
  // flat: the identity matrix
  CHECK((symbol_gauge_fixed(SymBilinear3d::Zero(), 0.4) - Symbol6::Identity())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // the decomposition also holds in the unrotated frame: same spectrum
  {
    Rng rng2(127);
    const SymBilinear3d ric = rng2.sym(-2.0, 2.0);
    const double a = 0.35;
    const Symbol6 gf_unrot =
        symbol_L_unrotated(riemann_from_ricci(ric, kId), a) -
        symbol_deturck_lie();
    const Frame3d f = orthonormal_frame(kId, Eigen::Vector3d::Unit(0));
    const auto rot = rotate_frame_kill_r23(f, ric);
    SymBilinear3d ric_rot = in_frame(ric, rot.frame.vectors);
    ric_rot(1, 2) = 0.0;
    const auto s1 = symbol_spectrum(gf_unrot);
    const auto s2 = symbol_spectrum(symbol_gauge_fixed(ric_rot, a));
    CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-10);
  }
  // constant curvature k: spectrum {1, 1, 1, (1+2ak) x3}
  const double k = 0.25, a = 0.3;
  const auto spec = symbol_spectrum(symbol_gauge_fixed(2.0 * k * kId, a));
  Eigen::Matrix<double, 6, 1> want;
  want << 1, 1, 1, 1 + 2 * a * k, 1 + 2 * a * k, 1 + 2 * a * k;
  std::sort(want.data(), want.data() + 6);
  CHECK((spec - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("symbol_H: zero, diagonal values, triangularity, precondition") {
  CHECK(symbol_H(SymBilinear3d::Zero()).cwiseAbs().maxCoeff() == 0.0);
  SymBilinear3d ric;
  ric(0, 0) = 0.7;
  ric(1, 1) = -1.1;
  ric(2, 2) = 0.4;
  const Symbol6 s = symbol_H(ric);
  CHECK(s(3, 3) == doctest::Approx(1.1));
  CHECK(s(4, 4) == doctest::Approx(-0.4));
  CHECK(s(5, 5) == doctest::Approx((1.1 - 0.4) / 2));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < i; ++j) CHECK(s(i, j) == 0.0);
  SymBilinear3d bad;
  bad(1, 2) = 1e-3;
  CHECK_THROWS_AS((void)symbol_H(bad), frame_error);
}

TEST_CASE("squared-Ricci gauge-fixed verdicts follow the Ricci sign") {
  Rng rng(28);
  for (int trial = 0; trial < 50; ++trial) {
    const SymBilinear3d ric = rng.spd();
    const Curv3d riem = riemann_from_ricci(ric, kId);
    CHECK(parabolicity(riem, kId, Flow::squared_ricci(0.5)).verdict ==
          Verdict::StronglyElliptic);
    CHECK(parabolicity(riem, kId, Flow::squared_ricci(-0.5)).verdict ==
          Verdict::NotElliptic);
  }
  // spectrum of -a sigma(DH) + DeTurck block is upper triangular:
  // {1, 1, 1, a R22, a R33, a (R22+R33)/2} in the diagonalizing frame
  SymBilinear3d diag;
  diag(0, 0) = 0.6;
  diag(1, 1) = 1.3;
  diag(2, 2) = 0.4;
  const double a = 0.5;
  const auto spec =
      symbol_spectrum(symbol_flow_gauge_fixed(diag, Flow::squared_ricci(a)));
  Eigen::Matrix<double, 6, 1> want;
  want << 1, 1, 1, a * 1.3, a * 0.4, a * (1.3 + 0.4) / 2;
  std::sort(want.data(), want.data() + 6);
  CHECK((spec - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("parabolicity: sectional-curvature gate margins") {
  const Curv3d neg = constant_curvature(-1.0, kId);
  const auto ok = parabolicity(neg, kId, Flow::rg2(0.4));
  CHECK(ok.margin == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(ok.verdict == Verdict::StronglyElliptic);
  const auto bad = parabolicity(neg, kId, Flow::rg2(0.6));
  CHECK(bad.margin == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(bad.verdict == Verdict::NotElliptic);
  // a < 0 with all K < -1/(2a): every negatively curved manifold passes
  const Curv3d neg15 = constant_curvature(-1.5, kId);
  const auto paper_case = parabolicity(neg15, kId, Flow::rg2(-0.5));
  CHECK(paper_case.margin == doctest::Approx(1 + 2 * (-0.5) * (-1.5)));
  CHECK(paper_case.verdict == Verdict::StronglyElliptic);
}

TEST_CASE("parabolicity: verdict law and report consistency") {
  Rng rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const SymBilinear3d g = trial % 2 ? rng.spd() : kId;
    const Curv3d riem = riemann_from_ricci(rng.sym(), g);
    const auto range = sectional_extrema(riem, g);
    const double a = rng.uniform(0.0, 0.8);
    const auto rep = parabolicity(riem, g, Flow::rg2(a));
    const bool want = 1 + 2 * a * range.kmin > 1e-8;
    CHECK((rep.verdict == Verdict::StronglyElliptic) == want);
    // negative coupling: the binding plane is Kmax
    const double an = rng.uniform(-0.8, 0.0);
    const auto repn = parabolicity(riem, g, Flow::rg2(an));
    const bool wantn = 1 + 2 * an * range.kmax > 1e-8;
    CHECK((repn.verdict == Verdict::StronglyElliptic) == wantn);
    // eigenvalue lower bound: spectrum >= min(margin, 1)
    if (rep.verdict == Verdict::StronglyElliptic) {
      CHECK(rep.margin > 0);
      CHECK(rep.eigenvalues[0] > std::min(rep.margin, 1.0) - 1e-10);
      CHECK(rep.kernel_dim == 3);
    }
    // the margin itself appears in the gauge-fixed spectrum
    if (rep.margin <= 1.0) {
      bool found = false;
      for (int i = 0; i < 6; ++i)
        if (std::abs(rep.eigenvalues[i] - rep.margin) < 1e-9) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("symbol_report: weak ellipticity with gauge kernel") {
  const auto flat = symbol_report(Curv3d::Zero(), kId, Flow::rg2(0.3));
  CHECK(flat.verdict == Verdict::WeaklyEllipticGaugeKernel);
  CHECK(flat.kernel_dim == 3);
  Eigen::Matrix<double, 6, 1> want;
  want << 0, 0, 0, 1, 1, 1;
  CHECK((flat.eigenvalues - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(flat.margin == doctest::Approx(1.0));

  const auto bad =
      symbol_report(constant_curvature(-1.0, kId), kId, Flow::rg2(0.6));
  CHECK(bad.verdict == Verdict::NotElliptic);
}
