#pragma once

// Principal symbols of the linearized flow operators in the direction of a
// unit cotangent vector xi, in an orthonormal frame {e1, e2, e3} with
// xi = g(e1, .). Matrices act on the h-coordinates
//   (h11, h12, h13, h22, h33, h23)
// of a symmetric 2-tensor h. Eigenvalue positivity decides ellipticity.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "rg2/flow.hpp"
#include "rg2/tensor3.hpp"

namespace rg2 {

template <typename Scalar>
using Symbol6T = Eigen::Matrix<Scalar, 6, 6>;
using Symbol6 = Symbol6T<double>;

/// Pack a symmetric form into the symbol coordinate order
/// (h11, h12, h13, h22, h33, h23).
template <typename Scalar>
Vec6T<Scalar> symbol_coords(const SymBilinear3<Scalar>& h) {
  Vec6T<Scalar> v;
  v << h(0, 0), h(0, 1), h(0, 2), h(1, 1), h(2, 2), h(1, 2);
  return v;
}

template <typename Scalar>
SymBilinear3<Scalar> sym_from_symbol_coords(const Vec6T<Scalar>& v) {
  SymBilinear3<Scalar> h;
  h(0, 0) = v[0];
  h(0, 1) = v[1];
  h(0, 2) = v[2];
  h(1, 1) = v[3];
  h(2, 2) = v[4];
  h(1, 2) = v[5];
  return h;
}

namespace detail {
template <typename Scalar>
void require_rotated(const SymBilinear3<Scalar>& ric) {
  if (std::abs(ric(1, 2)) > Scalar(1e-10))
    throw frame_error("frame not rotated: |R23| = " +
                      std::to_string(static_cast<double>(std::abs(ric(1, 2)))));
}
}  // namespace detail

/// Symbol of the linearized RG2 operator DL in the rotated frame
/// {e1, e2', e3'} with Ric(e2', e3') = 0. Columns 1-3 are identically zero;
/// the spectrum is {0, 0, 0, 1+2a*gamma, 1+2a*beta, 1+a(beta+gamma)}.
template <typename Scalar>
Symbol6T<Scalar> symbol_L(const SymBilinear3<Scalar>& ric_rotated, Scalar a) {
  detail::require_rotated(ric_rotated);
  const Scalar r11 = ric_rotated(0, 0), r22 = ric_rotated(1, 1),
               r33 = ric_rotated(2, 2);
  const Scalar r12 = ric_rotated(0, 1), r13 = ric_rotated(0, 2);
  const Scalar r = r11 + r22 + r33;
  Symbol6T<Scalar> s = Symbol6T<Scalar>::Zero();
  s(0, 3) = 1 + a * (r - 2 * r33);
  s(0, 4) = 1 + a * (r - 2 * r22);
  s(1, 4) = a * r12;
  s(1, 5) = -a * r13;
  s(2, 3) = a * r13;
  s(2, 5) = -a * r12;
  s(3, 3) = 1 + a * (r - 2 * r33);
  s(4, 4) = 1 + a * (r - 2 * r22);
  s(5, 5) = 1 + a * r11;
  return s;
}

/// Same symbol built from raw curvature components in a (not necessarily
/// rotated) orthonormal frame with e1 dual to xi. Similar to symbol_L under
/// the h-coordinate change induced by the alpha-rotation.
template <typename Scalar>
Symbol6T<Scalar> symbol_L_unrotated(const Curv3<Scalar>& riem_frame, Scalar a) {
  const Scalar r1212 = riem_frame.component(0, 1, 0, 1);
  const Scalar r1313 = riem_frame.component(0, 2, 0, 2);
  const Scalar r1213 = riem_frame.component(0, 1, 0, 2);
  const Scalar r1323 = riem_frame.component(0, 2, 1, 2);
  const Scalar r1223 = riem_frame.component(0, 1, 1, 2);
  Symbol6T<Scalar> s = Symbol6T<Scalar>::Zero();
  s(0, 3) = 1 + 2 * a * r1212;
  s(0, 4) = 1 + 2 * a * r1313;
  s(0, 5) = 4 * a * r1213;
  s(1, 4) = a * r1323;
  s(1, 5) = a * r1223;
  s(2, 3) = -a * r1223;  // a R_1232
  s(2, 5) = -a * r1323;  // a R_1332
  s(3, 3) = 1 + 2 * a * r1212;
  s(3, 5) = 2 * a * r1213;
  s(4, 4) = 1 + 2 * a * r1313;
  s(4, 5) = 2 * a * r1213;
  s(5, 3) = a * r1213;
  s(5, 4) = a * r1213;
  s(5, 5) = 1 + a * r1212 + a * r1313;
  return s;
}

/// Closed-form nonzero eigenvalues of symbol_L from the sectional curvatures
/// beta = K(e1,e3), gamma = K(e1,e2):
///   lambda1 = 1 + 2 a gamma, lambda2 = 1 + 2 a beta,
///   lambda3 = 1 + a (beta + gamma).
template <typename Scalar>
std::array<Scalar, 3> symbol_eigen(Scalar beta, Scalar gamma, Scalar a) {
  return {1 + 2 * a * gamma, 1 + 2 * a * beta, 1 + a * (beta + gamma)};
}

template <typename Scalar = double>
struct KernelInfo {
  int dim = 0;
  Eigen::Matrix<Scalar, 6, Eigen::Dynamic> basis;  // one column per direction
};

/// Null space of a symbol matrix by SVD rank. For symbol_L the kernel always
/// contains the h11, h12, h13 coordinate directions (h = xi (x) nu + nu (x) xi
/// for any covector nu); dimension is exactly 3 iff no lambda_i vanishes.
template <typename Scalar>
KernelInfo<Scalar> kernel_check(const Symbol6T<Scalar>& s,
                                Scalar tol = Scalar(1e-10)) {
  Eigen::JacobiSVD<Symbol6T<Scalar>> svd(s, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar thresh = tol * std::max(Scalar(1), sv[0]);
  int rank = 0;
  for (int i = 0; i < 6; ++i)
    if (sv[i] > thresh) ++rank;
  KernelInfo<Scalar> k;
  k.dim = 6 - rank;
  k.basis = svd.matrixV().rightCols(k.dim);
  return k;
}

/// Symbol of the linearized Lie-derivative correction D(Lie_V) at g0 in the
/// direction xi: -Id on the (h11, h12, h13) block and a row of ones mapping
/// (h22, h33) into h11; zero elsewhere (n = 3 instance).
template <typename Scalar = double>
Symbol6T<Scalar> symbol_deturck_lie() {
  Symbol6T<Scalar> s = Symbol6T<Scalar>::Zero();
  s(0, 0) = s(1, 1) = s(2, 2) = Scalar(-1);
  s(0, 3) = s(0, 4) = Scalar(1);
  return s;
}

/// Gauge-fixed symbol sigma(D(L - Lie_V)) for the RG2 flow in the rotated
/// frame: identity upper-left block, diagonal (1,1,1, 1+2a*gamma, 1+2a*beta,
/// 1+a(beta+gamma)). Equals symbol_L - symbol_deturck_lie entrywise.
template <typename Scalar>
Symbol6T<Scalar> symbol_gauge_fixed(const SymBilinear3<Scalar>& ric_rotated,
                                    Scalar a) {
  Symbol6T<Scalar> s = symbol_L(ric_rotated, a) - symbol_deturck_lie<Scalar>();
  return s;
}

/// Symbol of DH for H = R_ij R^j_k, in a frame with Ric diagonal on e1-perp.
/// Upper triangular with diagonal (0, 0, 0, -R22, -R33, -(R22+R33)/2).
/// The flow scaling (-a) and the DeTurck block are applied by the per-kind
/// assemblers below, as in parabolicity.
///
/// Only the n = 3 instance is built. In general dimension the matrix in the
/// coordinates (h_11, ..., h_1n, h_22, ..., h_nn, h_23, ..., h_{n-1,n}) stays
/// upper triangular with n zeroes first, then the n-1 values -R_kk for
/// k = 2..n, then the (n-1)(n-2)/2 values -(R_ii + R_kk)/2 for
/// 2 <= i < k <= n.
template <typename Scalar>
Symbol6T<Scalar> symbol_H(const SymBilinear3<Scalar>& ric_diag) {
  if (std::abs(ric_diag(1, 2)) > Scalar(1e-10))
    throw frame_error("frame does not diagonalize Ric on e1-perp: |R23| = " +
                      std::to_string(static_cast<double>(std::abs(ric_diag(1, 2)))));
  const Scalar r11 = ric_diag(0, 0), r22 = ric_diag(1, 1), r33 = ric_diag(2, 2);
  const Scalar r12 = ric_diag(0, 1), r13 = ric_diag(0, 2);
  Symbol6T<Scalar> s = Symbol6T<Scalar>::Zero();
  s(0, 3) = -r11;
  s(0, 4) = -r11;
  s(1, 3) = -r12;
  s(1, 4) = -r12 / 2;
  s(1, 5) = -r13 / 2;
  s(2, 3) = -r13 / 2;
  s(2, 4) = -r13;
  s(2, 5) = -r12 / 2;
  s(3, 3) = -r22;
  s(4, 4) = -r33;
  s(5, 5) = -(r22 + r33) / 2;
  return s;
}

/// Ungauged symbol of the linearized right-hand side for any flow kind, in a
/// rotated/diagonalized frame. The Ricci part contributes symbol_L at a = 0.
template <typename Scalar>
Symbol6T<Scalar> symbol_flow(const SymBilinear3<Scalar>& ric_rotated,
                             const Flow& flow) {
  const Scalar a = static_cast<Scalar>(flow.coupling());
  switch (flow.kind) {
    case FlowKind::Ricci:
      return symbol_L(ric_rotated, Scalar(0));
    case FlowKind::RG2:
      return symbol_L(ric_rotated, a);
    case FlowKind::RG2Zero:
      return symbol_L(ric_rotated, a) - symbol_L(ric_rotated, Scalar(0));
    case FlowKind::SquaredRicci:
      return (-a * symbol_H(ric_rotated)).eval();
    case FlowKind::Mixed:
      return symbol_L(ric_rotated, Scalar(0)) - a * symbol_H(ric_rotated);
  }
  return Symbol6T<Scalar>::Zero();
}

/// Gauge-fixed symbol sigma(D(L_kind - Lie_V)) = symbol_flow - symbol_deturck_lie.
template <typename Scalar>
Symbol6T<Scalar> symbol_flow_gauge_fixed(const SymBilinear3<Scalar>& ric_rotated,
                                         const Flow& flow) {
  return symbol_flow(ric_rotated, flow) - symbol_deturck_lie<Scalar>();
}

/// Real parts of the spectrum, ascending, by a general real eigensolver
/// (closed forms are used as oracles in the tests, not here).
template <typename Scalar>
Vec6T<Scalar> symbol_spectrum(const Symbol6T<Scalar>& s) {
  Eigen::EigenSolver<Symbol6T<Scalar>> es(s, /*computeEigenvectors=*/false);
  Vec6T<Scalar> re = es.eigenvalues().real();
  std::sort(re.data(), re.data() + 6);
  return re;
}

enum class Verdict { StronglyElliptic, WeaklyEllipticGaugeKernel, NotElliptic };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::StronglyElliptic: return "strongly-elliptic";
    case Verdict::WeaklyEllipticGaugeKernel:
      return "weakly-elliptic-with-gauge-kernel";
    case Verdict::NotElliptic: return "not-elliptic";
  }
  return "?";
}

/// Ellipticity certificate at a point, for either the gauge-fixed operator
/// (parabolicity) or the raw linearization (symbol_report). Eigenvalues are
/// taken at the worst direction xi; the margin is global over all planes.
struct EllipticityReport {
  FlowKind kind = FlowKind::Ricci;
  double a = 0.0;
  Eigen::Matrix<double, 6, 1> eigenvalues;  // real parts, ascending
  double margin = 0.0;
  int kernel_dim = 0;  // of the ungauged symbol at the worst direction
  Verdict verdict = Verdict::NotElliptic;
  Eigen::Vector3d worst_plane = Eigen::Vector3d::Zero();  // chart 2-vector
};

namespace detail {

struct WorstFrameData {
  Frame3<double> frame;      // g-orthonormal, e1 in the worst plane
  SymBilinear3d ric_frame;   // diagonal: Ric eigenframe
  double mu_min, mu_max;     // Ricci eigenvalue range
  Eigen::Vector3d worst_plane;
};

// Eigenframe of Ric w.r.t. g, permuted so that (e1, e2) spans the plane
// whose sectional curvature binds the flow's margin. In the Ricci
// eigenframe {v_i} the principal sectional curvatures are
// K(v_i, v_j) = (mu_i + mu_j - mu_l)/2 and they exhaust the extrema of K.
inline WorstFrameData worst_frame(const SymBilinear3d& ric,
                                  const SymBilinear3d& g, const Flow& flow) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(ric.matrix(),
                                                               g.matrix());
  const Eigen::Vector3d mu = es.eigenvalues();
  const Eigen::Matrix3d v = es.eigenvectors();  // g-orthonormal columns

  const auto k_of = [&](int i, int j) {
    const int l = 3 - i - j;
    return (mu[i] + mu[j] - mu[l]) / 2;
  };
  // score(i, j): the per-plane margin term for K-driven kinds, the Ricci
  // eigenvalue term (with the binding pair living on e1-perp) otherwise.
  const auto score = [&](int i, int j) {
    switch (flow.kind) {
      case FlowKind::RG2: return 1 + 2 * flow.a * k_of(i, j);
      case FlowKind::RG2Zero: return flow.a * k_of(i, j);
      case FlowKind::SquaredRicci:
        return std::min(flow.a * mu[i], flow.a * mu[j]);
      case FlowKind::Mixed:
        return std::min(1 + flow.a * mu[i], 1 + flow.a * mu[j]);
      case FlowKind::Ricci: return 1.0;
    }
    return 1.0;
  };

  int bi = 0, bj = 1;
  for (const auto& [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
    if (score(i, j) < score(bi, bj)) { bi = i; bj = j; }

  WorstFrameData w;
  w.mu_min = mu[0];
  w.mu_max = mu[2];
  const int bl = 3 - bi - bj;
  w.frame.metric = g;
  const bool k_driven =
      flow.kind == FlowKind::RG2 || flow.kind == FlowKind::RG2Zero ||
      flow.kind == FlowKind::Ricci;
  if (k_driven) {
    // e1 inside the binding plane so lambda1 = 1 + 2a K(worst plane)
    w.frame.vectors.col(0) = v.col(bi);
    w.frame.vectors.col(1) = v.col(bj);
    w.frame.vectors.col(2) = v.col(bl);
  } else {
    // binding Ricci eigenvalues must restrict to e1-perp
    w.frame.vectors.col(0) = v.col(bl);
    w.frame.vectors.col(1) = v.col(bi);
    w.frame.vectors.col(2) = v.col(bj);
  }
  w.ric_frame = in_frame(ric, w.frame.vectors);
  w.ric_frame(1, 2) = 0.0;  // eigenframe: exact by construction
  w.worst_plane = w.frame.e(k_driven ? 0 : 1).cross(w.frame.e(k_driven ? 1 : 2));
  return w;
}

}  // namespace detail

/// Certify the gauge-fixed flow at a point: margin over all planes, spectrum
/// of the gauge-fixed symbol at the worst direction, kernel of the ungauged
/// symbol there. Verdict is strongly-elliptic iff margin > eps_par.
inline EllipticityReport parabolicity(const Curv3d& riem, const SymBilinear3d& g,
                                      const Flow& flow,
                                      double eps_par = 1e-8) {
  const SymBilinear3d ric = ricci_from_riemann(riem, g);
  const SectionalRanged range = sectional_extrema(riem, g);
  const detail::WorstFrameData w = detail::worst_frame(ric, g, flow);

  EllipticityReport rep;
  rep.kind = flow.kind;
  rep.a = flow.coupling();
  rep.margin = flow_margin(flow, range.kmin, range.kmax, w.mu_min, w.mu_max);
  rep.eigenvalues = symbol_spectrum(symbol_flow_gauge_fixed(w.ric_frame, flow));
  rep.kernel_dim = kernel_check(symbol_flow(w.ric_frame, flow)).dim;
  rep.worst_plane = w.worst_plane;
  rep.verdict = rep.margin > eps_par ? Verdict::StronglyElliptic
                                     : Verdict::NotElliptic;
  return rep;
}

/// Certificate for the raw (ungauged) linearization: same margin, spectrum of
/// the ungauged symbol at the worst direction. The zero eigenvalues coming
/// from diffeomorphism invariance are benign, so the positive verdict is
/// weakly-elliptic-with-gauge-kernel (kernel spanned by the xi (x) nu
/// directions only).
inline EllipticityReport symbol_report(const Curv3d& riem, const SymBilinear3d& g,
                                       const Flow& flow,
                                       double eps_par = 1e-8) {
  EllipticityReport rep = parabolicity(riem, g, flow, eps_par);
  const detail::WorstFrameData w =
      detail::worst_frame(ricci_from_riemann(riem, g), g, flow);
  rep.eigenvalues = symbol_spectrum(symbol_flow(w.ric_frame, flow));
  rep.verdict = (rep.margin > eps_par && rep.kernel_dim == 3)
                    ? Verdict::WeaklyEllipticGaugeKernel
                    : Verdict::NotElliptic;
  return rep;
}

}  // namespace rg2
