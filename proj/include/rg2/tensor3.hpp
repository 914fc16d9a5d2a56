#pragma once

// Pointwise Riemannian tensor algebra in dimension three.
//
// Conventions used throughout:
//   Riem(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_{[X,Y]} Z
//   R_ijkl     = g(Riem(d_i, d_j) d_k, d_l)
//   R_ik       = g^{jl} R_ijkl
//   K(X,Y)     = Riem(X,Y,X,Y) / (g(X,X) g(Y,Y) - g(X,Y)^2)
// so the unit round sphere has K = +1 and Ric = 2g. With this sign the
// constant-curvature tensor is R_ijkl = k (g_ik g_jl - g_il g_jk), i.e.
// (k/2) (g owedge g), and the 3D decomposition reads
//   Riem = Ric owedge g - (R/4) g owedge g.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <utility>

#include "rg2/errors.hpp"

namespace rg2 {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vec6T = Eigen::Matrix<Scalar, 6, 1>;

/// Symmetric bilinear form on a 3D tangent space; six stored components in
/// the order (11, 12, 13, 22, 23, 33). Symmetry is structural.
template <typename Scalar = double>
class SymBilinear3 {
 public:
  using Vec6 = Vec6T<Scalar>;
  using Mat3 = Mat3T<Scalar>;
  using Vec3 = Vec3T<Scalar>;

  SymBilinear3() : c_(Vec6::Zero()) {}
  explicit SymBilinear3(const Vec6& coeffs) : c_(coeffs) {}

  static SymBilinear3 Zero() { return SymBilinear3(); }
  static SymBilinear3 Identity() {
    SymBilinear3 s;
    s.c_ << Scalar(1), 0, 0, Scalar(1), 0, Scalar(1);
    return s;
  }
  static SymBilinear3 Diagonal(Scalar a, Scalar b, Scalar c) {
    SymBilinear3 s;
    s.c_ << a, 0, 0, b, 0, c;
    return s;
  }
  /// Symmetrizes: stores (m + m^T)/2.
  static SymBilinear3 FromMatrix(const Mat3& m) {
    SymBilinear3 s;
    s.c_ << m(0, 0), (m(0, 1) + m(1, 0)) / 2, (m(0, 2) + m(2, 0)) / 2,
        m(1, 1), (m(1, 2) + m(2, 1)) / 2, m(2, 2);
    return s;
  }

  Scalar operator()(int i, int j) const { return c_[index(i, j)]; }
  Scalar& operator()(int i, int j) { return c_[index(i, j)]; }

  const Vec6& coeffs() const { return c_; }
  Vec6& coeffs() { return c_; }

  Mat3 matrix() const {
    Mat3 m;
    m << c_[0], c_[1], c_[2], c_[1], c_[3], c_[4], c_[2], c_[4], c_[5];
    return m;
  }

  /// T(x, y).
  template <typename DerivedX, typename DerivedY>
  Scalar apply(const Eigen::MatrixBase<DerivedX>& x,
               const Eigen::MatrixBase<DerivedY>& y) const {
    return x.dot(matrix() * y);
  }

  /// g^{ij} T_ij for a contravariant form ginv.
  Scalar trace_with(const SymBilinear3& ginv) const {
    return ginv.c_[0] * c_[0] + ginv.c_[3] * c_[3] + ginv.c_[5] * c_[5] +
           2 * (ginv.c_[1] * c_[1] + ginv.c_[2] * c_[2] + ginv.c_[4] * c_[4]);
  }

  Vec3 eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(matrix(),
                                           Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Scalar min_eigenvalue() const { return eigenvalues()[0]; }
  bool is_positive_definite() const { return min_eigenvalue() > Scalar(0); }

  SymBilinear3 operator+(const SymBilinear3& o) const {
    return SymBilinear3(Vec6(c_ + o.c_));
  }
  SymBilinear3 operator-(const SymBilinear3& o) const {
    return SymBilinear3(Vec6(c_ - o.c_));
  }
  SymBilinear3 operator-() const { return SymBilinear3(Vec6(-c_)); }
  SymBilinear3& operator+=(const SymBilinear3& o) {
    c_ += o.c_;
    return *this;
  }
  SymBilinear3& operator-=(const SymBilinear3& o) {
    c_ -= o.c_;
    return *this;
  }
  friend SymBilinear3 operator*(Scalar s, const SymBilinear3& t) {
    return SymBilinear3(Vec6(s * t.c_));
  }
  friend SymBilinear3 operator*(const SymBilinear3& t, Scalar s) {
    return SymBilinear3(Vec6(s * t.c_));
  }
  SymBilinear3 operator/(Scalar s) const { return SymBilinear3(Vec6(c_ / s)); }

  Scalar max_abs() const { return c_.template lpNorm<Eigen::Infinity>(); }

  static constexpr int index(int i, int j) {
    constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return map[i][j];
  }

 private:
  Vec6 c_;
};

/// Three tangent vectors (columns) orthonormal for the stored metric.
template <typename Scalar = double>
struct Frame3 {
  Mat3T<Scalar> vectors;  // columns e1, e2, e3 in chart components
  SymBilinear3<Scalar> metric;

  Vec3T<Scalar> e(int a) const { return vectors.col(a); }

  /// max |g(e_a, e_b) - delta_ab|.
  Scalar gram_residual() const {
    Mat3T<Scalar> gram = vectors.transpose() * metric.matrix() * vectors;
    return (gram - Mat3T<Scalar>::Identity()).cwiseAbs().maxCoeff();
  }
};

namespace detail {

// Bivector basis {e2^e3, e3^e1, e1^e2}: index and sign of an ordered pair.
// Coordinates of X^Y in this basis are the components of cross(X, Y).
constexpr int kBivIndex[3][3] = {{-1, 2, 1}, {2, -1, 0}, {1, 0, -1}};
constexpr int kBivSign[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
// Representative index pairs of the bivector basis (0-based).
constexpr int kBivPair[3][2] = {{1, 2}, {2, 0}, {0, 1}};

}  // namespace detail

/// Algebraic curvature tensor at a point, stored as the symmetric operator
/// on 2-vectors in the basis {e2^e3, e3^e1, e1^e2} of the frame whose metric
/// is carried alongside. The dense accessor reconstructs R_ijkl; all
/// curvature symmetries (including first Bianchi, automatic in 3D) are
/// structural in this storage.
template <typename Scalar = double>
class Curv3 {
 public:
  using Mat3 = Mat3T<Scalar>;

  Curv3() : m_(Mat3::Zero()), g_(SymBilinear3<Scalar>::Identity()) {}
  Curv3(const Mat3& two_form_operator, const SymBilinear3<Scalar>& frame_metric)
      : m_(((two_form_operator + two_form_operator.transpose()) / 2).eval()),
        g_(frame_metric) {}

  static Curv3 Zero(const SymBilinear3<Scalar>& g = SymBilinear3<Scalar>::Identity()) {
    return Curv3(Mat3::Zero(), g);
  }

  const Mat3& op() const { return m_; }
  const SymBilinear3<Scalar>& frame_metric() const { return g_; }

  /// R_ijkl.
  Scalar component(int i, int j, int k, int l) const {
    const int si = detail::kBivSign[i][j];
    const int sj = detail::kBivSign[k][l];
    if (si == 0 || sj == 0) return Scalar(0);
    return Scalar(si * sj) *
           m_(detail::kBivIndex[i][j], detail::kBivIndex[k][l]);
  }

  /// Riem(X,Y,Z,T) on chart components.
  template <typename DX, typename DY, typename DZ, typename DT>
  Scalar apply(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
               const Eigen::MatrixBase<DZ>& z,
               const Eigen::MatrixBase<DT>& t) const {
    const Vec3T<Scalar> w1 = Vec3T<Scalar>(x).cross(Vec3T<Scalar>(y));
    const Vec3T<Scalar> w2 = Vec3T<Scalar>(z).cross(Vec3T<Scalar>(t));
    return w1.dot(m_ * w2);
  }

  Curv3 operator+(const Curv3& o) const { return Curv3(Mat3(m_ + o.m_), g_); }
  Curv3 operator-(const Curv3& o) const { return Curv3(Mat3(m_ - o.m_), g_); }
  friend Curv3 operator*(Scalar s, const Curv3& c) {
    return Curv3(Mat3(s * c.m_), c.g_);
  }

  Scalar max_abs() const { return m_.cwiseAbs().maxCoeff(); }

 private:
  Mat3 m_;
  SymBilinear3<Scalar> g_;
};

/// Induced metric on 2-vectors: G_ab = <E_a, E_b>_{Lambda^2 g} with
/// <ei^ej, ek^el> = g_ik g_jl - g_il g_jk. SPD whenever g is.
template <typename Scalar>
Mat3T<Scalar> lambda2_gram(const SymBilinear3<Scalar>& g) {
  Mat3T<Scalar> G;
  for (int a = 0; a < 3; ++a) {
    const int i = detail::kBivPair[a][0], j = detail::kBivPair[a][1];
    for (int b = 0; b < 3; ++b) {
      const int k = detail::kBivPair[b][0], l = detail::kBivPair[b][1];
      G(a, b) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
    }
  }
  return G;
}

/// Contravariant inverse of a positive-definite form. Definiteness is
/// checked by eigenvalue (throws definiteness_error with the offending one);
/// the inverse itself is the closed-form 3x3 inverse, which is exact on
/// exact diagonal inputs.
template <typename Scalar>
SymBilinear3<Scalar> inverse_metric(const SymBilinear3<Scalar>& g) {
  Eigen::SelfAdjointEigenSolver<Mat3T<Scalar>> es(g.matrix(),
                                                  Eigen::EigenvaluesOnly);
  const Vec3T<Scalar> ev = es.eigenvalues();
  if (!(ev[0] > Scalar(0)))
    throw definiteness_error(static_cast<double>(ev[0]));
  return SymBilinear3<Scalar>::FromMatrix(g.matrix().inverse());
}

/// Kulkarni-Nomizu product:
/// (p ow q)(X,Y,Z,T) = p(X,Z)q(Y,T) + p(Y,T)q(X,Z) - p(X,T)q(Y,Z) - p(Y,Z)q(X,T).
/// The result has all algebraic curvature symmetries; frame_metric tags the
/// frame the components live in.
template <typename Scalar>
Curv3<Scalar> kulkarni_nomizu(
    const SymBilinear3<Scalar>& p, const SymBilinear3<Scalar>& q,
    const SymBilinear3<Scalar>& frame_metric = SymBilinear3<Scalar>::Identity()) {
  Mat3T<Scalar> m;
  for (int a = 0; a < 3; ++a) {
    const int i = detail::kBivPair[a][0], j = detail::kBivPair[a][1];
    for (int b = 0; b < 3; ++b) {
      const int k = detail::kBivPair[b][0], l = detail::kBivPair[b][1];
      m(a, b) = p(i, k) * q(j, l) + p(j, l) * q(i, k) - p(i, l) * q(j, k) -
                p(j, k) * q(i, l);
    }
  }
  return Curv3<Scalar>(m, frame_metric);
}

/// Scalar curvature R = g^{ik} Ric_ik.
template <typename Scalar>
Scalar scalar_curvature(const SymBilinear3<Scalar>& ric,
                        const SymBilinear3<Scalar>& g) {
  return ric.trace_with(inverse_metric(g));
}

/// 3D decomposition: Riem = Ric ow g - (R/4) g ow g.
template <typename Scalar>
Curv3<Scalar> riemann_from_ricci(const SymBilinear3<Scalar>& ric,
                                 const SymBilinear3<Scalar>& g) {
  const Scalar r = ric.trace_with(inverse_metric(g));
  return kulkarni_nomizu(ric, g, g) - (r / 4) * kulkarni_nomizu(g, g, g);
}

/// R_ik = g^{jl} R_ijkl.
template <typename Scalar>
SymBilinear3<Scalar> ricci_from_riemann(const Curv3<Scalar>& riem,
                                        const SymBilinear3<Scalar>& g) {
  const SymBilinear3<Scalar> ginv = inverse_metric(g);
  SymBilinear3<Scalar> ric;
  for (int i = 0; i < 3; ++i)
    for (int k = i; k < 3; ++k) {
      Scalar s = 0;
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) s += ginv(j, l) * riem.component(i, j, k, l);
      ric(i, k) = s;
    }
  return ric;
}

/// Constant-curvature tensor with K(X,Y) = k for every plane: (k/2) g ow g.
template <typename Scalar>
Curv3<Scalar> constant_curvature(Scalar k, const SymBilinear3<Scalar>& g) {
  return Curv3<Scalar>(Mat3T<Scalar>(k * lambda2_gram(g)), g);
}

/// Sectional curvature of span{X, Y}.
template <typename Scalar, typename DX, typename DY>
Scalar sectional(const Curv3<Scalar>& riem, const SymBilinear3<Scalar>& g,
                 const Eigen::MatrixBase<DX>& x_in,
                 const Eigen::MatrixBase<DY>& y_in) {
  const Vec3T<Scalar> x = x_in, y = y_in;
  const Scalar xx = g.apply(x, x), yy = g.apply(y, y), xy = g.apply(x, y);
  const Scalar den = xx * yy - xy * xy;
  if (!(den > Scalar(1e-14) * xx * yy))
    throw degenerate_plane_error(static_cast<double>(den));
  return riem.apply(x, y, x, y) / den;
}

template <typename Scalar = double>
struct SectionalRange {
  Scalar kmin, kmax;
  Vec3T<Scalar> plane_min, plane_max;  // extremal planes as unit 2-vectors
};

/// Range of the sectional curvature over all planes. In 3D every 2-vector is
/// decomposable, so the extrema are the extreme generalized eigenvalues of
/// the curvature operator against the Lambda^2 metric.
template <typename Scalar>
SectionalRange<Scalar> sectional_extrema(const Curv3<Scalar>& riem,
                                         const SymBilinear3<Scalar>& g) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat3T<Scalar>> es(
      riem.op(), lambda2_gram(g));
  SectionalRange<Scalar> r;
  r.kmin = es.eigenvalues()[0];
  r.kmax = es.eigenvalues()[2];
  r.plane_min = es.eigenvectors().col(0);
  r.plane_max = es.eigenvectors().col(2);
  return r;
}

/// sup over planes of |K|; used as the curvature magnitude monitor.
template <typename Scalar>
Scalar curvature_operator_norm(const Curv3<Scalar>& riem,
                               const SymBilinear3<Scalar>& g) {
  const SectionalRange<Scalar> r = sectional_extrema(riem, g);
  return std::max(std::abs(r.kmin), std::abs(r.kmax));
}

/// Quadratic curvature term by full contraction:
/// Q_ik = R_ijlm R_kstu g^{js} g^{lt} g^{mu}.
template <typename Scalar>
SymBilinear3<Scalar> quad_contraction(const Curv3<Scalar>& riem,
                                      const SymBilinear3<Scalar>& g) {
  const SymBilinear3<Scalar> ginvs = inverse_metric(g);
  const Mat3T<Scalar> ginv = ginvs.matrix();
  Scalar rd[3][3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) rd[i][j][k][l] = riem.component(i, j, k, l);

  // raise the last three indices, then contract against R_kstu
  Scalar rup[3][3][3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t)
        for (int u = 0; u < 3; ++u) {
          Scalar acc = 0;
          for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
              for (int m = 0; m < 3; ++m)
                acc += rd[i][j][l][m] * ginv(j, s) * ginv(l, t) * ginv(m, u);
          rup[i][s][t][u] = acc;
        }

  Mat3T<Scalar> q = Mat3T<Scalar>::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      Scalar acc = 0;
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t)
          for (int u = 0; u < 3; ++u) acc += rup[i][s][t][u] * rd[k][s][t][u];
      q(i, k) = acc;
    }
  return SymBilinear3<Scalar>::FromMatrix(q);
}

/// Ric^2_ik = R_ij R_lk g^{jl}.
template <typename Scalar>
SymBilinear3<Scalar> squared_ricci(const SymBilinear3<Scalar>& ric,
                                   const SymBilinear3<Scalar>& g) {
  const Mat3T<Scalar> r = ric.matrix();
  const Mat3T<Scalar> m = r * inverse_metric(g).matrix() * r;
  return SymBilinear3<Scalar>::FromMatrix(m);
}

/// Same quadratic term through the 3D Ricci decomposition:
/// Q = 2 R Ric - 2 Ric^2 + 2 |Ric|^2 g - R^2 g.
template <typename Scalar>
SymBilinear3<Scalar> quad_via_ricci(const SymBilinear3<Scalar>& ric,
                                    const SymBilinear3<Scalar>& g) {
  const SymBilinear3<Scalar> ginv = inverse_metric(g);
  const Scalar r = ric.trace_with(ginv);
  const SymBilinear3<Scalar> ric2 = squared_ricci(ric, g);
  const Scalar ric_norm2 = ric2.trace_with(ginv);  // |Ric|^2 = g^{ik} (Ric^2)_ik
  return 2 * r * ric - 2 * ric2 + (2 * ric_norm2 - r * r) * g;
}

/// g-orthonormal frame with e1 = xi# / |xi|_g, so g(e1, .) is a positive
/// multiple of xi. Completion is deterministic: seed e2 (then e3) with the
/// standard axes least aligned with e1 and Gram-Schmidt them.
template <typename Scalar, typename Derived>
Frame3<Scalar> orthonormal_frame(const SymBilinear3<Scalar>& g,
                                 const Eigen::MatrixBase<Derived>& xi_in) {
  const Vec3T<Scalar> xi = xi_in;
  if (xi.norm() == Scalar(0)) throw frame_error("zero covector");
  const Mat3T<Scalar> G = g.matrix();
  const Mat3T<Scalar> Ginv = inverse_metric(g).matrix();
  Vec3T<Scalar> e1 = Ginv * xi;
  e1 /= std::sqrt(xi.dot(e1));

  // alignment of axis k with e1, normalized by the axis' g-length
  std::array<int, 3> order = {0, 1, 2};
  const Vec3T<Scalar> ge1 = G * e1;
  std::array<Scalar, 3> align;
  for (int k = 0; k < 3; ++k) align[k] = std::abs(ge1[k]) / std::sqrt(G(k, k));
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return align[a] != align[b] ? align[a] < align[b] : a < b; });

  Frame3<Scalar> f;
  f.metric = g;
  f.vectors.col(0) = e1;
  Vec3T<Scalar> v = Vec3T<Scalar>::Unit(order[0]);
  v -= e1.dot(G * v) * e1;
  f.vectors.col(1) = v / std::sqrt(v.dot(G * v));
  v = Vec3T<Scalar>::Unit(order[1]);
  v -= e1.dot(G * v) * e1;
  v -= f.vectors.col(1).dot(G * v) * f.vectors.col(1).matrix();
  f.vectors.col(2) = v / std::sqrt(v.dot(G * v));
  return f;
}

/// Components of a bilinear form in a frame: T(e_a, e_b).
template <typename Scalar>
SymBilinear3<Scalar> in_frame(const SymBilinear3<Scalar>& t,
                              const Mat3T<Scalar>& frame_vectors) {
  return SymBilinear3<Scalar>::FromMatrix(
      frame_vectors.transpose() * t.matrix() * frame_vectors);
}

/// Curvature components in an orthonormal frame (frame metric = identity).
template <typename Scalar>
Curv3<Scalar> in_frame(const Curv3<Scalar>& riem, const Frame3<Scalar>& frame) {
  Mat3T<Scalar> w;
  for (int a = 0; a < 3; ++a) {
    const int i = detail::kBivPair[a][0], j = detail::kBivPair[a][1];
    w.col(a) = frame.e(i).cross(frame.e(j));
  }
  return Curv3<Scalar>(Mat3T<Scalar>(w.transpose() * riem.op() * w),
                       SymBilinear3<Scalar>::Identity());
}

template <typename Scalar = double>
struct RotatedFrame {
  Frame3<Scalar> frame;
  Scalar alpha;  // rotation angle in the e2-e3 plane
};

/// Rotate {e2, e3} by alpha so that Ric(e2', e3') = 0, with
///   alpha = pi/4                                if R22 = R33,
///   alpha = arctan(2 R23 / (R22 - R33)) / 2     otherwise,
/// e2' = cos(a) e2 + sin(a) e3, e3' = -sin(a) e2 + cos(a) e3. e1 unchanged.
template <typename Scalar>
RotatedFrame<Scalar> rotate_frame_kill_r23(const Frame3<Scalar>& frame,
                                           const SymBilinear3<Scalar>& ric_chart) {
  const Scalar r22 = ric_chart.apply(frame.e(1), frame.e(1));
  const Scalar r33 = ric_chart.apply(frame.e(2), frame.e(2));
  const Scalar r23 = ric_chart.apply(frame.e(1), frame.e(2));
  const Scalar alpha = (r22 == r33)
                           ? Scalar(EIGEN_PI) / 4
                           : std::atan(2 * r23 / (r22 - r33)) / 2;
  RotatedFrame<Scalar> out;
  out.alpha = alpha;
  out.frame.metric = frame.metric;
  const Scalar c = std::cos(alpha), s = std::sin(alpha);
  out.frame.vectors.col(0) = frame.e(0);
  out.frame.vectors.col(1) = c * frame.e(1) + s * frame.e(2);
  out.frame.vectors.col(2) = -s * frame.e(1) + c * frame.e(2);
  return out;
}

using SymBilinear3d = SymBilinear3<double>;
using Curv3d = Curv3<double>;
using Frame3d = Frame3<double>;
using SectionalRanged = SectionalRange<double>;

}  // namespace rg2
