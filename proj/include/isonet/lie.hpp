#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "isonet/error.hpp"

namespace isonet {

// Light-cone vectors: N = 5 for the plane model R^{3,2}, N = 6 for space R^{4,2}.
// Basis (x.., (1-|x|^2)/2, (1+|x|^2)/2, r), signature (+..+, -, -).
template <class S, int N>
using LieVec = Eigen::Matrix<S, N, 1>;

using Vec5 = LieVec<double, 5>;
using Vec6 = LieVec<double, 6>;

inline double default_tol() {
  static const double tol = [] {
    if (const char* env = std::getenv("ISONET_TOL")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

template <class A, class B>
typename A::Scalar inner(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v) {
  static_assert(int(A::RowsAtCompileTime) == int(B::RowsAtCompileTime), "dimension mismatch");
  constexpr int n = A::RowsAtCompileTime;
  static_assert(n == 5 || n == 6, "light-cone vectors have 5 or 6 coordinates");
  return u.template head<n - 2>().dot(v.template head<n - 2>()) -
         u.template tail<2>().dot(v.template tail<2>());
}

template <class S, int N>
Eigen::Matrix<S, N, N> metric() {
  Eigen::Matrix<S, N, 1> d = Eigen::Matrix<S, N, 1>::Ones();
  d(N - 2) = -1;
  d(N - 1) = -1;
  return d.asDiagonal();
}

template <class S, int N>
LieVec<S, N> point_complex() {
  LieVec<S, N> p = LieVec<S, N>::Zero();
  p(N - 1) = 1;
  return p;
}

// q0, the point at infinity and the Euclidean space-form vector
template <class S, int N>
LieVec<S, N> infinity() {
  LieVec<S, N> q = LieVec<S, N>::Zero();
  q(N - 3) = 1;
  q(N - 2) = -1;
  return q;
}

// e0, the horizontal plane z = 0 in space
template <class S>
LieVec<S, 6> plane_sphere() {
  LieVec<S, 6> e = LieVec<S, 6>::Zero();
  e(2) = 1;
  e(5) = 1;
  return e;
}

template <class S, int D>
LieVec<S, D + 3> encode_point(const Eigen::Matrix<S, D, 1>& x) {
  LieVec<S, D + 3> v;
  S n2 = x.squaredNorm();
  v.template head<D>() = x;
  v(D) = (1 - n2) / 2;
  v(D + 1) = (1 + n2) / 2;
  v(D + 2) = 0;
  return v;
}

inline Vec5 encode_point(double x, double y) { return encode_point(Eigen::Vector2d(x, y)); }

template <class S, int D>
LieVec<S, D + 3> encode_sphere(const Eigen::Matrix<S, D, 1>& c, S r) {
  if (r == 0) throw Error(Err::BadInput, "zero radius");
  LieVec<S, D + 3> v;
  S n2 = c.squaredNorm();
  v.template head<D>() = c;
  v(D) = (1 - n2 + r * r) / 2;
  v(D + 1) = (1 + n2 - r * r) / 2;
  v(D + 2) = r;
  return v;
}

template <class S, int D>
LieVec<S, D + 3> encode_plane(const Eigen::Matrix<S, D, 1>& n, S d) {
  if (std::abs(n.norm() - 1) > 1e-12) throw Error(Err::BadInput, "normal must be unit length");
  LieVec<S, D + 3> v;
  v.template head<D>() = n;
  v(D) = -d;
  v(D + 1) = d;
  v(D + 2) = 1;
  return v;
}

inline Vec5 encode_circle(const Eigen::Vector2d& c, double r) { return encode_sphere(c, r); }
inline Vec5 encode_line(const Eigen::Vector2d& n, double d) { return encode_plane(n, d); }

template <class S, int N>
bool is_lightlike(const LieVec<S, N>& v, S tol = default_tol()) {
  return std::abs(inner(v, v)) <= tol * v.squaredNorm();
}

template <class S, int N>
std::optional<Eigen::Matrix<S, N - 3, 1>> decode_point(const LieVec<S, N>& v, S tol = default_tol()) {
  S nv = v.norm();
  if (!(nv > 0) || std::abs(v(N - 1)) > tol * nv || !is_lightlike(v, tol))
    throw Error(Err::NotAPoint, "vector is not a point of the light cone");
  S w = v(N - 3) + v(N - 2);
  if (std::abs(w) <= tol * nv) return std::nullopt;
  return Eigen::Matrix<S, N - 3, 1>(v.template head<N - 3>() / w);
}

// Oriented sphere (circle in the plane) or plane (line); radius carries orientation.
template <class S, int D>
struct Sphere {
  bool flat = false;
  Eigen::Matrix<S, D, 1> center = Eigen::Matrix<S, D, 1>::Zero();
  S radius = 0;
  Eigen::Matrix<S, D, 1> normal = Eigen::Matrix<S, D, 1>::Zero();
  S dist = 0;
};

template <class S, int N>
Sphere<S, N - 3> decode_sphere(const LieVec<S, N>& v, S tol = default_tol()) {
  constexpr int D = N - 3;
  S nv = v.norm();
  if (!(nv > 0) || !is_lightlike(v, tol) || std::abs(v(N - 1)) <= tol * nv)
    throw Error(Err::NotACircle, "vector is not an oriented circle/sphere");
  Sphere<S, D> s;
  S w = v(D) + v(D + 1);
  if (std::abs(w) <= tol * nv) {
    LieVec<S, N> u = v / v(N - 1);
    s.flat = true;
    s.normal = u.template head<D>();
    s.dist = u(D + 1);
    return s;
  }
  LieVec<S, N> u = v / w;
  s.center = u.template head<D>();
  s.radius = u(N - 1);
  return s;
}

template <class S, int N>
LieVec<S, N> normalize_point(const LieVec<S, N>& v) {
  S w = v(N - 3) + v(N - 2);
  if (w == 0) return v / v.norm();
  return v / w;
}

// representative with <s,p> = -1
template <class S, int N>
LieVec<S, N> normalize_sphere(const LieVec<S, N>& s) {
  S sp = inner(s, point_complex<S, N>());
  if (sp == 0) throw Error(Err::NotACircle, "sphere normalization needs <s,p> != 0");
  return s / (-sp);
}

template <class S, int N>
LieVec<S, N> inversion(const LieVec<S, N>& a, const LieVec<S, N>& x, S tol = default_tol()) {
  S aa = inner(a, a);
  if (std::abs(aa) <= tol * a.squaredNorm())
    throw Error(Err::DegenerateComplex, "inversion in a lightlike complex");
  return x - (2 * inner(x, a) / aa) * a;
}

// matrix of the reflection x -> x - 2<x,a>/<a,a> a
template <class S, int N>
Eigen::Matrix<S, N, N> inversion_matrix(const LieVec<S, N>& a, S tol = default_tol()) {
  S aa = inner(a, a);
  if (std::abs(aa) <= tol * a.squaredNorm())
    throw Error(Err::DegenerateComplex, "inversion in a lightlike complex");
  return Eigen::Matrix<S, N, N>::Identity() - (2 / aa) * a * (metric<S, N>() * a).transpose();
}

template <class S, int N>
S oriented_angle(const LieVec<S, N>& u, const LieVec<S, N>& v, S tol = default_tol()) {
  const LieVec<S, N> p = point_complex<S, N>();
  S up = inner(u, p), vp = inner(v, p);
  if (std::abs(up) <= tol * u.norm() || std::abs(vp) <= tol * v.norm())
    throw Error(Err::NotACircle, "angle between a point and a circle");
  return 1 + inner(u, v) / (up * vp);
}

enum class SpaceKind { Euclidean, Hyperbolic, Spherical };

template <class S, int N>
struct SpaceForm {
  LieVec<S, N> q;

  explicit SpaceForm(const LieVec<S, N>& qv) : q(qv) {
    if (std::abs(inner(q, point_complex<S, N>())) > default_tol() * q.norm())
      throw Error(Err::BadInput, "space form vector must be orthogonal to p");
  }
  static SpaceForm euclidean() { return SpaceForm(infinity<S, N>()); }
  S curvature() const { return -inner(q, q); }
  SpaceKind kind(S tol = default_tol()) const {
    S qq = inner(q, q);
    if (std::abs(qq) <= tol * q.squaredNorm()) return SpaceKind::Euclidean;
    return qq > 0 ? SpaceKind::Hyperbolic : SpaceKind::Spherical;
  }
};

template <class S, int N>
S geodesic_curvature(const LieVec<S, N>& s, const LieVec<S, N>& q, S tol = default_tol()) {
  S sp = inner(s, point_complex<S, N>());
  if (std::abs(sp) <= tol * s.norm()) throw Error(Err::NotACircle, "curvature of a point");
  return inner(s, q) / sp;
}

enum class ComplexKind { Contact, RealAngle, ImaginaryAngle, ImaginaryRadius };

// a* = a + lambda p; for a negative discriminant lambda = lambda_re + i lambda_im
template <class S, int N>
struct Directrix {
  LieVec<S, N> vec;
  S lambda_re = 0;
  S lambda_im = 0;
  bool complex = false;
  ComplexKind kind = ComplexKind::Contact;
};

template <class S, int N>
Directrix<S, N> directrix(const LieVec<S, N>& a, S tol = default_tol()) {
  const LieVec<S, N> p = point_complex<S, N>();
  S ap = inner(a, p), aa = inner(a, a);
  if ((a - (-ap) * p).norm() <= tol * a.norm())
    throw Error(Err::BadInput, "complex proportional to p has no directrix");
  Directrix<S, N> d;
  S disc = ap * ap + aa;
  if (std::abs(aa) <= tol * a.squaredNorm()) {
    d.kind = ComplexKind::Contact;
    aa = 0;
    disc = ap * ap;
  } else if (aa > 0) {
    d.kind = ComplexKind::RealAngle;
  } else {
    d.kind = disc >= 0 ? ComplexKind::ImaginaryAngle : ComplexKind::ImaginaryRadius;
  }
  if (disc >= 0) {
    d.lambda_re = ap - std::sqrt(disc);
  } else {
    d.complex = true;
    d.lambda_re = ap;
    d.lambda_im = -std::sqrt(-disc);
  }
  d.vec = a + d.lambda_re * p;
  return d;
}

inline Vec6 embed(const Vec5& v) {
  Vec6 w;
  w << v(0), v(1), 0, v(2), v(3), v(4);
  return w;
}

// Orthonormal basis (columns) of the subspace J-orthogonal to the given rows.
template <class S, int N, int K>
Eigen::Matrix<S, N, N - K> orthogonal_complement(const std::array<LieVec<S, N>, K>& vs) {
  Eigen::Matrix<S, K, N> A;
  for (int i = 0; i < K; ++i) A.row(i) = (metric<S, N>() * vs[i]).transpose() / vs[i].norm();
  Eigen::JacobiSVD<Eigen::Matrix<S, K, N>> svd(A, Eigen::ComputeFullV);
  return svd.matrixV().template rightCols<N - K>();
}

// v with <row_i, v> ~ 0 for all rows (smallest right singular vector of the unit J-rows);
// ratio = sigma_min / sigma_max
template <class S, int N>
struct KernelFit {
  LieVec<S, N> vec;
  S ratio;
  Eigen::Matrix<S, Eigen::Dynamic, 1> singular;
};

template <class S, int N, class Rows>
KernelFit<S, N> kernel_vector(const Rows& rows) {
  const Eigen::Index m = Eigen::Index(rows.size());
  Eigen::Matrix<S, Eigen::Dynamic, N> A(std::max<Eigen::Index>(m, N), N);
  A.setZero();
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    S nr = r.norm();
    if (nr > 0) A.row(i) = (metric<S, N>() * r).transpose() / nr;
    ++i;
  }
  Eigen::JacobiSVD<Eigen::Matrix<S, Eigen::Dynamic, N>> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  KernelFit<S, N> k;
  k.vec = svd.matrixV().col(N - 1);
  k.singular = sv;
  k.ratio = sv(0) > 0 ? sv(N - 1) / sv(0) : S(1);
  return k;
}

template <class S, int N>
bool projectively_equal(const LieVec<S, N>& u, const LieVec<S, N>& v, S tol = default_tol()) {
  LieVec<S, N> a = u / u.norm(), b = v / v.norm();
  return std::min((a - b).norm(), (a + b).norm()) <= tol;
}

// Points common to two circles: null vectors of span(c1, c2, p)^perp.
template <class S>
std::array<LieVec<S, 5>, 2> circle_intersection(const LieVec<S, 5>& c1, const LieVec<S, 5>& c2,
                                                S tol = default_tol()) {
  const LieVec<S, 5> p = point_complex<S, 5>();
  Eigen::Matrix<S, 5, 2> W = orthogonal_complement<S, 5, 3>({c1, c2, p});
  Eigen::Matrix<S, 2, 2> G = W.transpose() * metric<S, 5>() * W;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<S, 2, 2>> es(G);
  S m0 = es.eigenvalues()(0), m1 = es.eigenvalues()(1);
  S scale = std::max(std::abs(m0), std::abs(m1));
  if (std::min(std::abs(m0), std::abs(m1)) <= tol * scale)
    throw Error(Err::TangentPencil, "circles touch");
  if (m0 > 0 || m1 < 0) throw Error(Err::NoRealIntersection, "circles do not intersect");
  LieVec<S, 5> u0 = W * es.eigenvectors().col(0), u1 = W * es.eigenvectors().col(1);
  S t = std::sqrt(-m0 / m1);
  std::array<LieVec<S, 5>, 2> x = {u0 + t * u1, u0 - t * u1};
  for (auto& v : x) {
    S w = v(2) + v(3);
    v = std::abs(w) > tol * v.norm() ? LieVec<S, 5>(v / w) : LieVec<S, 5>(v / v.norm());
  }
  return x;
}

}  // namespace isonet
