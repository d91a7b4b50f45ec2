#pragma once

#include <Eigen/Dense>

#include "isonet/lie.hpp"

namespace isonet {

// <f1,f2><r,r> / (2 <f1,r><f2,r>)
template <class A, class B, class C>
typename A::Scalar cross_ratio(const Eigen::MatrixBase<A>& f1, const Eigen::MatrixBase<B>& f2,
                               const Eigen::MatrixBase<C>& r, typename A::Scalar tol = default_tol()) {
  using S = typename A::Scalar;
  S a = inner(f1, r), b = inner(f2, r);
  S scale = f1.norm() * f2.norm() * r.norm() * r.norm();
  if (std::abs(a) * f2.norm() * r.norm() <= tol * scale || std::abs(b) * f1.norm() * r.norm() <= tol * scale)
    throw Error(Err::DegenerateQuad, "cross-ratio denominator vanishes");
  return inner(f1, f2) * inner(r, r) / (2 * a * b);
}

// Quad (f_i, f_j, g_j, g_i): representatives rescaled so f_i - f_j + g_j - g_i = 0,
// then the cross-ratio of f_j, g_j in r = f_i - f_j.
// Equals the complex cross-ratio (z1-z2)(z3-z4)/((z2-z3)(z4-z1)) of (f_j, g_j, g_i, f_i).
template <class S, int N>
S quad_cross_ratio(const LieVec<S, N>& fi, const LieVec<S, N>& fj, const LieVec<S, N>& gj,
                   const LieVec<S, N>& gi, S tol = default_tol()) {
  Eigen::Matrix<S, N, 4> A;
  A << fi.normalized(), fj.normalized(), gj.normalized(), gi.normalized();
  Eigen::JacobiSVD<Eigen::Matrix<S, N, 4>> svd(A, Eigen::ComputeFullV);
  Eigen::Matrix<S, 4, 1> c = svd.matrixV().col(3);
  if (c.cwiseAbs().minCoeff() <= tol * c.norm()) throw Error(Err::DegenerateQuad, "quad has a vanishing coefficient");
  LieVec<S, N> Fi = c(0) * A.col(0), Fj = -c(1) * A.col(1), Gj = c(2) * A.col(2);
  LieVec<S, N> r = Fi - Fj;
  return cross_ratio(Fj, Gj, r, tol);
}

// concircularity residual: smallest singular value of the column-normalized 4-point matrix
template <class S, int N>
S concircularity(const LieVec<S, N>& a, const LieVec<S, N>& b, const LieVec<S, N>& c, const LieVec<S, N>& d) {
  Eigen::Matrix<S, N, 4> A;
  A << a.normalized(), b.normalized(), c.normalized(), d.normalized();
  return Eigen::JacobiSVD<Eigen::Matrix<S, N, 4>>(A).singularValues()(3);
}

}  // namespace isonet
