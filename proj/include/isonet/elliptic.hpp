#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "isonet/error.hpp"

namespace isonet {

template <class S>
struct JacobiTriple {
  S sn, cn, dn;
};

namespace detail {

inline constexpr int kAgmMaxIter = 40;

template <class S>
int agm_chain(S k, std::array<S, kAgmMaxIter + 1>& a, std::array<S, kAgmMaxIter + 1>& c) {
  S b = std::sqrt((1 - k) * (1 + k));
  a[0] = 1;
  c[0] = k;
  int n = 0;
  while (n < kAgmMaxIter && std::abs(a[n] - b) >= S(1e-15) * a[n]) {
    S an = a[n];
    a[n + 1] = (an + b) / 2;
    c[n + 1] = (an - b) / 2;
    b = std::sqrt(an * b);
    ++n;
  }
  return n;
}

}  // namespace detail

// complete elliptic integral of the first kind, modulus k
template <class S>
S ellint_K(S k) {
  if (!(k >= 0) || k >= 1) throw Error(Err::ModulusOutOfRange, "K(k) needs 0 <= k < 1");
  std::array<S, detail::kAgmMaxIter + 1> a{}, c{};
  int n = detail::agm_chain(k, a, c);
  S b = std::sqrt((1 - k) * (1 + k));
  // the chain stops when a_n and b_n agree
  S m = n == 0 ? (a[0] + b) / 2 : a[n];
  return std::numbers::pi_v<S> / (2 * m);
}

// sn, cn, dn for 0 <= k < 1 by descending Landen transformation
template <class S>
JacobiTriple<S> sncndn(S u, S k) {
  if (!(k >= 0) || k >= 1) throw Error(Err::ModulusOutOfRange, "sncndn needs 0 <= k < 1");
  if (k == 0) return {std::sin(u), std::cos(u), S(1)};
  S period = 4 * ellint_K(k);
  u -= period * std::round(u / period);
  std::array<S, detail::kAgmMaxIter + 1> a{}, c{};
  int n = detail::agm_chain(k, a, c);
  std::array<S, detail::kAgmMaxIter + 1> phi{};
  phi[n] = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) phi[i - 1] = (phi[i] + std::asin(c[i] / a[i] * std::sin(phi[i]))) / 2;
  S sn = std::sin(phi[0]), cn = std::cos(phi[0]);
  S dn = std::sqrt((1 - k) * (1 + k) + k * k * cn * cn);
  return {sn, cn, dn};
}

// any modulus k > 0, k != 1; k > 1 goes through the reciprocal-modulus identities
template <class S>
JacobiTriple<S> sncndn_any(S u, S k) {
  if (!(k > 0) || k == 1) throw Error(Err::ModulusOutOfRange, "modulus must be positive and != 1");
  if (k < 1) return sncndn(u, k);
  JacobiTriple<S> t = sncndn(k * u, 1 / k);
  return {t.sn / k, t.dn, t.cn};
}

}  // namespace isonet
