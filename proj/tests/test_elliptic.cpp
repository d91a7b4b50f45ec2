#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <cmath>
#include <numbers>

#include "isonet/elliptic.hpp"

using namespace isonet;

namespace {

// K(k) by direct quadrature of 1/sqrt(1 - k^2 sin^2 t)
double K_quadrature(double k) {
  auto f = [k](double t) { return 1 / std::sqrt(1 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 15,
                                                                       1e-15);
}

}  // namespace

TEST(Elliptic, CompleteIntegralMatchesQuadrature) {
  for (double k : {0.0, 0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99}) {
    EXPECT_NEAR(ellint_K(k), K_quadrature(k), 1e-13 * K_quadrature(k)) << "k=" << k;
  }
  EXPECT_DOUBLE_EQ(ellint_K(0.0), std::numbers::pi / 2);
}

TEST(Elliptic, ModulusRange) {
  EXPECT_THROW(ellint_K(1.0), Error);
  EXPECT_THROW(ellint_K(-0.1), Error);
  EXPECT_THROW(sncndn(0.3, 1.2), Error);
  EXPECT_THROW(sncndn_any(0.3, 1.0), Error);
  EXPECT_THROW(sncndn_any(0.3, std::nan("")), Error);
}

TEST(Elliptic, MatchesReferenceImplementation) {
  for (double k : {0.05, 0.4, 0.8, 0.9428, 0.999}) {
    for (double u = -7.3; u < 7.3; u += 0.37) {
      double cn, dn;
      double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
      auto t = sncndn(u, k);
      EXPECT_NEAR(t.sn, sn, 1e-13);
      EXPECT_NEAR(t.cn, cn, 1e-13);
      EXPECT_NEAR(t.dn, dn, 1e-13);
    }
  }
}

TEST(Elliptic, Identities) {
  for (double k : {0.2, 0.6, 0.85, 0.97}) {
    double K = ellint_K(k);
    for (double u = -20; u < 20; u += 0.731) {
      auto t = sncndn(u, k);
      EXPECT_NEAR(t.sn * t.sn + t.cn * t.cn, 1, 1e-13);
      EXPECT_NEAR(t.dn * t.dn + k * k * t.sn * t.sn, 1, 1e-13);
      auto s = sncndn(u + 4 * K, k);
      EXPECT_NEAR(s.sn, t.sn, 1e-12);
      EXPECT_NEAR(s.cn, t.cn, 1e-12);
      auto h = sncndn(u + 2 * K, k);
      EXPECT_NEAR(h.dn, t.dn, 1e-12);
      EXPECT_NEAR(h.sn, -t.sn, 1e-12);
    }
    auto q = sncndn(K, k);
    EXPECT_NEAR(q.sn, 1, 1e-14);
    EXPECT_NEAR(q.cn, 0, 1e-14);
    EXPECT_NEAR(q.dn, std::sqrt(1 - k * k), 1e-14);
  }
}

TEST(Elliptic, DerivativeOfSn) {
  // d/du sn = cn dn, by central differences
  double k = 0.75, h = 1e-5;
  for (double u = -3; u < 3; u += 0.4) {
    double d = (sncndn(u + h, k).sn - sncndn(u - h, k).sn) / (2 * h);
    auto t = sncndn(u, k);
    EXPECT_NEAR(d, t.cn * t.dn, 1e-9);
  }
}

TEST(Elliptic, ReciprocalModulus) {
  for (double k : {1.05, 1.5, 3.0}) {
    for (double u = -4; u < 4; u += 0.29) {
      auto t = sncndn_any(u, k);
      EXPECT_NEAR(t.sn * t.sn + t.cn * t.cn, 1, 1e-13);
      EXPECT_NEAR(t.dn * t.dn + k * k * t.sn * t.sn, 1, 1e-13);
      double d = (sncndn_any(u + 1e-5, k).sn - sncndn_any(u - 1e-5, k).sn) / 2e-5;
      EXPECT_NEAR(d, t.cn * t.dn, 1e-8);
    }
  }
  auto a = sncndn_any(0.4, 0.3), b = sncndn(0.4, 0.3);
  EXPECT_EQ(a.sn, b.sn);
}
