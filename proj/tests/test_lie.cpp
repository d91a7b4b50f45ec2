#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "isonet/lie.hpp"

using namespace isonet;

namespace {

const Vec5 p5 = point_complex<double, 5>();
const Vec5 q0 = infinity<double, 5>();

Vec5 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  Vec5 v;
  for (int i = 0; i < 5; ++i) v(i) = n(rng);
  return v;
}

}  // namespace

TEST(Lie, InnerProductSignature) {
  EXPECT_DOUBLE_EQ(inner(p5, p5), -1);
  EXPECT_DOUBLE_EQ(inner(q0, q0), 0);
  Vec5 x = encode_point(1, 0);
  EXPECT_DOUBLE_EQ(inner(x, x), 0);
  Vec6 p6 = point_complex<double, 6>();
  EXPECT_DOUBLE_EQ(inner(p6, p6), -1);
}

TEST(Lie, PointCodec) {
  Vec5 o = encode_point(0, 0);
  EXPECT_TRUE(o.isApprox((Vec5() << 0, 0, 0.5, 0.5, 0).finished()));
  Vec5 e = encode_point(1, 0);
  EXPECT_TRUE(e.isApprox((Vec5() << 1, 0, 0, 1, 0).finished()));
  Vec5 v = 2 * encode_point(3, -4);
  auto x = decode_point(v);
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR((*x)(0), 3, 1e-15);
  EXPECT_NEAR((*x)(1), -4, 1e-15);
  EXPECT_FALSE(decode_point(Vec5(3 * q0)).has_value());
  EXPECT_THROW(decode_point(encode_circle({0, 0}, 1)), Error);
}

TEST(Lie, CircleCodec) {
  EXPECT_TRUE(encode_circle({0, 0}, 1).isApprox((Vec5() << 0, 0, 1, 0, 1).finished()));
  EXPECT_TRUE(encode_line({0, 1}, 0).isApprox((Vec5() << 0, 1, 0, 0, 1).finished()));
  auto c = decode_sphere(Vec5(-3 * encode_circle({2, 3}, -0.5)));
  EXPECT_FALSE(c.flat);
  EXPECT_NEAR(c.center(0), 2, 1e-14);
  EXPECT_NEAR(c.center(1), 3, 1e-14);
  EXPECT_NEAR(c.radius, -0.5, 1e-14);
  Eigen::Vector2d n(0.6, -0.8);
  auto l = decode_sphere(Vec5(0.25 * encode_line(n, 1.5)));
  EXPECT_TRUE(l.flat);
  EXPECT_NEAR((l.normal - n).norm(), 0, 1e-15);
  EXPECT_NEAR(l.dist, 1.5, 1e-15);
  EXPECT_THROW(decode_sphere(encode_point(1, 1)), Error);
  EXPECT_THROW(decode_sphere(Vec5(encode_circle({0, 0}, 1) + 0.1 * p5)), Error);
}

TEST(Lie, Inversion) {
  std::mt19937_64 rng(3);
  Vec5 a = random_vec(rng);
  EXPECT_TRUE(inversion(a, a).isApprox(-a, 1e-14));
  // x orthogonal to a is fixed
  Vec5 x = random_vec(rng);
  x -= inner(x, a) / inner(a, a) * a;
  EXPECT_TRUE(inversion(a, x).isApprox(x, 1e-14));
  EXPECT_THROW(inversion(q0, x), Error);
}

TEST(Lie, UnitCircleInversion) {
  // M-inversion in the unit circle: complex s + <s,p> p
  Vec5 s = encode_circle({0, 0}, 1);
  Vec5 a = s + inner(s, p5) * p5;
  EXPECT_NEAR(inner(a, p5), 0, 1e-16);
  std::complex<double> z(2, 0), w = z / std::norm(z);
  auto y = decode_point(inversion(a, encode_point(2, 0)));
  ASSERT_TRUE(y.has_value());
  EXPECT_NEAR((*y)(0), w.real(), 1e-15);
  EXPECT_NEAR((*y)(1), w.imag(), 1e-15);
  std::complex<double> z2(0.3, -1.7), w2 = z2 / std::norm(z2);
  auto y2 = decode_point(inversion(a, encode_point(z2.real(), z2.imag())));
  EXPECT_NEAR((*y2)(0), w2.real(), 1e-15);
  EXPECT_NEAR((*y2)(1), w2.imag(), 1e-15);
}

TEST(Lie, OrientedAngle) {
  Vec5 c = encode_circle({1, 2}, 0.7);
  EXPECT_NEAR(oriented_angle(c, c), 1, 1e-14);
  EXPECT_NEAR(oriented_angle(encode_line({0, 1}, 0), encode_line({1, 0}, 0)), 0, 1e-15);
  EXPECT_NEAR(oriented_angle(encode_circle({0, 0}, 1), encode_circle({0, 0}, 2)), 1.25, 1e-15);
  // two unit circles at distance 1 meet at 60 degrees between radii: cos = 1 - d^2/(2 r1 r2)
  EXPECT_NEAR(oriented_angle(encode_circle({0, 0}, 1), encode_circle({1, 0}, 1)), 0.5, 1e-15);
  EXPECT_THROW(oriented_angle(encode_point(0, 0), c), Error);
}

TEST(Lie, GeodesicCurvature) {
  EXPECT_NEAR(geodesic_curvature(encode_line({0.6, 0.8}, 2.0), q0), 0, 1e-15);
  EXPECT_NEAR(geodesic_curvature(Vec5(encode_circle({0, 0}, 1)), q0), -1, 1e-15);
  EXPECT_NEAR(geodesic_curvature(Vec5(encode_circle({5, -3}, 2)), q0), -0.5, 1e-15);
  EXPECT_THROW(geodesic_curvature(encode_point(0, 0), q0), Error);
}

TEST(Lie, SpaceForms) {
  using SF = SpaceForm<double, 5>;
  EXPECT_EQ(SF::euclidean().kind(), SpaceKind::Euclidean);
  Vec5 h = encode_line({0, 1}, 0) - p5;  // boundary line of the half-plane
  SF hyp(h);
  EXPECT_EQ(hyp.kind(), SpaceKind::Hyperbolic);
  EXPECT_DOUBLE_EQ(hyp.curvature(), -inner(h, h));
  SF s2((Vec5() << 0, 0, 1, 2, 0).finished());
  EXPECT_EQ(s2.kind(), SpaceKind::Spherical);
  EXPECT_THROW(SF{p5}, Error);
}

TEST(Lie, Directrix) {
  Vec5 c = encode_circle({0.5, 0}, 2);
  auto d0 = directrix(c);
  EXPECT_EQ(d0.kind, ComplexKind::Contact);
  EXPECT_NEAR(inner(d0.vec, d0.vec), 0, 1e-14);
  auto d0n = directrix(Vec5(-c));
  EXPECT_EQ(d0n.lambda_re, 0);
  EXPECT_TRUE(d0n.vec.isApprox(-c));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Vec5 a = random_vec(rng);
    auto d = directrix(a);
    double disc = inner(a, p5) * inner(a, p5) + inner(a, a);
    if (inner(a, a) > 0) EXPECT_EQ(d.kind, ComplexKind::RealAngle);
    if (disc < 0) {
      EXPECT_TRUE(d.complex);
      EXPECT_EQ(d.kind, ComplexKind::ImaginaryRadius);
      continue;
    }
    EXPECT_NEAR(inner(d.vec, d.vec) / d.vec.squaredNorm(), 0, 1e-12);
  }
}

TEST(Lie, Embedding) {
  std::mt19937_64 rng(5);
  EXPECT_TRUE(embed(p5).isApprox(point_complex<double, 6>()));
  for (int i = 0; i < 20; ++i) {
    Vec5 u = random_vec(rng), v = random_vec(rng);
    EXPECT_NEAR(inner(embed(u), embed(v)), inner(u, v), 1e-14);
  }
  auto x = decode_point(embed(encode_point(1, 0)));
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(x->isApprox(Eigen::Vector3d(1, 0, 0)));
  EXPECT_NEAR(inner(embed(encode_point(0.3, 4)), plane_sphere<double>()), 0, 1e-15);
}

TEST(Lie, SwapInversion) {
  // lightlike a, b: a - b swaps them
  Vec5 a = encode_circle({0, 0}, 1), b = encode_circle({3, 1}, -2);
  Vec5 img = inversion(Vec5(a - b), a);
  EXPECT_TRUE(projectively_equal(img, b, 1e-14));
}

TEST(Lie, CircleIntersection) {
  auto x = circle_intersection(Vec5(encode_circle({0, 0}, 1)), Vec5(encode_line({0, 1}, 0)));
  std::vector<double> xs;
  for (auto& v : x) {
    auto e = *decode_point(v);
    EXPECT_NEAR(e(1), 0, 1e-14);
    xs.push_back(e(0));
  }
  std::sort(xs.begin(), xs.end());
  EXPECT_NEAR(xs[0], -1, 1e-14);
  EXPECT_NEAR(xs[1], 1, 1e-14);

  auto y = circle_intersection(Vec5(encode_circle({0, 0}, 1)), Vec5(encode_circle({1, 0}, 1)));
  std::vector<double> ys;
  for (auto& v : y) {
    auto e = *decode_point(v);
    EXPECT_NEAR(e(0), 0.5, 1e-14);
    ys.push_back(e(1));
  }
  std::sort(ys.begin(), ys.end());
  EXPECT_NEAR(ys[0], -std::sqrt(3.0) / 2, 1e-14);
  EXPECT_NEAR(ys[1], std::sqrt(3.0) / 2, 1e-14);

  // internally tangent circles and disjoint circles
  EXPECT_THROW(
      {
        try {
          circle_intersection(Vec5(encode_circle({0, 0}, 2)), Vec5(encode_circle({1, 0}, 1)));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Err::TangentPencil);
          throw;
        }
      },
      Error);
  EXPECT_THROW(
      {
        try {
          circle_intersection(Vec5(encode_circle({0, 0}, 1)), Vec5(encode_circle({5, 0}, 1)));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Err::NoRealIntersection);
          throw;
        }
      },
      Error);
}

TEST(Lie, RandomizedIdentities) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10, 10);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    Vec5 a = random_vec(rng), x = random_vec(rng), y = random_vec(rng);
    if (std::abs(inner(a, a)) < 0.05 * a.squaredNorm()) continue;
    Vec5 ax = inversion(a, x), ay = inversion(a, y);
    Vec5 back = inversion(a, ax);
    worst = std::max(worst, (back - x).norm() / ax.norm());
    double lhs = inner(ax, ay);
    worst = std::max(worst, std::abs(lhs - inner(x, y)) / (ax.norm() * ay.norm()));
    Vec5 m = a + inner(a, p5) * p5;
    Vec5 pt = encode_point(u(rng), u(rng));
    worst = std::max(worst, std::abs(inner(inversion(m, pt), p5)) / pt.norm());
  }
  EXPECT_LT(worst, 1e-12);
}
