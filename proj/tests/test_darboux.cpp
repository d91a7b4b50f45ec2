#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isonet/cross_ratio.hpp"
#include "isonet/darboux.hpp"

using namespace isonet;

namespace {

const Vec5 P = point_complex<double, 5>();
const Vec5 Q0 = infinity<double, 5>();

Eigen::Vector2d xy(const Vec5& v) { return *decode_point(v); }

Elastica sample_elastica(int n = 60, double k = 0.8, int r = 12) {
  ElasticaParams prm;
  prm.k = k;
  prm.z = elastica_period_z(k, r);
  prm.phase = 0.3;
  prm.h = 0.1;
  prm.n = n;
  return elastic_curve_euclidean(prm);
}

struct Seed {
  DiscreteCurve f;
  CircleCongruence a, d;
  Vec5 D;
};

Seed seed(int n = 60) {
  Seed s;
  s.f = sample_elastica(n).curve;
  auto fit = elastic_congruence_fit(s.f, Q0);
  s.d = fit.circles;
  s.D = fit.complex;
  s.a = arc_length_congruence(s.f, Q0).circles;
  return s;
}

double rel(double v, const Vec5& a, const Vec5& b) { return std::abs(v) / (a.norm() * b.norm()); }

}  // namespace

TEST(Darboux, TangentialCircleExample) {
  Vec5 axis = encode_line({0, 1}, 0);
  Vec5 f0 = encode_point(0, 0), f1 = encode_point(0, 2);
  Vec5 t = tangential_circle(f0, axis, f1);
  auto sph = decode_sphere(normalize_sphere(t));
  EXPECT_NEAR(sph.center(0), 0, 1e-12);
  EXPECT_NEAR(sph.center(1), 1, 1e-12);
  EXPECT_NEAR(std::abs(sph.radius), 1, 1e-12);
  EXPECT_THROW(tangential_circle(encode_point(0, 1), axis, f1), Error);
}

TEST(Darboux, TangentialCircleIdentities) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int it = 0; it < 200; ++it) {
    Eigen::Vector2d c(u(rng), u(rng));
    double r = 0.3 + std::abs(u(rng)), th = u(rng);
    Vec5 c1 = encode_circle(c, r);
    Vec5 f0 = encode_point(Eigen::Vector2d(c + r * Eigen::Vector2d(std::cos(th), std::sin(th))));
    Vec5 f1 = encode_point(u(rng), u(rng));
    Vec5 t = tangential_circle(f0, c1, f1);
    EXPECT_LT(rel(inner(t, f0), t, f0), 1e-12);
    EXPECT_LT(rel(inner(t, f1), t, f1), 1e-12);
    EXPECT_LT(rel(inner(t, c1), t, c1), 1e-12);
    EXPECT_LT(rel(inner(t, t), t, t), 1e-12);
  }
}

TEST(Darboux, Construction2ReproducesElastica) {
  auto s = seed(60);
  Vec5 m2 = Q0 + inner(s.a.circles[0], Q0) * P;
  for (const auto& c : s.a.circles) EXPECT_LT(rel(inner(c, m2), c, m2), 1e-12);
  auto g = construction2(s.f.points[0], s.f.points[1], s.f.points[2], s.d.circles[0], s.a.circles[0], s.D, m2, 50);
  ASSERT_EQ(g.size(), 53);
  double err = 0;
  for (int i = 0; i < g.size(); ++i) err = std::max(err, (xy(g.points[i]) - xy(s.f.points[i])).norm());
  EXPECT_LT(err, 1e-9);
}

TEST(Darboux, Construction2SymmetricSeed) {
  // regular points on the unit circle, the circle itself and the chord line through f0, f2
  auto on = [](double t) { return encode_point(std::cos(t), std::sin(t)); };
  double th = 0.5;
  Vec5 c = encode_circle({0, 0}, 1), chord = encode_line({1, 0}, std::cos(th));
  Vec5 m1 = c + Q0 - inner(c, Q0) / inner(c, P) * P;
  auto st = construction2_step(on(-th), on(0), on(th), c, chord, m1, Q0);
  EXPECT_LT((xy(st.point) - xy(on(2 * th))).norm(), 1e-12);
}

TEST(Darboux, Construction2Singular) {
  auto on = [](double t) { return encode_point(std::cos(t), std::sin(t)); };
  Vec5 c = encode_circle({0, 0}, 1);
  Vec5 x = Q0 - inner(c, Q0) / inner(c, P) * P;
  try {
    construction2_step(on(-0.4), on(0), on(0.4), c, c, c + x, c + 2 * x);
    ADD_FAILURE() << "expected a singular step";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::SingularStep);
  }
}

TEST(Darboux, SLambda) {
  auto s = seed(40);
  EXPECT_THROW(s_lambda(s.a, s.d, -1), Error);
  EXPECT_DOUBLE_EQ(s_lambda_dual(0), -0.5);
  auto s0 = s_lambda(s.a, s.d, 0);
  for (size_t i = 0; i < s0.circles.size(); ++i) {
    Vec5 expect = -normalize_sphere(s.d.circles[i]) / 2 + P;
    EXPECT_LT((normalize_sphere(expect) - s0.circles[i]).norm(), 1e-12);
  }
  for (double lambda : {-3.0, -0.7, -0.3, 0.4, 2.0}) {
    auto sl = s_lambda(s.a, s.d, lambda);
    for (size_t i = 0; i < sl.circles.size(); ++i) {
      const Vec5& c = sl.circles[i];
      EXPECT_LT(rel(inner(c, c), c, c), 1e-10);
      int v = int(i) + sl.offset;
      EXPECT_LT(rel(inner(c, s.f.at(v - 1)), c, s.f.at(v - 1)), 1e-10);
      EXPECT_LT(rel(inner(c, s.f.at(v + 1)), c, s.f.at(v + 1)), 1e-10);
    }
  }
}

TEST(Darboux, ConstantAngleOfCongruences) {
  auto s = seed(50);
  auto comb = combine_congruences(s.a, s.d, 0.7, s.D, Q0);
  EXPECT_LT(comb.xi_dev, 1e-10);
  EXPECT_NEAR(comb.xi, -1, 1e-10);
}

TEST(Darboux, CombineCongruences) {
  auto s = seed(50);
  Vec5 m2 = Q0 + inner(s.a.circles[0], Q0) * P;
  for (double lambda : {-2.0, 0.3, 1.7}) {
    auto comb = combine_congruences(s.a, s.d, lambda, s.D, m2);
    EXPECT_LT(comb.eta_dev, 1e-10 * std::max(1.0, std::abs(comb.eta)));
    for (const auto& c : comb.circles.circles) EXPECT_LT(rel(inner(c, c), c, c), 1e-10);
    // the induced complex m1 + eta m2 contains every difference of consecutive circles
    Vec5 m = s.D + comb.eta * m2;
    double worst = 0;
    for (size_t i = 0; i + 1 < comb.circles.circles.size(); ++i) {
      Vec5 r = comb.circles.circles[i] - comb.circles.circles[i + 1];
      worst = std::max(worst, rel(inner(r, m), r, m));
    }
    EXPECT_LT(worst, 1e-9);
  }
  // far limit: the first congruence dominates
  auto far = combine_congruences(s.a, s.d, 1e6);
  for (size_t i = 0; i < far.circles.circles.size(); ++i)
    EXPECT_TRUE(projectively_equal(far.circles.circles[i], s.a.circles[i], 1e-5));
  // a non-constant angle is rejected
  CircleCongruence bad = s.d;
  bad.circles[3] = s.a.circles[3];
  EXPECT_THROW(combine_congruences(s.a, bad, 0.5), Error);
}

TEST(Darboux, TangentialCombination) {
  // t^lambda = lambda t1 + dual t2 + p touches c^lambda at f_i
  auto s = seed(30);
  double lambda = 0.6;
  auto comb = combine_congruences(s.a, s.d, lambda);
  double dual = (1 + 2 * lambda) / (2 * comb.xi * lambda - 2);
  for (size_t i = 0; i + 1 < s.a.circles.size(); ++i) {
    int v = int(i) + s.a.offset;
    // circle through f_v and f_{v+1} touching the vertex-v circle at f_{v+1}
    Vec5 t1 = normalize_sphere(tangential_circle(s.f.at(v + 1), s.a.circles[i], s.f.at(v)));
    Vec5 t2 = normalize_sphere(tangential_circle(s.f.at(v + 1), s.d.circles[i], s.f.at(v)));
    Vec5 t = lambda * t1 + dual * t2 + P;
    for (size_t j : {i, i + 1}) {
      Vec5 c = comb.circles.circles[j];
      EXPECT_LT(rel(inner(t, c), t, c), 1e-10);
    }
    EXPECT_LT(rel(inner(t, t), t, t), 1e-10);
    EXPECT_LT(rel(inner(t, s.f.at(v)), t, s.f.at(v)), 1e-10);
  }
}

TEST(Darboux, ExplicitTransforms) {
  auto s = seed(60);
  for (double lambda : {-0.45, -0.3, -2.0}) {
    auto sl = s_lambda(s.a, s.d, lambda);
    auto m = congruence_complex(sl);
    EXPECT_LT(m.ratio, 1e-8);
    std::vector<DarbouxTransform> ts;
    try {
      ts = darboux_explicit(s.f, sl, m.vec);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Err::NoRealTransform);
      continue;
    }
    for (const auto& t : ts) {
      for (size_t i = 0; i < t.curve.points.size(); ++i) {
        const Vec5& g = t.curve.points[i];
        EXPECT_LT(std::abs(inner(g, g)) / g.squaredNorm(), 1e-11);
        EXPECT_LT(std::abs(inner(g, P)) / g.norm(), 1e-11);
        // Lie inversion in b maps the circle to the point and the complex to p
        Vec5 img = inversion(t.b, sl.circles[i]);
        EXPECT_TRUE(projectively_equal(img, g, 1e-10));
      }
      Vec5 mp = inversion(t.b, t.m_bar);
      EXPECT_TRUE(projectively_equal(mp, P, 1e-10));
      std::vector<double> cr;
      for (int i = 0; i + 1 < t.curve.size(); ++i) {
        int v = i + t.offset;
        cr.push_back(quad_cross_ratio(s.f.at(v), s.f.at(v + 1), t.curve.at(i + 1), t.curve.at(i)));
      }
      double mean = 0, worst = 0;
      for (double x : cr) mean += x / cr.size();
      for (double x : cr) worst = std::max(worst, std::abs(x - mean));
      EXPECT_LT(worst, 1e-9 * std::abs(mean));
      // Darboux pair criterion
      for (int i = 1; i + 1 < t.curve.size(); ++i) {
        int v = i + t.offset;
        Vec5 w = s.f.at(v - 1) * inner(s.f.at(v + 1), t.m_bar) - s.f.at(v + 1) * inner(s.f.at(v - 1), t.m_bar);
        EXPECT_LT(rel(inner(t.curve.points[i], w), t.curve.points[i], w), 1e-10);
      }
    }
  }
}

TEST(Darboux, EvolvedCongruence) {
  auto s = seed(40);
  auto sl = s_lambda(s.a, s.d, -0.35);
  auto m = congruence_complex(sl);
  for (size_t i = 0; i + 1 < sl.circles.size(); ++i) {
    Vec5 r = sl.circles[i] - sl.circles[i + 1];
    // r_ij lies in the complex and maps f_i to f_j and c_i to c_j
    int v = int(i) + sl.offset;
    Vec5 c = normalize_sphere(inversion(r, sl.circles[i]));
    EXPECT_LT((c - sl.circles[i + 1]).norm(), 1e-10 * c.norm());
    EXPECT_TRUE(projectively_equal(inversion(r, s.f.at(v)), s.f.at(v + 1), 1e-10));
    EXPECT_LT(rel(inner(r, m.vec), r, m.vec), 1e-10);
  }
}

TEST(Darboux, CircleTargetCase) {
  // a lightlike complex: its circles touch the circle m and the transform lands on it
  Vec5 m = encode_circle({0, 0}, 1);
  DiscreteCurve f;
  CircleCongruence c;
  for (int i = 0; i < 6; ++i) {
    double phi = 0.4 * i, rho = 0.3 + 0.1 * i;
    Eigen::Vector2d ctr = (1 + rho) * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    Vec5 x = encode_circle(ctr, rho);
    if (std::abs(inner(x, m)) > 1e-9) x = encode_circle(ctr, -rho);
    ASSERT_LT(std::abs(inner(x, m)), 1e-12);
    c.circles.push_back(x);
    f.points.push_back(encode_point(0.1 * i, 0.3));
  }
  auto ts = darboux_explicit(f, c, m);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].kind, DarbouxCase::CircleTarget);
  for (int i = 0; i < 6; ++i) {
    const Vec5& g = ts[0].curve.points[i];
    EXPECT_LT(rel(inner(g, m), g, m), 1e-12);
    EXPECT_LT(rel(inner(g, c.circles[i]), g, c.circles[i]), 1e-12);
    EXPECT_LT(std::abs(inner(g, g)) / g.squaredNorm(), 1e-11);
  }
}
TEST(Darboux, EllipticComplexRejected) {
  DiscreteCurve f;
  CircleCongruence c;
  Vec5 m = Vec5::Zero();
  m(0) = 1;
  EXPECT_THROW(darboux_explicit(f, c, m), Error);
}

TEST(Darboux, ThreeDimSubspace) {
  // the Lie-inversion vectors of the s^lambda family at a vertex span a 3-space
  auto s = seed(40);
  int i = 10;
  std::vector<Vec5> rows;
  for (double lambda : {-3.0, -0.45, -0.3, 0.4, 1.3, 5.0}) {
    auto sl = s_lambda(s.a, s.d, lambda);
    rows.push_back(sl.circles[i]);
  }
  Eigen::Matrix<double, 6, 5> A;
  for (int r = 0; r < 6; ++r) A.row(r) = rows[r].normalized().transpose();
  auto sv = Eigen::JacobiSVD<Eigen::Matrix<double, 6, 5>>(A).singularValues();
  EXPECT_GT(sv(2) / sv(0), 1e-4);
  EXPECT_LT(sv(3) / sv(0), 1e-12);
}

TEST(Darboux, ExtendZeroStripes) {
  auto f = sample_elastica(30).curve;
  ExtendOptions opt;
  opt.stripes = 0;
  auto H = extend_holomorphic(f, opt);
  ASSERT_EQ(H.stripes.size(), 1u);
  EXPECT_EQ(H.stripes[0].points, f.points);
}

TEST(Darboux, ExtendOneStep) {
  auto f = sample_elastica(40).curve;
  ExtendOptions opt;
  opt.stripes = 1;
  opt.lambdas = {-0.4};
  auto H = extend_holomorphic(f, opt);
  ASSERT_EQ(H.stripes.size(), 2u);
  const auto& m = H.steps[0];
  // the new stripe has constant arc length in its own space form, before cropping
  DiscreteCurve g = H.stripes[1];
  auto al = arc_length_check(g, m.space_form, 1e-8);
  EXPECT_TRUE(al.ok) << al.max_dev;
  EXPECT_LT(m.nu_residual, 1e-9);
  EXPECT_LT(m.elastic_residual, 1e-8);
  EXPECT_LT(m.cross_ratio_dev, 1e-9 * std::abs(m.cross_ratio));
  // the new space form and elastic complex lie in span(q, D, p)
  Eigen::Matrix<double, 5, 5> A;
  A.col(0) = Q0.normalized();
  A.col(1) = H.elastic.normalized();
  A.col(2) = P;
  A.col(3) = m.space_form.normalized();
  A.col(4) = m.elastic.normalized();
  auto sv = Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>>(A).singularValues();
  EXPECT_LT(sv(3) / sv(0), 1e-9);
}

TEST(Darboux, ExtendTwentyStripes) {
  auto f = sample_elastica(70).curve;
  ExtendOptions opt;
  opt.stripes = 20;
  opt.step_length = 0.05;
  auto H = extend_holomorphic(f, opt);
  ASSERT_EQ(H.stripes.size(), 21u);
  EXPECT_EQ(H.crop, 20);
  for (const auto& s : H.stripes) EXPECT_EQ(s.size(), 30);
  for (size_t k = 0; k < H.steps.size(); ++k) {
    const auto& m = H.steps[k];
    EXPECT_LT(m.cross_ratio_dev, 1e-9 * std::abs(m.cross_ratio)) << k;
    EXPECT_LT(m.elastic_residual, 1e-8) << k;
    // concircular quads between consecutive stripes
    for (int i = 0; i + 1 < H.stripes[k].size(); ++i)
      EXPECT_LT(concircularity(H.stripes[k].points[i], H.stripes[k].points[i + 1], H.stripes[k + 1].points[i + 1],
                               H.stripes[k + 1].points[i]),
                1e-10);
  }
}

TEST(Darboux, ExtendQuasiPeriodic) {
  auto f = sample_elastica(70).curve;
  auto mono = monodromy_detect(f, 12);
  ASSERT_LT(mono.residual, 1e-8);
  ExtendOptions opt;
  opt.stripes = 20;
  opt.step_length = 0.05;
  auto H = extend_holomorphic(f, opt);
  for (size_t k = 0; k < H.stripes.size(); ++k) {
    auto m = monodromy_detect(H.stripes[k], 12);
    EXPECT_LT(m.residual, 1e-8) << k;
    EXPECT_LT((m.map - mono.map).norm(), 1e-6 * mono.map.norm()) << k;
  }
}

TEST(Darboux, ExtendClosed) {
  auto e = figure_eight(16);
  ExtendOptions opt;
  opt.stripes = 5;
  opt.step_length = 0.02;
  auto H = extend_holomorphic(e.curve, opt);
  ASSERT_EQ(H.stripes.size(), 6u);
  for (const auto& s : H.stripes) {
    EXPECT_TRUE(s.closed);
    EXPECT_EQ(s.size(), 16);
  }
  for (const auto& m : H.steps) EXPECT_LT(m.cross_ratio_dev, 1e-9 * std::abs(m.cross_ratio));
}

TEST(Darboux, BadInputs) {
  auto f = sample_elastica(12).curve;
  ExtendOptions opt;
  opt.stripes = 10;
  opt.lambdas = {-0.4};
  EXPECT_THROW(extend_holomorphic(f, opt), Error);
  opt.stripes = -1;
  EXPECT_THROW(extend_holomorphic(f, opt), Error);
  opt.stripes = 1;
  opt.lambdas.clear();
  EXPECT_THROW(extend_holomorphic(f, opt), Error);
}
