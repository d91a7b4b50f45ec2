#include "isonet/curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "isonet/elliptic.hpp"

namespace isonet {

namespace {

const Vec5 kP = point_complex<double, 5>();
const Vec5 kInf = infinity<double, 5>();

}  // namespace

EvolutionMap r_evolution(const DiscreteCurve& f, const DiscreteCurve& g, double tol) {
  if (f.size() != g.size() || f.closed != g.closed)
    throw Error(Err::DimensionMismatch, "curves differ in length or closedness");
  EvolutionMap out;
  out.closed = f.closed;
  for (int i = 0; i < f.edges(); ++i) {
    Eigen::Matrix<double, 5, 4> A;
    A << f.at(i).normalized(), f.at(i + 1).normalized(), g.at(i + 1).normalized(), g.at(i).normalized();
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 4>> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(3) > 1e3 * tol * sv(0)) throw Error(Err::NotRibaucour, "quad " + std::to_string(i) + " spans 4 dimensions");
    if (sv(2) <= 1e3 * tol * sv(0)) throw Error(Err::DegenerateQuad, "quad " + std::to_string(i) + " is degenerate");
    Eigen::Vector4d c = svd.matrixV().col(3);
    if (c.cwiseAbs().minCoeff() <= tol * c.norm())
      throw Error(Err::DegenerateQuad, "quad " + std::to_string(i) + " has a vanishing coefficient");
    Vec5 fi = c(0) * A.col(0), fj = -c(1) * A.col(1);
    out.complexes.push_back(fi - fj);
  }
  return out;
}

DiscreteCurve evolve(const EvolutionMap& sigma, const Vec5& g0) {
  DiscreteCurve g;
  g.closed = sigma.closed;
  g.points.push_back(g0);
  int steps = int(sigma.complexes.size()) - (sigma.closed ? 1 : 0);
  for (int i = 0; i < steps; ++i) g.points.push_back(normalize_point(inversion(sigma.complexes[i], g.points.back())));
  return g;
}

Eigen::Matrix<double, 5, 3> pencil_basis(const DiscreteCurve& f, int i, double tol) {
  if (!f.closed && (i < 1 || i > f.size() - 2)) throw Error(Err::BadInput, "pencil needs an interior vertex");
  const Vec5 &a = f.at(i - 1), &b = f.at(i + 1);
  if (projectively_equal(a, b, tol)) throw Error(Err::DegeneratePencil, "neighbouring points coincide");
  return orthogonal_complement<double, 5, 2>({a, b});
}

ArcLength arc_length_check(const DiscreteCurve& f, const Vec5& q, double tol) {
  std::vector<Vec5> fs;
  for (const auto& x : f.points) {
    double xq = inner(x, q);
    if (std::abs(xq) <= tol * x.norm()) throw Error(Err::BadInput, "point on the boundary of the space form");
    fs.push_back(x / -xq);
  }
  DiscreteCurve c{fs, f.closed, {}};
  std::vector<double> chi;
  for (int i = 0; i < f.edges(); ++i) chi.push_back(inner(c.at(i), c.at(i + 1)));
  ArcLength r;
  if (chi.empty()) return r;
  double sum = 0;
  for (double v : chi) sum += v;
  r.chi = sum / double(chi.size());
  for (int i = 0; i < int(chi.size()); ++i) {
    double d = std::abs(chi[i] - r.chi);
    if (d > r.max_dev) {
      r.max_dev = d;
      r.worst_edge = i;
    }
  }
  r.ok = r.max_dev <= tol * std::max(std::abs(r.chi), 1e-300);
  return r;
}

ArcLengthCongruence arc_length_congruence(const DiscreteCurve& f, const Vec5& q, int sign, double tol) {
  ArcLength al = arc_length_check(f, q, tol);
  if (!al.ok)
    throw Error(Err::NotArcLength, "edge " + std::to_string(al.worst_edge) + " deviates by " + std::to_string(al.max_dev));
  double chi = al.chi;
  double rad = -chi / (2 - inner(q, q) * chi);
  if (!(rad > 0)) throw Error(Err::ImaginaryCongruence, "arc-length congruence is imaginary");
  ArcLengthCongruence out;
  out.chi = chi;
  out.alpha = (sign >= 0 ? 1 : -1) * std::sqrt(rad);
  out.circles.offset = f.closed ? 0 : 1;
  int lo = f.closed ? 0 : 1, hi = f.closed ? f.size() : f.size() - 1;
  for (int i = lo; i < hi; ++i) {
    Vec5 fs = f.points[i] / -inner(f.points[i], q);
    out.circles.circles.push_back(normalize_sphere(Vec5((out.alpha / chi) * fs + out.alpha * q + kP)));
  }
  return out;
}

ElasticaForm resolve_form(double k, ElasticaForm form) {
  if (!(k > 0) || k == 1) throw Error(Err::ModulusOutOfRange, "modulus must be positive and != 1");
  if (form != ElasticaForm::Auto) return form;
  return k < 1 ? ElasticaForm::Cn : ElasticaForm::Dn;
}

double elastica_period_z(double k, double r, ElasticaForm form) {
  form = resolve_form(k, form);
  if (r == 0) throw Error(Err::BadInput, "period must be nonzero");
  if (form == ElasticaForm::Cn) return k < 1 ? 4 * k * ellint_K(k) / r : 4 * ellint_K(1 / k) / r;
  return k < 1 ? 4 * ellint_K(k) / r : 4 * ellint_K(1 / k) / (k * r);
}

namespace {

struct FrameFn {
  double k, z, phase;
  ElasticaForm form;
  // unit complex number (f(n), g(n))
  std::complex<double> operator()(int n) const {
    if (form == ElasticaForm::Cn) {
      auto t = sncndn_any((z * n + phase) / k, k);
      return {t.cn, t.sn};
    }
    auto t = sncndn_any(z * n + phase, k);
    return {t.dn, k * t.sn};
  }
  double curvature(int n, double h) const {
    if (form == ElasticaForm::Cn) {
      auto a = sncndn_any(z / k, k);
      return 2 / h * a.sn / a.cn * sncndn_any((z * n + phase) / k, k).dn;
    }
    auto a = sncndn_any(z, k);
    return 2 * k / h * a.sn / a.dn * sncndn_any(z * n + phase, k).cn;
  }
};

}  // namespace

Elastica elastic_curve_euclidean(ElasticaParams prm) {
  prm.form = resolve_form(prm.k, prm.form);
  if (!(prm.h > 0)) throw Error(Err::BadInput, "edge length must be positive");
  if (prm.n < 3) throw Error(Err::BadInput, "need at least 3 points");
  FrameFn fr{prm.k, prm.z, prm.phase, prm.form};
  Elastica e;
  e.params = prm;
  std::complex<double> gamma = 0;
  std::complex<double> cur = fr(0);
  e.curve.points.push_back(encode_point(0.0, 0.0));
  for (int n = 0; n + 1 < prm.n; ++n) {
    std::complex<double> next = fr(n + 1);
    gamma += prm.h * cur * next;
    e.curve.points.push_back(encode_point(gamma.real(), gamma.imag()));
    cur = next;
  }
  for (int n = 1; n + 1 < prm.n; ++n) e.curvature.push_back(fr.curvature(n, prm.h));
  return e;
}

namespace {

std::complex<double> eight_displacement(double k, int r, double h) {
  FrameFn fr{k, 4 * ellint_K(k) / r, 0, ElasticaForm::Dn};
  std::complex<double> d = 0, cur = fr(0);
  for (int n = 0; n < r; ++n) {
    std::complex<double> next = fr(n + 1);
    d += h * cur * next;
    cur = next;
  }
  return d;
}

}  // namespace

double figure_eight_modulus(int r) {
  if (r < 4) throw Error(Err::BadInput, "figure eight needs at least 4 points");
  double lo = 0.9, hi = 0.99;
  double flo = eight_displacement(lo, r, 1).real();
  if (flo * eight_displacement(hi, r, 1).real() > 0)
    throw Error(Err::NoSolutionInRange, "no figure-eight modulus in (0.9, 0.99)");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = (lo + hi) / 2, fm = eight_displacement(mid, r, 1).real();
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

Elastica figure_eight(int r, double h) {
  double k = figure_eight_modulus(r);
  ElasticaParams prm{k, 4 * ellint_K(k) / r, 0, h, r + 1, ElasticaForm::Dn};
  Elastica e = elastic_curve_euclidean(prm);
  e.closure = std::abs(eight_displacement(k, r, h));
  e.curve.points.pop_back();
  e.curve.closed = true;
  FrameFn fr{k, prm.z, 0, ElasticaForm::Dn};
  e.curvature.clear();
  for (int n = 0; n < r; ++n) e.curvature.push_back(fr.curvature(n, h));
  return e;
}

std::array<Vec5, 2> null_pair(const Eigen::Matrix<double, 5, 2>& W, double tol) {
  Eigen::Matrix2d G = W.transpose() * metric<double, 5>() * W;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
  double m0 = es.eigenvalues()(0), m1 = es.eigenvalues()(1);
  if (!(m0 < -tol * std::abs(m1)) || !(m1 > tol * std::abs(m0)))
    throw Error(Err::DegeneratePencil, "plane has no pair of null directions");
  Vec5 u0 = W * es.eigenvectors().col(0), u1 = W * es.eigenvectors().col(1);
  double t = std::sqrt(-m0 / m1);
  return {normalize_sphere(Vec5(u0 + t * u1)), normalize_sphere(Vec5(u0 - t * u1))};
}

ElasticFit elastic_congruence_fit(const DiscreteCurve& f, const Vec5& q, bool flip, double threshold) {
  int n = f.size();
  if (n < 4) throw Error(Err::BadInput, "curve too short for an elastic fit");
  // closed curves: run over the padded sequence f_{n-1}, f_0, ..., f_{n-1}, f_0
  std::vector<Vec5> x;
  if (f.closed) {
    x.push_back(f.at(-1));
    x.insert(x.end(), f.points.begin(), f.points.end());
    x.push_back(f.at(n));
  } else {
    x = f.points;
  }
  auto lines = [&](int i) {
    return null_pair(orthogonal_complement<double, 5, 3>({q, x[i], x[i + 1]}));
  };
  auto first = lines(0);
  Vec5 f2 = x[2] / inner(x[2], kInf);
  Vec5 t = inner(first[0], f2) > 0 ? first[0] : first[1];
  if (flip) t = t + 2 * inner(t, kP) * kP;

  ElasticFit fit;
  fit.circles.offset = f.closed ? 0 : 1;
  fit.tangents.push_back(t);
  int m = int(x.size());
  for (int j = 1; j + 1 < m; ++j) {
    Vec5 d = normalize_sphere(Vec5(t * inner(x[j - 1], x[j + 1]) - x[j - 1] * inner(t, x[j + 1])));
    fit.circles.circles.push_back(d);
    auto cand = lines(j);
    double best = 1e300;
    for (const auto& c : cand) {
      Vec5 dd = normalize_sphere(Vec5(c * inner(x[j + 1], x[j - 1]) - x[j + 1] * inner(c, x[j - 1])));
      double e = (dd - d).norm();
      if (e < best) {
        best = e;
        t = c;
      }
    }
    fit.tangents.push_back(t);
  }
  if (f.closed) {
    // the padded first edge (n-1, 0) reappears last
    fit.tangents.erase(fit.tangents.begin());
  }
  auto k = kernel_vector<double, 5>(fit.circles.circles);
  fit.complex = k.vec;
  fit.residual = k.ratio;
  if (!(fit.residual < threshold))
    throw Error(Err::NotConstrainedElastic, "elastic circles span R^{3,2}, residual " + std::to_string(fit.residual));
  return fit;
}

Monodromy monodromy_detect(const DiscreteCurve& f, int period, double tol) {
  int n = f.size();
  if (period <= 0) throw Error(Err::BadInput, "period must be positive");
  std::vector<std::pair<Eigen::Vector4d, Eigen::Vector4d>> pairs;
  if (f.closed) {
    for (int i = 0; i < n; ++i) pairs.emplace_back(f.at(i).head<4>(), f.at(i + period).head<4>());
  } else {
    if (n < 2 * period + 3) throw Error(Err::BadInput, "curve shorter than 2T+3");
    for (int i = 0; i + period < n; ++i) pairs.emplace_back(f.points[i].head<4>(), f.points[i + period].head<4>());
  }
  // y ^ (L x) = 0, six equations per pair, 16 unknowns (row-major L)
  Eigen::MatrixXd A(6 * pairs.size(), 16);
  A.setZero();
  int row = 0;
  for (auto [x, y] : pairs) {
    x.normalize();
    y.normalize();
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        for (int c = 0; c < 4; ++c) {
          A(row, 4 * b + c) += y(a) * x(c);
          A(row, 4 * a + c) -= y(b) * x(c);
        }
        ++row;
      }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  Eigen::VectorXd l = svd.matrixV().col(15);
  Eigen::Matrix4d L;
  for (int a = 0; a < 4; ++a) L.row(a) = l.segment<4>(4 * a).transpose();
  Eigen::Matrix4d J = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
  Eigen::Matrix4d G = L.transpose() * J * L;
  double c = (J * G).trace() / 4;
  if (!(c > 0)) throw Error(Err::NotQuasiPeriodic, "fitted map is not a Moebius transformation");
  L /= std::sqrt(c);
  double orient = 0;
  for (const auto& [x, y] : pairs) orient += (L * x).dot(y);
  if (orient < 0) L = -L;

  Monodromy m;
  m.period = period;
  m.map.topLeftCorner<4, 4>() = L;
  m.isometry_residual = (L.transpose() * J * L - J).norm() / 2;
  for (const auto& [x, y] : pairs) {
    Eigen::Vector4d a = (L * x).normalized(), b = y.normalized();
    m.residual = std::max(m.residual, std::min((a - b).norm(), (a + b).norm()));
  }
  m.fixes_infinity = projectively_equal(Vec5(m.map * kInf), kInf, 1e-6);
  if (!(m.residual < tol) || !(m.isometry_residual < std::sqrt(tol)))
    throw Error(Err::NotQuasiPeriodic, "monodromy residual " + std::to_string(m.residual));
  return m;
}

PlanarNet joachimsthal_seed(const std::vector<Vec5>& circles, const std::vector<Vec5>& samples, double tol) {
  if (circles.size() < 2 || samples.size() < 2) throw Error(Err::BadInput, "need two circles and two samples");
  for (const auto& s : samples)
    if (std::abs(inner(s, circles[0])) > 1e-8 * s.norm() * circles[0].norm())
      throw Error(Err::NotIncident, "sample not on the first circle");
  std::vector<Vec5> rows(circles.begin(), circles.end());
  rows.push_back(kP);
  rows.push_back(kInf);
  auto k = kernel_vector<double, 5>(rows);
  if (!(k.ratio < tol)) throw Error(Err::NotConcentricPencil, "circle centers are not collinear");
  // line through the centers, as an oriented line complex
  Vec5 axis = k.vec;
  axis = axis / std::sqrt(inner(axis, axis)) + kP;

  EvolutionMap sigma;
  std::vector<Vec5> cs;
  for (const auto& c : circles) cs.push_back(normalize_sphere(c));
  for (size_t i = 0; i + 1 < cs.size(); ++i)
    sigma.complexes.push_back(cs[i] * inner(cs[i + 1], kP) - cs[i + 1] * inner(cs[i], kP));
  sigma.fixed.push_back(axis);

  PlanarNet net;
  net.isothermic = false;
  for (const auto& s : samples) net.stripes.push_back(evolve(sigma, normalize_point(s)));
  net.gap_complexes.assign(samples.size() - 1, axis);
  return net;
}

}  // namespace isonet
