#include "isonet/darboux.hpp"

#include <cmath>
#include <sstream>

#include "isonet/cross_ratio.hpp"

namespace isonet {

namespace {

const Vec5 kP = point_complex<double, 5>();

double rel(double v, const Vec5& a, const Vec5& b) { return std::abs(v) / (a.norm() * b.norm()); }

}  // namespace

Vec5 tangential_circle(const Vec5& f0, const Vec5& c1, const Vec5& f1, double tol) {
  if (rel(inner(c1, f0), c1, f0) > tol) throw Error(Err::NotIncident, "point does not lie on the circle");
  if (projectively_equal(f0, f1, tol)) throw Error(Err::BadInput, "tangential circle needs two distinct points");
  return f0 * inner(c1, f1) - c1 * inner(f0, f1);
}

Construction2Step construction2_step(const Vec5& f0, const Vec5& f1, const Vec5& f2, const Vec5& c1a,
                                     const Vec5& c1b, const Vec5& m1, const Vec5& m2, double tol) {
  if (rel(inner(c1a, m1), c1a, m1) > 1e3 * tol || rel(inner(c1b, m2), c1b, m2) > 1e3 * tol)
    throw Error(Err::BadInput, "seed circles must lie in their complexes");
  if (projectively_equal(m1, m2, tol)) throw Error(Err::BadInput, "the two complexes coincide");
  for (const Vec5* c : {&c1a, &c1b})
    if (rel(inner(*c, f0), *c, f0) > 1e3 * tol || rel(inner(*c, f2), *c, f2) > 1e3 * tol)
      throw Error(Err::NotIncident, "seed circles must pass through the neighbouring points");
  auto next = [&](const Vec5& c, const Vec5& m) {
    Vec5 t = f2 * inner(c, f1) - c * inner(f2, f1);
    return Vec5(f1 * inner(t, m) - t * inner(f1, m));
  };
  Vec5 ca = next(c1a, m1), cb = next(c1b, m2);
  if (rel(inner(ca, cb), ca, cb) <= tol) throw Error(Err::SingularStep, "next circles are in oriented contact");
  std::array<Vec5, 2> x;
  try {
    x = circle_intersection(ca, cb, tol);
  } catch (const Error& e) {
    if (e.code() == Err::TangentPencil) throw Error(Err::SingularStep, "next circles are in oriented contact");
    throw;
  }
  Vec5 u = f1.normalized();
  auto dist = [&](const Vec5& v) {
    Vec5 w = v.normalized();
    return std::min((w - u).norm(), (w + u).norm());
  };
  Construction2Step s;
  s.point = dist(x[0]) > dist(x[1]) ? x[0] : x[1];
  s.circle_a = normalize_sphere(ca);
  s.circle_b = normalize_sphere(cb);
  return s;
}

DiscreteCurve construction2(const Vec5& f0, const Vec5& f1, const Vec5& f2, Vec5 c1a, Vec5 c1b, const Vec5& m1,
                            const Vec5& m2, int steps, double tol) {
  DiscreteCurve f;
  f.points = {f0, f1, f2};
  for (int i = 0; i < steps; ++i) {
    size_t n = f.points.size();
    auto s = construction2_step(f.points[n - 3], f.points[n - 2], f.points[n - 1], c1a, c1b, m1, m2, tol);
    f.points.push_back(s.point);
    c1a = s.circle_a;
    c1b = s.circle_b;
  }
  return f;
}

double s_lambda_dual(double lambda) {
  if (lambda == -1) throw Error(Err::PoleParameter, "lambda = -1");
  return -(1 + 2 * lambda) / (2 * (1 + lambda));
}

CircleCongruence s_lambda(const CircleCongruence& a, const CircleCongruence& d, double lambda) {
  if (a.circles.size() != d.circles.size() || a.offset != d.offset)
    throw Error(Err::DimensionMismatch, "congruences cover different vertices");
  double dual = s_lambda_dual(lambda);
  CircleCongruence s;
  s.offset = a.offset;
  for (size_t i = 0; i < a.circles.size(); ++i)
    s.circles.push_back(normalize_sphere(Vec5(lambda * normalize_sphere(a.circles[i]) +
                                              dual * normalize_sphere(d.circles[i]) + kP)));
  return s;
}

namespace {

std::pair<double, double> mean_dev(const std::vector<double>& v) {
  double m = 0, dev = 0;
  for (double x : v) m += x;
  m /= double(v.size());
  for (double x : v) dev = std::max(dev, std::abs(x - m));
  return {m, dev};
}

double angle_constant(const CircleCongruence& c1, const CircleCongruence& c2, double tol, double& dev) {
  if (c1.circles.size() != c2.circles.size() || c1.offset != c2.offset || c1.circles.empty())
    throw Error(Err::DimensionMismatch, "congruences cover different vertices");
  std::vector<double> xi;
  for (size_t i = 0; i < c1.circles.size(); ++i)
    xi.push_back(inner(normalize_sphere(c1.circles[i]), normalize_sphere(c2.circles[i])));
  auto [m, d] = mean_dev(xi);
  dev = d;
  if (d > tol * std::max(1.0, std::abs(m))) throw Error(Err::NotCompatible, "congruences do not meet at a constant angle");
  return m;
}

}  // namespace

Combination combine_congruences(const CircleCongruence& c1, const CircleCongruence& c2, double lambda,
                                const std::optional<Vec5>& m1, const std::optional<Vec5>& m2, double tol) {
  Combination out;
  out.xi = angle_constant(c1, c2, tol, out.xi_dev);
  double den = 2 * out.xi * lambda - 2;
  if (std::abs(den) <= 1e-14) throw Error(Err::PoleParameter, "lambda = 1/xi");
  double dual = (1 + 2 * lambda) / den;
  out.circles.offset = c1.offset;
  for (size_t i = 0; i < c1.circles.size(); ++i)
    out.circles.circles.push_back(normalize_sphere(
        Vec5(lambda * normalize_sphere(c1.circles[i]) + dual * normalize_sphere(c2.circles[i]) + kP)));
  if (m1 && m2 && out.circles.circles.size() > 1) {
    std::vector<double> eta;
    for (size_t i = 0; i + 1 < out.circles.circles.size(); ++i) {
      Vec5 r = out.circles.circles[i] - out.circles.circles[i + 1];
      eta.push_back(-inner(r, *m1) / inner(r, *m2));
    }
    std::tie(out.eta, out.eta_dev) = mean_dev(eta);
  }
  return out;
}

Combination orthogonal_combination(const CircleCongruence& c1, const CircleCongruence& c2, double tol) {
  double dev = 0;
  double xi = angle_constant(c1, c2, tol, dev);
  double disc = -xi * xi - 2 * xi;
  if (!(disc >= 0) || xi == 0) throw Error(Err::NotCompatible, "no real orthogonal combination");
  double lambda = (-xi + std::sqrt(disc)) / (2 * xi);
  return combine_congruences(c1, c2, lambda, {}, {}, tol);
}

KernelFit<double, 5> congruence_complex(const CircleCongruence& c) {
  auto k = kernel_vector<double, 5>(c.circles);
  if (inner(k.vec, kP) > 0) k.vec = -k.vec;
  return k;
}

const char* case_name(DarbouxCase c) {
  switch (c) {
    case DarbouxCase::TwoSolutions: return "TwoSolutions";
    case DarbouxCase::OneSolution: return "OneSolution";
    case DarbouxCase::CircleTarget: return "CircleTarget";
  }
  return "Unknown";
}

std::vector<DarbouxTransform> darboux_explicit(const DiscreteCurve& f, const CircleCongruence& c, const Vec5& m_bar,
                                               double tol) {
  Vec5 m = m_bar / m_bar.norm();
  double A = inner(m, m), M = inner(m, kP);
  for (const auto& ci : c.circles)
    if (rel(inner(ci, m), ci, m) > 1e-6) throw Error(Err::BadInput, "circles do not lie in the complex");
  auto build = [&](const Vec5& shift, DarbouxCase kind, double mu, const Vec5& b) {
    DarbouxTransform t;
    t.offset = c.offset;
    t.curve.closed = f.closed;
    for (const auto& ci : c.circles) t.curve.points.push_back(normalize_point(Vec5(normalize_sphere(ci) + shift)));
    t.m_bar = m;
    t.b = b;
    t.mu = mu;
    t.kind = kind;
    return t;
  };
  std::vector<DarbouxTransform> out;
  if (std::abs(A) <= tol && std::abs(M) > tol) {
    Vec5 b = m / M;
    out.push_back(build(b, DarbouxCase::CircleTarget, 1 / M, b));
  } else if (std::abs(M * M + A) <= tol && std::abs(M) > tol) {
    Vec5 b = m / (2 * M) - kP / 2;
    out.push_back(build(b, DarbouxCase::OneSolution, 1 / (2 * M), b));
  } else if (A < 0) {
    for (double sign : {1.0, -1.0}) {
      double mu = (M + sign * std::sqrt(-A)) / (M * M + A);
      Vec5 b = mu * m + (mu * M - 1) * kP;
      out.push_back(build(b, DarbouxCase::TwoSolutions, mu, b));
    }
  } else {
    throw Error(Err::NoRealTransform, "complex is elliptic: <m,m> = " + std::to_string(A));
  }
  return out;
}

namespace {

struct Stripe {
  DiscreteCurve curve;
  int first = 0;  // vertex of the seed matching curve.points[0]
  CircleCongruence a, d;
  Vec5 q;
};

int wrap(int i, int n) { return ((i % n) + n) % n; }

struct Trial {
  DarbouxTransform g;
  CircleCongruence s;
};

Trial transform(const Stripe& st, double lambda, int branch) {
  CircleCongruence s = s_lambda(st.a, st.d, lambda);
  auto k = congruence_complex(s);
  auto ts = darboux_explicit(st.curve, s, k.vec);
  const auto& t = (branch < 0 && ts.size() > 1) ? ts[1] : ts[0];
  if (t.kind == DarbouxCase::CircleTarget)
    throw Error(Err::NoRealTransform, "transform degenerates onto a circle");
  for (const auto& x : t.curve.points)
    if (!x.allFinite()) throw Error(Err::NoRealTransform, "transform is not finite");
  return {t, s};
}

double mean_step(const Stripe& st, const DarbouxTransform& g) {
  double sum = 0;
  int n = 0;
  for (size_t i = 0; i < g.curve.points.size(); ++i) {
    const Vec5 &x = st.curve.points[i + g.offset], &y = g.curve.points[i];
    double wx = x(2) + x(3), wy = y(2) + y(3);
    if (wx == 0 || wy == 0) return std::numeric_limits<double>::infinity();
    sum += (x.head<2>() / wx - y.head<2>() / wy).norm();
    ++n;
  }
  return sum / n;
}

std::string admissible_report(const Stripe& st, int branch) {
  std::ostringstream os;
  os << "admissible lambda intervals in [-10,10]:";
  bool in = false;
  double start = 0, prev = 0;
  for (int i = 0; i <= 400; ++i) {
    double l = -10 + 0.05 * i;
    bool ok = true;
    try {
      if (std::abs(l + 1) < 1e-12) throw Error(Err::PoleParameter, "");
      transform(st, l, branch);
    } catch (const Error&) {
      ok = false;
    }
    if (ok && !in) start = l;
    if (!ok && in) os << " [" << start << ", " << prev << "]";
    in = ok;
    prev = l;
  }
  if (in) os << " [" << start << ", " << prev << "]";
  return os.str();
}

double solve_step(const Stripe& st, double target, int branch) {
  auto dist = [&](double l) {
    try {
      return mean_step(st, transform(st, l, branch).g);
    } catch (const Error&) { return std::numeric_limits<double>::quiet_NaN();
    }
  };
  double lo = -0.5 + 1e-6, hi = -0.5 + 1e-4;
  double dlo = dist(lo);
  if (!(dlo < target)) throw Error(Err::StepFailed, "step length below the smallest admissible step");
  double dhi = dist(hi);
  int grow = 0;
  while (dhi < target && grow < 80) {
    lo = hi;
    hi = -0.5 + 1.5 * (hi + 0.5);
    dhi = dist(hi);
    ++grow;
  }
  if (!(dhi >= target)) throw Error(Err::StepFailed, "target step not reached; " + admissible_report(st, branch));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = (lo + hi) / 2, dm = dist(mid);
    if (!(dm == dm)) throw Error(Err::StepFailed, "lost real transform during bisection; " + admissible_report(st, branch));
    (dm < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

std::pair<Stripe, StepMeta> advance(const Stripe& st, double lambda, int branch) {
  Trial tr;
  try {
    tr = transform(st, lambda, branch);
  } catch (const Error& e) {
    throw Error(Err::StepFailed, std::string(e.what()) + "; " + admissible_report(st, branch));
  }
  const DarbouxTransform& g = tr.g;
  const auto& s = tr.s.circles;
  int ns = int(s.size());
  bool closed = st.curve.closed;

  // space form of the new stripe: q + nu p is orthogonal to all B_j
  std::vector<Vec5> B;
  for (int j = closed ? 0 : 1; j < (closed ? ns : ns - 1); ++j) {
    const Vec5 &sm = s[wrap(j - 1, ns)], &s0 = s[j], &sp = s[wrap(j + 1, ns)];
    B.push_back(sm * inner(sp, s0) - sp * inner(sm, s0));
  }
  double num = 0, den = 0;
  for (const auto& x : B) {
    num += inner(st.q, x) * inner(kP, x);
    den += inner(kP, x) * inner(kP, x);
  }
  double nu = -num / den;
  Vec5 qn = st.q + nu * kP;
  StepMeta meta;
  for (const auto& x : B) meta.nu_residual = std::max(meta.nu_residual, rel(inner(qn, x), qn, x));
  Vec5 n = inversion(g.b, qn);
  Vec5 qg = n + inner(n, kP) * kP;

  Stripe next;
  next.curve = g.curve;
  next.first = st.first + g.offset;
  next.q = qg;
  auto ag = arc_length_congruence(g.curve, qg, 1, 1e-7);
  CircleCongruence chat;
  chat.offset = ag.circles.offset;
  for (size_t i = 0; i < ag.circles.circles.size(); ++i) {
    int v = int(i) + ag.circles.offset + g.offset;  // vertex of st.curve
    chat.circles.push_back(normalize_sphere(inversion(g.b, st.curve.at(v))));
  }
  next.a = ag.circles;
  next.d = orthogonal_combination(next.a, chat, 1e-7).circles;

  meta.lambda = lambda;
  meta.kind = g.kind;
  meta.m_bar = g.m_bar;
  meta.b = g.b;
  meta.mu = g.mu;
  meta.space_form = qg;
  auto dk = kernel_vector<double, 5>(next.d.circles);
  meta.elastic = dk.vec;
  meta.elastic_residual = dk.ratio;

  std::vector<double> cr;
  int m = g.curve.size();
  for (int i = 0; i < (closed ? m : m - 1); ++i) {
    int v = i + g.offset;
    cr.push_back(quad_cross_ratio(st.curve.at(v), st.curve.at(v + 1), g.curve.at(i + 1), g.curve.at(i)));
  }
  double mean = 0, var = 0;
  for (double x : cr) mean += x;
  mean /= double(cr.size());
  for (double x : cr) var += (x - mean) * (x - mean);
  meta.cross_ratio = mean;
  meta.cross_ratio_dev = std::sqrt(var / double(cr.size()));
  return {next, meta};
}

}  // namespace

HolomorphicMap extend_holomorphic(const DiscreteCurve& f, const ExtendOptions& opt, const Vec5& q) {
  if (opt.stripes < 0) throw Error(Err::BadInput, "negative stripe count");
  if (opt.stripes > 0 && opt.lambdas.empty() && !opt.step_length)
    throw Error(Err::BadInput, "need lambdas or a step length");
  HolomorphicMap H;
  H.space_form = q;
  H.stripes.push_back(f);
  if (opt.stripes == 0) return H;

  if (!f.closed && f.size() < 2 * opt.stripes + 5)
    throw Error(Err::BadInput, "open curve too short for the requested number of stripes");
  Stripe st;
  st.curve = f;
  st.q = q;
  auto fit = elastic_congruence_fit(f, q, opt.flip);
  H.elastic = fit.complex;
  st.a = arc_length_congruence(f, q).circles;
  st.d = fit.circles;
  double dev = 0;
  double xi = angle_constant(st.a, st.d, 1e-7, dev);
  if (std::abs(xi + 1) > 1e-9) st.d = orthogonal_combination(st.a, st.d, 1e-7).circles;

  std::vector<Stripe> all{st};
  for (int k = 0; k < opt.stripes; ++k) {
    double lambda;
    if (opt.step_length) {
      lambda = solve_step(all.back(), *opt.step_length, opt.branch);
    } else {
      lambda = opt.lambdas[std::min<size_t>(k, opt.lambdas.size() - 1)];
    }
    auto [next, meta] = advance(all.back(), lambda, opt.branch);
    all.push_back(next);
    H.steps.push_back(meta);
    H.gap_complexes.push_back(meta.m_bar);
  }
  H.stripes.clear();
  if (f.closed) {
    for (const auto& s : all) H.stripes.push_back(s.curve);
  } else {
    int lo = all.back().first, len = all.back().curve.size();
    H.crop = lo;
    for (const auto& s : all) {
      DiscreteCurve c;
      c.points.assign(s.curve.points.begin() + (lo - s.first), s.curve.points.begin() + (lo - s.first) + len);
      H.stripes.push_back(c);
    }
  }
  return H;
}

}  // namespace isonet
