#include "isonet/folding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace isonet {

namespace {

const Vec6 kP = point_complex<double, 6>();

using Mat6 = Eigen::Matrix<double, 6, 6>;

Vec6 unit_gap_complex(const Vec6& w) {
  Vec6 u = w + inner(w, kP) * kP;
  double uu = inner(u, u);
  if (std::abs(uu) <= 1e-12 * u.squaredNorm()) throw Error(Err::DegenerateFold, "gap complex has no M-inversion part");
  return u / std::sqrt(std::abs(uu));
}

void apply(CircularNet& net, int from, const Mat6& M) {
  int gaps = net.stripes() - 1;
  for (int k = from; k < net.stripes(); ++k) {
    for (auto& x : net.points[k]) x = normalize_point(Vec6(M * x));
    net.spheres[k] = normalize_sphere(Vec6(M * net.spheres[k]));
    if (k < gaps && k < int(net.gap_complexes.size())) net.gap_complexes[k] = M * net.gap_complexes[k];
  }
}

}  // namespace

CircularNet lift_net(const PlanarNet& net) {
  CircularNet out;
  out.isothermic = net.isothermic;
  out.closed = !net.stripes.empty() && net.stripes[0].closed;
  for (const auto& s : net.stripes) {
    std::vector<Vec6> row;
    for (const auto& x : s.points) row.push_back(embed(x));
    out.points.push_back(std::move(row));
    out.spheres.push_back(plane_sphere<double>());
  }
  for (const auto& m : net.gap_complexes) out.gap_complexes.push_back(embed(m));
  return out;
}

const char* mode_name(FoldMode m) {
  switch (m) {
    case FoldMode::Auto: return "auto";
    case FoldMode::Spheres: return "spheres";
    case FoldMode::Complexes: return "complexes";
    case FoldMode::Explicit: return "explicit";
  }
  return "unknown";
}

Folded fold(const CircularNet& net, const FoldPlan& plan) {
  int gaps = net.stripes() - 1;
  if (gaps < 0) throw Error(Err::DegenerateNet, "empty net");
  if (plan.mode == FoldMode::Explicit ? int(plan.complexes.size()) != gaps : int(plan.lambdas.size()) != gaps)
    throw Error(Err::DimensionMismatch, "plan needs one entry per gap");
  Folded out;
  out.net = net;
  for (auto& s : out.net.spheres) s = normalize_sphere(s);
  for (int j = 0; j < gaps; ++j) {
    const Vec6 sb = out.net.spheres[j], sk = out.net.spheres[j + 1];
    FoldMode mode = plan.mode;
    if (mode == FoldMode::Auto) {
      // coincident up to orientation
      bool same = std::min((sb - sk).norm(), (sb + sk - 2 * kP).norm()) <= 1e-9 * sb.norm();
      mode = same ? FoldMode::Complexes : FoldMode::Spheres;
    }
    Vec6 n, partner = sk;
    if (mode == FoldMode::Explicit) {
      n = plan.complexes[j];
      partner = Vec6::Zero();  // no pencil to report
    } else if (mode == FoldMode::Spheres) {
      double l = plan.lambdas[j];
      n = sb + l * sk - (1 + l) * kP;
    } else {
      if (j >= int(out.net.gap_complexes.size())) throw Error(Err::DimensionMismatch, "net has no gap complexes");
      partner = unit_gap_complex(out.net.gap_complexes[j]);
      n = sb - kP + (1 + plan.lambdas[j]) * partner;
    }
    out.modes.push_back(mode);
    if (n.norm() <= 1e-12 * sb.norm()) {
      out.complexes.push_back(Vec6::Zero());
      out.pencils.push_back(Vec6::Zero());
      continue;
    }
    out.pencils.push_back(partner);
    if (std::abs(inner(n, n)) <= 1e-12 * n.squaredNorm())
      throw Error(Err::DegenerateFold, "folding complex is lightlike at gap " + std::to_string(j));
    out.complexes.push_back(n);
    apply(out.net, j + 1, inversion_matrix(n));
  }
  return out;
}

FoldPlan inverse_plan(const std::vector<Vec6>& complexes) {
  FoldPlan plan;
  plan.mode = FoldMode::Explicit;
  for (size_t j = 0; j < complexes.size(); ++j) {
    Vec6 n = complexes[j];
    for (size_t i = j; i-- > 0;)
      if (complexes[i].norm() > 0) n = inversion(complexes[i], n);
    plan.complexes.push_back(n);
  }
  return plan;
}

CircularNet flatten(const CircularNet& net) {
  FoldPlan plan;
  plan.mode = FoldMode::Spheres;
  plan.lambdas.assign(std::max(0, net.stripes() - 1), -1.0);
  return fold(net, plan).net;
}

double remark_parameter(const CircularNet& net, int gap, double lambda) {
  if (gap < 0 || gap >= int(net.gap_complexes.size()) || gap + 1 >= net.stripes())
    throw Error(Err::DimensionMismatch, "gap out of range");
  Vec6 u = normalize_sphere(net.spheres[gap]) - kP, v = normalize_sphere(net.spheres[gap + 1]) - kP;
  Vec6 w = unit_gap_complex(net.gap_complexes[gap]);
  Eigen::Matrix<double, 6, 2> A;
  A << u, w;
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(v);
  if ((A * c - v).norm() > 1e-8 * std::max(1.0, v.norm()))
    throw Error(Err::NotCompatible, "sphere pencil does not contain the gap complex");
  double den = 1 + lambda * c(0);
  if (std::abs(den) <= 1e-14) throw Error(Err::PoleParameter, "no finite complexes-mode parameter");
  return lambda * c(1) / den - 1;
}

CircularNet reflect_extend(const CircularNet& piece) {
  int n = piece.stripes();
  if (n < 2) throw Error(Err::DegenerateNet, "piece needs at least two stripes");
  Mat6 M = inversion_matrix(Vec6(normalize_sphere(piece.spheres.back()) - kP));
  CircularNet out = piece;
  for (int k = n - 2; k >= 0; --k) {
    std::vector<Vec6> row;
    for (const auto& x : piece.points[k]) row.push_back(normalize_point(Vec6(M * x)));
    out.points.push_back(std::move(row));
    out.spheres.push_back(normalize_sphere(Vec6(M * piece.spheres[k])));
    if (k < int(piece.gap_complexes.size())) out.gap_complexes.push_back(M * piece.gap_complexes[k]);
  }
  return out;
}

BoundaryAngle boundary_angle(const CircularNet& piece, double tol) {
  if (piece.stripes() < 2) throw Error(Err::DegenerateNet, "piece needs at least two stripes");
  Vec6 s1 = normalize_sphere(piece.spheres.front()), sn = normalize_sphere(piece.spheres.back());
  BoundaryAngle b;
  b.cos_psi = oriented_angle(s1, sn);
  if (std::abs(b.cos_psi) > 1 + tol) throw Error(Err::HyperbolicPencil, "boundary spheres do not intersect");
  b.raw = oriented_angle(s1, inversion(Vec6(sn - kP), s1));
  b.cos_phi = -b.raw;
  return b;
}

ClosurePlan solve_closure(const CircularNet& base, const FoldPlan& plan, int p, int q, const ClosureOptions& opt) {
  if (q < 1 || p < 0) throw Error(Err::BadInput, "closure needs q >= 1");
  if (opt.samples < 2 || !(opt.hi > opt.lo)) throw Error(Err::BadInput, "bad scan interval");
  double t = std::cos(std::numbers::pi * p / q);
  std::vector<double> targets{t};
  if (std::abs(t) > 1e-15) targets.push_back(-t);

  for (int gap : opt.free_gaps) {
    if (gap < 0 || gap >= int(plan.lambdas.size())) throw Error(Err::DimensionMismatch, "free gap out of range");
    auto cos_psi = [&](double x) {
      FoldPlan trial = plan;
      trial.lambdas[gap] = x;
      try {
        return boundary_angle(fold(base, trial).net).cos_psi;
      } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    auto result = [&](double x, double target) {
      ClosurePlan c;
      c.plan = plan;
      c.plan.lambdas[gap] = x;
      c.gap = gap;
      c.lambda = x;
      c.cos_psi = cos_psi(x);
      c.target = target;
      c.residual = std::abs(c.cos_psi - target);
      return c;
    };
    double now = cos_psi(plan.lambdas[gap]);
    for (double target : targets)
      if (std::abs(now - target) <= opt.tol) return result(plan.lambdas[gap], target);

    std::vector<double> xs(opt.samples + 1), vs(opt.samples + 1);
    for (int i = 0; i <= opt.samples; ++i) {
      xs[i] = opt.lo + (opt.hi - opt.lo) * i / opt.samples;
      vs[i] = cos_psi(xs[i]);
    }
    std::optional<ClosurePlan> best;
    for (double target : targets) {
      for (int i = 0; i < opt.samples; ++i) {
        double fa = vs[i] - target, fb = vs[i + 1] - target;
        if (!(std::isfinite(fa) && std::isfinite(fb)) || fa * fb > 0) continue;
        double a = xs[i], b = xs[i + 1];
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
          double m = (a + b) / 2, fm = cos_psi(m) - target;
          if (!std::isfinite(fm)) break;
          if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        double x = (a + b) / 2;
        // Newton polish with a central difference
        for (int it = 0; it < 3; ++it) {
          double h = 1e-7 * std::max(1.0, std::abs(x));
          double d = (cos_psi(x + h) - cos_psi(x - h)) / (2 * h);
          double fx = cos_psi(x) - target;
          if (!std::isfinite(d) || d == 0) break;
          double nx = x - fx / d;
          if (!(std::abs(cos_psi(nx) - target) < std::abs(fx))) break;
          x = nx;
        }
        auto c = result(x, target);
        if (!(c.residual <= opt.tol)) continue;
        if (!best || std::abs(x - plan.lambdas[gap]) < std::abs(best->lambda - plan.lambdas[gap])) best = c;
      }
    }
    if (best) return *best;
  }
  std::ostringstream os;
  os << "no folding parameter in [" << opt.lo << ", " << opt.hi << "] reaches the angle pi*" << p << "/" << q;
  throw Error(Err::NoSolutionInRange, os.str());
}

Torus close_torus(const CircularNet& piece, int q, double tol) {
  if (q < 1) throw Error(Err::BadInput, "need at least one piece");
  CircularNet ext = reflect_extend(piece);
  Vec6 s1 = normalize_sphere(piece.spheres.front()), sn = normalize_sphere(piece.spheres.back());
  Mat6 R = inversion_matrix(Vec6(sn - kP)) * inversion_matrix(Vec6(s1 - kP));
  Torus T;
  T.pieces = q;
  T.net.closed = piece.closed;
  T.net.isothermic = piece.isothermic;
  Mat6 G = Mat6::Identity();
  int m = ext.stripes();
  for (int c = 0; c < q; ++c) {
    T.seams.push_back(T.net.stripes());
    for (int k = 0; k < m - 1; ++k) {
      std::vector<Vec6> row;
      for (const auto& x : ext.points[k]) row.push_back(normalize_point(Vec6(G * x)));
      T.net.points.push_back(std::move(row));
      T.net.spheres.push_back(normalize_sphere(Vec6(G * ext.spheres[k])));
      if (k < int(ext.gap_complexes.size())) T.net.gap_complexes.push_back(G * ext.gap_complexes[k]);
    }
    G = R * G;
  }
  double res = 0;
  for (const auto& x : piece.points[0]) {
    Vec6 a = x.normalized(), b = (G * x).normalized();
    res = std::max(res, std::min((a - b).norm(), (a + b).norm()));
  }
  T.residual = res;
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "torus does not close after " << q << " pieces: vertex residual " << res;
    throw Error(Err::NotClosed, os.str());
  }
  return T;
}

}  // namespace isonet
