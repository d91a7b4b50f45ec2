#include "isonet/verify.hpp"

#include <cmath>

#include "isonet/cross_ratio.hpp"

namespace isonet {

namespace {

const Vec6 kP = point_complex<double, 6>();

struct Builder {
  Check c;
  Builder(std::string name, double threshold) {
    c.name = std::move(name);
    c.threshold = threshold;
  }
  void add(int stripe, int vertex, double r) {
    if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
    c.max_residual = std::max(c.max_residual, r);
    if (!(r <= c.threshold)) {
      c.pass = false;
      c.failures.push_back({stripe, vertex, r});
    }
  }
};

}  // namespace

const Check* DiagnosticReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double plane_residual(const Vec6& s) {
  Vec6 q = embed(infinity<double, 5>());
  return std::abs(inner(s, q)) / (s.norm() * q.norm());
}

DiagnosticReport check_net(const CircularNet& net, const CheckOptions& opt) {
  DiagnosticReport rep;
  int S = net.stripes(), V = net.vertices();
  for (const auto& row : net.points)
    if (int(row.size()) != V) throw Error(Err::DimensionMismatch, "ragged net");
  if (int(net.spheres.size()) != S) throw Error(Err::DimensionMismatch, "one sphere per stripe");

  Builder light("lightcone", opt.lightcone), point("point_complex", opt.lightcone);
  Builder inc("sphere_incidence", opt.incidence);
  for (int k = 0; k < S; ++k)
    for (int i = 0; i < V; ++i) {
      const Vec6& x = net.points[k][i];
      light.add(k, i, std::abs(inner(x, x)) / x.squaredNorm());
      point.add(k, i, std::abs(inner(x, kP)) / x.norm());
      inc.add(k, i, std::abs(inner(x, net.spheres[k])) / (x.norm() * net.spheres[k].norm()));
    }
  rep.checks = {light.c, point.c, inc.c};

  Builder conc("concircular", opt.concircular);
  Builder cr("cross_ratio", opt.cross_ratio);
  int E = net.closed ? V : V - 1;
  for (int k = 0; k + 1 < S; ++k) {
    const auto &f = net.points[k], &g = net.points[k + 1];
    std::vector<double> vals;
    bool ok = true;
    for (int i = 0; i < E; ++i) {
      int j = (i + 1) % V;
      conc.add(k, i, concircularity(f[i], f[j], g[j], g[i]));
      if (net.isothermic) {
        try {
          vals.push_back(quad_cross_ratio(f[i], f[j], g[j], g[i]));
        } catch (const Error&) {
          ok = false;
        }
      }
    }
    if (!net.isothermic) continue;
    if (!ok || vals.empty()) {
      cr.add(k, -1, std::numeric_limits<double>::infinity());
      rep.cross_ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double mean = 0, var = 0;
    for (double x : vals) mean += x;
    mean /= double(vals.size());
    for (double x : vals) var += (x - mean) * (x - mean);
    rep.cross_ratios.push_back(mean);
    cr.add(k, -1, std::sqrt(var / double(vals.size())) / std::max(std::abs(mean), 1e-300));
  }
  rep.checks.push_back(conc.c);
  if (net.isothermic) rep.checks.push_back(cr.c);

  if (opt.distinct_spheres) {
    // reported value is the smallest separation; it must stay above the threshold
    Check d;
    d.name = "distinct_spheres";
    d.threshold = opt.distinct;
    d.max_residual = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < S; ++k) {
      Vec6 a = normalize_sphere(net.spheres[k]), b = normalize_sphere(net.spheres[k + 1]);
      double sep = (a - b).norm() / a.norm();
      d.max_residual = std::min(d.max_residual, sep);
      if (!(sep > opt.distinct)) d.failures.push_back({k, -1, sep});
    }
    d.pass = d.failures.empty();
    rep.checks.push_back(d);
  }
  if (opt.planar) {
    Builder pl("planar", opt.incidence);
    for (int k = 0; k < S; ++k) pl.add(k, -1, plane_residual(net.spheres[k]));
    rep.checks.push_back(pl.c);
  }
  if (opt.sphere_span) {
    Builder sp("sphere_span", opt.span);
    const auto& basis = *opt.sphere_span;
    Eigen::Matrix<double, 6, Eigen::Dynamic> B(6, basis.size());
    for (size_t i = 0; i < basis.size(); ++i) B.col(i) = basis[i].normalized();
    auto qr = B.colPivHouseholderQr();
    for (int k = 0; k < S; ++k) {
      Vec6 s = net.spheres[k].normalized();
      Eigen::VectorXd c = qr.solve(s);
      sp.add(k, -1, (B * c - s).norm());
    }
    rep.checks.push_back(sp.c);
  }
  if (opt.pencils) {
    if (int(opt.pencils->size()) != std::max(0, S - 1)) throw Error(Err::DimensionMismatch, "one pencil per gap");
    Builder pc("pencil", opt.pencil);
    for (int j = 0; j + 1 < S; ++j) {
      const Vec6& w = (*opt.pencils)[j];
      if (w.norm() == 0) continue;
      Eigen::Matrix<double, 6, 3> B;
      B << net.spheres[j].normalized(), w.normalized(), kP;
      Vec6 s = net.spheres[j + 1].normalized();
      Eigen::Vector3d c = B.colPivHouseholderQr().solve(s);
      pc.add(j, -1, (B * c - s).norm());
    }
    rep.checks.push_back(pc.c);
  }
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace isonet
