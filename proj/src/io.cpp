#include "isonet/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace isonet {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Err::BadInput, what); }

template <class V>
json vec_json(const V& v) {
  json a = json::array();
  for (int i = 0; i < int(v.size()); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_of(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || int(j.size()) != dim) bad(where + ": expected " + std::to_string(dim) + " coordinates");
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number()) bad(where + ": coordinate is not a number");
    v(i) = j[i].get<double>();
    if (!std::isfinite(v(i))) bad(where + ": coordinate is not finite");
  }
  return v;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_of(const json& j, const std::string& where) {
  return vec_of(j, N, where);
}

json mat_json(const Mat5& m) {
  json a = json::array();
  for (int r = 0; r < 5; ++r) a.push_back(vec_json(Eigen::Matrix<double, 5, 1>(m.row(r).transpose())));
  return a;
}

template <int N>
std::vector<Eigen::Matrix<double, N, 1>> complexes_of(const json& meta) {
  std::vector<Eigen::Matrix<double, N, 1>> out;
  if (!meta.contains("m_complexes")) return out;
  const json& a = meta["m_complexes"];
  if (!a.is_array()) bad("meta.m_complexes must be an array");
  for (size_t i = 0; i < a.size(); ++i) out.push_back(fixed_of<N>(a[i], "meta.m_complexes[" + std::to_string(i) + "]"));
  return out;
}

json monodromy_json(const Monodromy& m) {
  return {{"period", m.period},
          {"map", mat_json(m.map)},
          {"residual", m.residual},
          {"isometry_residual", m.isometry_residual},
          {"fixes_infinity", m.fixes_infinity}};
}

json step_json(const StepMeta& s) {
  return {{"lambda", s.lambda},
          {"case", case_name(s.kind)},
          {"m_bar", vec_json(s.m_bar)},
          {"b", vec_json(s.b)},
          {"mu", s.mu},
          {"space_form", vec_json(s.space_form)},
          {"elastic", vec_json(s.elastic)},
          {"elastic_residual", s.elastic_residual},
          {"cross_ratio", s.cross_ratio},
          {"cross_ratio_dev", s.cross_ratio_dev},
          {"nu_residual", s.nu_residual}};
}

}  // namespace

json to_json(const NetFile& f) {
  json j;
  j["version"] = 1;
  j["model"] = f.model;
  json st = json::array();
  for (const auto& row : f.stripes) {
    json r = json::array();
    for (const auto& x : row) r.push_back(vec_json(x));
    st.push_back(std::move(r));
  }
  j["stripes"] = std::move(st);
  json sp = json::array();
  for (const auto& s : f.spheres) sp.push_back(vec_json(s));
  j["spheres"] = std::move(sp);
  j["stripe_axis"] = f.stripe_axis;
  j["closed"] = f.closed;
  j["isothermic"] = f.isothermic;
  j["meta"] = f.meta;
  return j;
}

NetFile net_from_json(const json& j) {
  if (!j.is_object()) bad("document must be an object");
  if (!j.contains("version") || j["version"] != 1) bad("unsupported or missing version");
  NetFile f;
  if (!j.contains("model") || !j["model"].is_string()) bad("missing model");
  f.model = j["model"].get<std::string>();
  if (f.model != "R32" && f.model != "R42") bad("model must be R32 or R42");
  int d = f.dim();
  if (!j.contains("stripes") || !j["stripes"].is_array()) bad("missing stripes");
  const json& st = j["stripes"];
  for (size_t k = 0; k < st.size(); ++k) {
    if (!st[k].is_array()) bad("stripe " + std::to_string(k) + " is not an array");
    std::vector<Eigen::VectorXd> row;
    for (size_t i = 0; i < st[k].size(); ++i)
      row.push_back(vec_of(st[k][i], d, "stripes[" + std::to_string(k) + "][" + std::to_string(i) + "]"));
    if (k > 0 && row.size() != f.stripes[0].size()) bad("stripes have different lengths");
    f.stripes.push_back(std::move(row));
  }
  if (j.contains("spheres")) {
    if (!j["spheres"].is_array()) bad("spheres must be an array");
    for (size_t k = 0; k < j["spheres"].size(); ++k)
      f.spheres.push_back(vec_of(j["spheres"][k], d, "spheres[" + std::to_string(k) + "]"));
  }
  if (f.model == "R42" && f.spheres.size() != f.stripes.size()) bad("R42 needs one sphere per stripe");
  if (j.contains("stripe_axis")) {
    if (!j["stripe_axis"].is_number_integer()) bad("stripe_axis must be an integer");
    f.stripe_axis = j["stripe_axis"].get<int>();
    if (f.stripe_axis != 0 && f.stripe_axis != 1) bad("stripe_axis must be 0 or 1");
  }
  if (j.contains("closed")) {
    if (!j["closed"].is_boolean()) bad("closed must be a boolean");
    f.closed = j["closed"].get<bool>();
  }
  if (j.contains("isothermic")) {
    if (!j["isothermic"].is_boolean()) bad("isothermic must be a boolean");
    f.isothermic = j["isothermic"].get<bool>();
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) bad("meta must be an object");
    f.meta = j["meta"];
  }
  return f;
}

NetFile parse_net(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("not valid JSON");
  return net_from_json(j);
}

std::string dump_net(const NetFile& f) { return to_json(f).dump(); }

NetFile load_net(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_net(text);
}

void save_net(const NetFile& f, const std::string& path) {
  if (path == "-") {
    std::cout << dump_net(f) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << dump_net(f) << '\n';
}

NetFile curve_file(const DiscreteCurve& c, const json& seed_params) {
  NetFile f;
  f.model = "R32";
  std::vector<Eigen::VectorXd> row(c.points.begin(), c.points.end());
  f.stripes.push_back(std::move(row));
  f.closed = c.closed;
  f.meta["seed_params"] = seed_params;
  if (c.monodromy) f.meta["monodromy"] = monodromy_json(*c.monodromy);
  return f;
}

NetFile planar_file(const PlanarNet& net) {
  NetFile f;
  f.model = "R32";
  for (const auto& s : net.stripes) f.stripes.emplace_back(s.points.begin(), s.points.end());
  f.closed = !net.stripes.empty() && net.stripes[0].closed;
  f.isothermic = net.isothermic;
  json m = json::array();
  for (const auto& c : net.gap_complexes) m.push_back(vec_json(c));
  f.meta["m_complexes"] = std::move(m);
  return f;
}

NetFile holomorphic_file(const HolomorphicMap& H) {
  NetFile f = planar_file(H);
  json steps = json::array(), cr = json::array();
  for (const auto& s : H.steps) {
    steps.push_back(step_json(s));
    cr.push_back(s.cross_ratio);
  }
  f.meta["steps"] = std::move(steps);
  f.meta["cross_ratios"] = std::move(cr);
  f.meta["space_form"] = vec_json(H.space_form);
  f.meta["elastic"] = vec_json(H.elastic);
  f.meta["crop"] = H.crop;
  return f;
}

NetFile circular_file(const CircularNet& net) {
  NetFile f;
  f.model = "R42";
  for (const auto& row : net.points) f.stripes.emplace_back(row.begin(), row.end());
  for (const auto& s : net.spheres) f.spheres.push_back(s);
  f.closed = net.closed;
  f.isothermic = net.isothermic;
  json m = json::array();
  for (const auto& c : net.gap_complexes) m.push_back(vec_json(c));
  f.meta["m_complexes"] = std::move(m);
  return f;
}

DiscreteCurve curve_of(const NetFile& f, int stripe) {
  if (f.model != "R32") bad("expected a planar (R32) document");
  if (stripe < 0 || stripe >= int(f.stripes.size())) bad("stripe out of range");
  DiscreteCurve c;
  for (const auto& x : f.stripes[stripe]) c.points.push_back(x);
  c.closed = f.closed;
  return c;
}

PlanarNet planar_of(const NetFile& f) {
  PlanarNet net;
  for (int k = 0; k < int(f.stripes.size()); ++k) net.stripes.push_back(curve_of(f, k));
  net.gap_complexes = complexes_of<5>(f.meta);
  net.isothermic = f.isothermic;
  return net;
}

CircularNet circular_of(const NetFile& f) {
  if (f.model == "R32") return lift_net(planar_of(f));
  CircularNet net;
  for (const auto& row : f.stripes) net.points.emplace_back(row.begin(), row.end());
  for (const auto& s : f.spheres) net.spheres.push_back(s);
  net.gap_complexes = complexes_of<6>(f.meta);
  net.closed = f.closed;
  net.isothermic = f.isothermic;
  return net;
}

json plan_json(const FoldPlan& plan) {
  json j;
  j["mode"] = mode_name(plan.mode);
  j["lambdas"] = plan.lambdas;
  json c = json::array();
  for (const auto& n : plan.complexes) c.push_back(vec_json(n));
  j["complexes"] = std::move(c);
  return j;
}

FoldPlan plan_from_json(const json& j) {
  if (!j.is_object()) bad("plan must be an object");
  FoldPlan p;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) bad("mode must be a string");
    std::string m = j["mode"].get<std::string>();
    if (m == "auto") p.mode = FoldMode::Auto;
    else if (m == "spheres") p.mode = FoldMode::Spheres;
    else if (m == "complexes") p.mode = FoldMode::Complexes;
    else if (m == "explicit") p.mode = FoldMode::Explicit;
    else bad("unknown fold mode " + m);
  }
  if (j.contains("lambdas")) {
    if (!j["lambdas"].is_array()) bad("lambdas must be an array");
    for (const auto& x : j["lambdas"]) {
      if (!x.is_number()) bad("lambdas must be numbers");
      p.lambdas.push_back(x.get<double>());
    }
  }
  if (j.contains("complexes")) {
    if (!j["complexes"].is_array()) bad("complexes must be an array");
    for (size_t i = 0; i < j["complexes"].size(); ++i)
      p.complexes.push_back(fixed_of<6>(j["complexes"][i], "complexes[" + std::to_string(i) + "]"));
  }
  return p;
}

json report_json(const DiagnosticReport& rep, std::size_t max_failures) {
  json j;
  j["pass"] = rep.pass;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json f = json::array();
    for (size_t i = 0; i < c.failures.size() && i < max_failures; ++i)
      f.push_back({{"stripe", c.failures[i].stripe}, {"vertex", c.failures[i].vertex}, {"residual", c.failures[i].residual}});
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"max_residual", c.max_residual},
                      {"threshold", c.threshold},
                      {"failure_count", c.failures.size()},
                      {"failures", std::move(f)}});
  }
  j["checks"] = std::move(checks);
  j["cross_ratios"] = rep.cross_ratios;
  return j;
}

json error_json(const std::exception& e) {
  json j;
  if (auto* err = dynamic_cast<const Error*>(&e)) j["error"] = {{"code", err_name(err->code())}, {"message", e.what()}};
  else j["error"] = {{"code", "InternalError"}, {"message", e.what()}};
  return j;
}

void write_obj(const NetFile& f, std::ostream& os, const ObjOptions& opt) {
  int d = f.dim(), S = int(f.stripes.size()), V = S ? int(f.stripes[0].size()) : 0;
  os.precision(17);
  for (int k = 0; k < S; ++k)
    for (int i = 0; i < V; ++i) {
      const Eigen::VectorXd& x = f.stripes[k][i];
      double w = x(d - 3) + x(d - 2);
      if (std::abs(w) <= 1e-300 || std::abs(w) <= 1e-14 * x.norm())
        throw Error(Err::NotAPoint, "vertex " + std::to_string(k) + "," + std::to_string(i) + " is at infinity");
      double z = d == 6 ? x(2) / w : 0.0;
      os << "v " << x(0) / w << ' ' << x(1) / w << ' ' << z << '\n';
    }
  int E = (opt.wrap && f.closed) ? V : V - 1;
  for (int k = 0; k + 1 < S; ++k) {
    if (opt.groups) os << "g stripe_" << k << '\n';
    for (int i = 0; i < E; ++i) {
      int j = (i + 1) % V;
      int a = k * V + i + 1, b = k * V + j + 1, c = (k + 1) * V + j + 1, e = (k + 1) * V + i + 1;
      os << "f " << a << ' ' << b << ' ' << c << ' ' << e << '\n';
    }
  }
}

}  // namespace isonet
