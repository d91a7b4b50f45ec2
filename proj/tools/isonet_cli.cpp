#include "isonet/serve.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace isonet;

namespace {

struct Io {
  std::string in = "-";
  std::string out = "-";
};

void add_io(CLI::App* app, Io& io, bool input = true) {
  if (input) app->add_option("-i,--in", io.in, "input document, - for stdin");
  app->add_option("-o,--out", io.out, "output document, - for stdout");
}

Vec5 vec5_of(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) throw Error(Err::BadInput, "seed field " + key + " missing");
  const json& a = j[key];
  if (a.size() == 2) return encode_point(a[0].get<double>(), a[1].get<double>());
  if (a.size() != 5) throw Error(Err::BadInput, "seed field " + key + " needs 2 or 5 numbers");
  Vec5 v;
  for (int i = 0; i < 5; ++i) v(i) = a[i].get<double>();
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--plan", "not a number: " + tok);
    }
    if (used != tok.size()) throw CLI::ValidationError("--plan", "not a number: " + tok);
    out.push_back(v);
  }
  return out;
}

json carry_meta(const NetFile& from) {
  json m = json::object();
  for (const char* key : {"seed_params", "steps", "space_form", "elastic", "crop"})
    if (from.meta.contains(key)) m[key] = from.meta[key];
  return m;
}

NetFile net_out(const CircularNet& net, const NetFile& from) {
  NetFile f = circular_file(net);
  json m = carry_meta(from);
  for (auto it = m.begin(); it != m.end(); ++it) f.meta[it.key()] = it.value();
  f.meta["cross_ratios"] = check_net(net).cross_ratios;
  return f;
}

CircularNet flat_base(const NetFile& doc) {
  CircularNet net = circular_of(doc);
  return doc.model == "R32" ? net : flatten(net);
}

double mean_edge(const DiscreteCurve& c) {
  double s = 0;
  for (int i = 0; i < c.edges(); ++i) {
    Vec5 a = c.at(i), b = c.at(i + 1);
    s += (a.head<2>() / (a(2) + a(3)) - b.head<2>() / (b(2) + b(3))).norm();
  }
  return s / c.edges();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isothermic nets from elastic curves: generation, extension, folding, closure"};
  app.require_subcommand(1);
  std::function<void()> run;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seed curve");
  gen->require_subcommand(1);
  Io gio;
  ElasticaParams ep;
  double period = 12;
  std::optional<double> zopt;
  std::string branch = "auto";
  auto* gel = gen->add_subcommand("elastica", "discrete Euclidean elastica");
  gel->set_help_flag("--help", "print help");  // -h is the edge length here
  add_io(gel, gio, false);
  gel->add_option("--k", ep.k, "elliptic modulus")->check(CLI::Range(0.0, 1.0));
  gel->add_option("--r", period, "curvature period in vertices")->check(CLI::PositiveNumber);
  gel->add_option("--z", zopt, "explicit step parameter, overrides --r");
  gel->add_option("--h", ep.h, "edge length")->check(CLI::PositiveNumber);
  gel->add_option("--n", ep.n, "number of vertices")->check(CLI::Range(3, 1000000));
  gel->add_option("--phase", ep.phase, "parameter offset");
  gel->add_option("--branch", branch, "curvature form")->check(CLI::IsMember({"auto", "cn", "dn"}));
  gel->callback([&] {
    run = [&] {
      ep.form = branch == "cn" ? ElasticaForm::Cn : branch == "dn" ? ElasticaForm::Dn : ElasticaForm::Auto;
      ep.z = zopt ? *zopt : elastica_period_z(ep.k, period, ep.form);
      Elastica e = elastic_curve_euclidean(ep);
      json sp = {{"kind", "elastica"}, {"k", ep.k}, {"z", ep.z}, {"h", ep.h}, {"n", ep.n}, {"phase", ep.phase},
                 {"form", branch}, {"r", period}};
      save_net(curve_file(e.curve, sp), gio.out);
    };
  });
  int eight_r = 24;
  double eight_h = 0.1;
  auto* geight = gen->add_subcommand("eight", "closed elastic figure eight");
  geight->set_help_flag("--help", "print help");
  add_io(geight, gio, false);
  geight->add_option("--r", eight_r, "vertices per period")->check(CLI::Range(4, 100000));
  geight->add_option("--h", eight_h, "edge length")->check(CLI::PositiveNumber);
  geight->callback([&] {
    run = [&] {
      Elastica e = figure_eight(eight_r, eight_h);
      json sp = {{"kind", "figure_eight"}, {"r", eight_r}, {"h", eight_h}, {"k", e.params.k}, {"closure", e.closure}};
      save_net(curve_file(e.curve, sp), gio.out);
    };
  });
  std::string seed_path;
  auto* gc2 = gen->add_subcommand("construction2", "curve from circle-congruence seed data");
  add_io(gc2, gio, false);
  gc2->add_option("--seed", seed_path, "seed JSON: f0 f1 f2 c1a c1b m1 m2 steps")->required()->check(CLI::ExistingFile);
  gc2->callback([&] {
    run = [&] {
      std::ifstream in(seed_path);
      json s = json::parse(in, nullptr, false);
      if (s.is_discarded() || !s.is_object()) throw Error(Err::BadInput, "seed is not a JSON object");
      int steps = s.value("steps", 50);
      DiscreteCurve c = construction2(vec5_of(s, "f0"), vec5_of(s, "f1"), vec5_of(s, "f2"), vec5_of(s, "c1a"),
                                      vec5_of(s, "c1b"), vec5_of(s, "m1"), vec5_of(s, "m2"), steps);
      s["kind"] = "construction2";
      save_net(curve_file(c, s), gio.out);
    };
  });

  // extend
  Io xio;
  ExtendOptions xo;
  std::vector<double> lambdas;
  std::optional<double> step;
  auto* ext = app.add_subcommand("extend", "extend a seed curve to a holomorphic map");
  add_io(ext, xio);
  ext->add_option("--stripes", xo.stripes, "number of Darboux steps")->check(CLI::NonNegativeNumber);
  auto* lam_opt = ext->add_option("--lambda", lambdas, "raw step parameters, the last one repeats")->delimiter(',');
  ext->add_option("--step-length", step, "mean Euclidean step per stripe")->excludes(lam_opt)->check(
      CLI::PositiveNumber);
  ext->add_option("--branch", xo.branch, "+1 or -1")->check(CLI::IsMember({-1, 1}));
  ext->add_flag("--flip", xo.flip, "reverse the tangent orientation");
  ext->callback([&] {
    run = [&] {
      NetFile doc = load_net(xio.in);
      DiscreteCurve c = curve_of(doc);
      xo.lambdas = lambdas;
      if (step) xo.step_length = step;
      else if (lambdas.empty()) xo.step_length = 0.5 * mean_edge(c);
      NetFile out = holomorphic_file(extend_holomorphic(c, xo));
      if (doc.meta.contains("seed_params")) out.meta["seed_params"] = doc.meta["seed_params"];
      save_net(out, xio.out);
    };
  });

  // fold
  Io fio;
  std::string plan_text;
  std::uint64_t seed = 0;
  double range = 2;
  std::string mode = "auto";
  auto* fo = app.add_subcommand("fold", "lifted-folding of a net");
  add_io(fo, fio);
  fo->add_option("--plan", plan_text, "comma separated lambdas, or random")->required();
  fo->add_option("--seed", seed, "RNG seed for a random plan");
  fo->add_option("--range", range, "random lambdas are uniform in (-range, range)")->check(CLI::PositiveNumber);
  fo->add_option("--mode", mode, "complex family")->check(CLI::IsMember({"auto", "spheres", "complexes"}));
  fo->callback([&] {
    std::vector<double> listed;
    if (plan_text != "random") listed = parse_list(plan_text);
    run = [&, listed] {
      NetFile doc = load_net(fio.in);
      CircularNet net = circular_of(doc);
      FoldPlan plan = plan_from_json(json{{"mode", mode}});
      if (plan_text == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-range, range);
        for (int j = 0; j + 1 < net.stripes(); ++j) plan.lambdas.push_back(u(rng));
      } else {
        plan.lambdas = listed;
      }
      auto F = fold(net, plan);
      NetFile out = net_out(F.net, doc);
      json pj = plan_json(plan);
      json used = json::array();
      for (const auto& n : F.complexes) used.push_back(std::vector<double>(n.data(), n.data() + 6));
      pj["complexes"] = std::move(used);
      out.meta["fold_plan"] = std::move(pj);
      save_net(out, fio.out);
    };
  });

  // flatten / reflect
  Io lio;
  auto* fl = app.add_subcommand("flatten", "fold every gap with lambda = -1");
  add_io(fl, lio);
  fl->callback([&] {
    run = [&] {
      NetFile doc = load_net(lio.in);
      save_net(net_out(flatten(circular_of(doc)), doc), lio.out);
    };
  });
  auto* rf = app.add_subcommand("reflect", "extend a piece by its mirror image in the last sphere");
  add_io(rf, lio);
  rf->callback([&] {
    run = [&] {
      NetFile doc = load_net(lio.in);
      save_net(net_out(reflect_extend(circular_of(doc)), doc), lio.out);
    };
  });

  // close-torus
  Io cio;
  std::string angle;
  std::string cplan;
  ClosureOptions copt;
  std::optional<int> cgap;
  auto* ct = app.add_subcommand("close-torus", "solve for a closing folding parameter and assemble the torus");
  add_io(ct, cio);
  ct->add_option("--angle", angle, "p/q")->required();
  ct->add_option("--plan", cplan, "comma separated lambdas; defaults to the document's fold plan");
  ct->add_option("--gap", cgap, "free gap")->check(CLI::NonNegativeNumber);
  ct->add_option("--lo", copt.lo, "scan start");
  ct->add_option("--hi", copt.hi, "scan end");
  ct->add_option("--samples", copt.samples, "scan samples")->check(CLI::Range(2, 10000000));
  ct->callback([&] {
    auto slash = angle.find('/');
    int p = 0, q = 0;
    try {
      size_t a = 0, b = 0;
      if (slash == std::string::npos) throw std::invalid_argument("no slash");
      p = std::stoi(angle.substr(0, slash), &a);
      q = std::stoi(angle.substr(slash + 1), &b);
      if (a != slash || b != angle.size() - slash - 1 || p < 0 || q < 1) throw std::invalid_argument("range");
    } catch (const std::exception&) {
      throw CLI::ValidationError("--angle", "expected p/q with p >= 0, q >= 1");
    }
    std::vector<double> listed;
    if (!cplan.empty()) listed = parse_list(cplan);
    run = [&, p, q, listed] {
      NetFile doc = load_net(cio.in);
      CircularNet base = flat_base(doc);
      FoldPlan plan;
      if (!listed.empty()) plan.lambdas = listed;
      else if (doc.meta.contains("fold_plan")) plan = plan_from_json(doc.meta["fold_plan"]);
      else throw Error(Err::BadInput, "no fold plan given");
      plan.complexes.clear();
      if (plan.mode == FoldMode::Explicit) plan.mode = FoldMode::Auto;
      if (cgap) copt.free_gaps = {*cgap};
      auto cp = solve_closure(base, plan, p, q, copt);
      auto T = close_torus(fold(base, cp.plan).net, q);
      NetFile out = net_out(T.net, doc);
      out.meta["fold_plan"] = plan_json(cp.plan);
      out.meta["closure"] = {{"p", p},           {"q", q},
                             {"gap", cp.gap},    {"lambda", cp.lambda},
                             {"cos_psi", cp.cos_psi}, {"target", cp.target},
                             {"angle_residual", cp.residual}, {"closure_residual", T.residual},
                             {"seams", T.seams}};
      save_net(out, cio.out);
    };
  });

  // export
  Io eio;
  std::string obj_path;
  bool wrap = false, no_groups = false;
  auto* ex = app.add_subcommand("export", "write a mesh");
  add_io(ex, eio, true);
  ex->add_option("--obj", obj_path, "Wavefront OBJ output, - for stdout")->required();
  ex->add_flag("--wrap", wrap, "add the seam quads of closed stripes");
  ex->add_flag("--no-groups", no_groups, "omit per-stripe groups");
  ex->callback([&] {
    run = [&] {
      NetFile doc = load_net(eio.in);
      ObjOptions o{!no_groups, wrap};
      if (obj_path == "-") {
        write_obj(doc, std::cout, o);
      } else {
        std::ostringstream os;
        write_obj(doc, os, o);
        std::ofstream out(obj_path);
        if (!out) throw Error(Err::BadInput, "cannot write " + obj_path);
        out << os.str();
      }
    };
  });

  // verify
  Io vio;
  std::string report_path = "-";
  CheckOptions vopt;
  bool span = false;
  auto* ve = app.add_subcommand("verify", "run the diagnostic checks");
  add_io(ve, vio, true);
  ve->add_option("--report", report_path, "report JSON output, - for stdout");
  ve->add_flag("--planar", vopt.planar, "every sphere must be a plane");
  ve->add_flag("--distinct", vopt.distinct_spheres, "adjacent spheres must differ");
  ve->add_flag("--elastic-span", span, "spheres in the span of plane, space form, elastic complex and p");
  int status = 0;
  ve->callback([&] {
    run = [&] {
      NetFile doc = load_net(vio.in);
      if (span) {
        if (!doc.meta.contains("elastic") || !doc.meta.contains("space_form"))
          throw Error(Err::BadInput, "document carries no elastic complex");
        Vec5 el, sf;
        for (int i = 0; i < 5; ++i) {
          el(i) = doc.meta["elastic"][i].get<double>();
          sf(i) = doc.meta["space_form"][i].get<double>();
        }
        vopt.sphere_span = std::vector<Vec6>{plane_sphere<double>(), embed(sf), embed(el), point_complex<double, 6>()};
      }
      auto rep = check_net(circular_of(doc), vopt);
      std::string text = report_json(rep).dump(2);
      if (report_path == "-") {
        std::cout << text << '\n';
      } else {
        std::ofstream out(report_path);
        if (!out) throw Error(Err::BadInput, "cannot write " + report_path);
        out << text << '\n';
      }
      status = rep.pass ? 0 : 1;
    };
  });

  // serve
  Io sio;
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* sv = app.add_subcommand("serve", "local HTTP endpoint for the viewer");
  add_io(sv, sio, true);
  sv->add_option("--port", port, "port, 0 picks a free one")->check(CLI::Range(0, 65535));
  sv->add_option("--host", host, "bind address");
  sv->callback([&] {
    run = [&] {
      Session session(load_net(sio.in));
      httplib::Server server;
      install_routes(server, session);
      int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
      if (bound < 0) throw Error(Err::BadInput, "cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "serving on http://" << host << ":" << bound << std::endl;
      server.listen_after_bind();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (run) run();
  } catch (const std::exception& e) {
    std::cerr << error_json(e).dump() << std::endl;
    return 1;
  }
  return status;
}
