#include "isonet/serve.hpp"

#include <httplib.h>

#include <mutex>

namespace isonet {

namespace {

const char* kJson = "application/json";

int int_field(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_number_integer()) throw BadRequest(std::string("integer field ") + key + " required");
  return body[key].get<int>();
}

json parse_body(const std::string& text) {
  if (text.empty()) return json::object();
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("body must be a JSON object");
  return j;
}

json error_body(const char* code, const std::string& msg) { return {{"error", {{"code", code}, {"message", msg}}}}; }

template <class F>
void respond(httplib::Response& res, F&& f) {
  try {
    res.set_content(f().dump(), kJson);
    res.status = 200;
  } catch (const BadRequest& e) {
    res.status = 400;
    res.set_content(error_body("BadRequest", e.what()).dump(), kJson);
  } catch (const Error& e) {
    res.status = e.code() == Err::BadInput ? 400 : 422;
    res.set_content(error_json(e).dump(), kJson);
  } catch (const std::exception& e) {
    res.status = 500;
    res.set_content(error_json(e).dump(), kJson);
  }
}

}  // namespace

Session::Session(const NetFile& doc) {
  CircularNet net = circular_of(doc);
  if (net.stripes() < 1) throw Error(Err::DegenerateNet, "session needs at least one stripe");
  base_ = doc.model == "R32" ? net : flatten(net);
  for (const char* key : {"seed_params", "steps", "space_form", "elastic", "crop"})
    if (doc.meta.contains(key)) seed_meta_[key] = doc.meta[key];
  plan_.mode = FoldMode::Auto;
  plan_.lambdas.assign(std::max(0, base_.stripes() - 1), -1.0);
  set_current(base_);
}

void Session::set_current(CircularNet net) {
  current_ = std::move(net);
  report_ = check_net(current_);
}

json Session::net_locked() const {
  NetFile f = circular_file(current_);
  f.meta["fold_plan"] = plan_json(plan_);
  f.meta["cross_ratios"] = report_.cross_ratios;
  for (auto it = seed_meta_.begin(); it != seed_meta_.end(); ++it) f.meta[it.key()] = it.value();
  return to_json(f);
}

json Session::state_locked() const {
  json j = {{"net", net_locked()}, {"report", report_json(report_)}};
  if (!closure_.is_null()) j["closure"] = closure_;
  return j;
}

json Session::net() const {
  std::shared_lock lock(mu_);
  return net_locked();
}

json Session::report() const {
  std::shared_lock lock(mu_);
  return report_json(report_);
}

json Session::fold(const json& body) {
  if (!body.contains("lambdas") || !body["lambdas"].is_array()) throw BadRequest("lambdas array required");
  FoldPlan plan;
  try {
    plan = plan_from_json(body);
  } catch (const Error& e) {
    throw BadRequest(e.what());
  }
  if (plan.mode == FoldMode::Explicit) throw BadRequest("explicit complexes are not accepted here");
  std::unique_lock lock(mu_);
  if (int(plan.lambdas.size()) != base_.stripes() - 1)
    throw BadRequest("expected " + std::to_string(base_.stripes() - 1) + " lambdas");
  for (double x : plan.lambdas)
    if (!std::isfinite(x)) throw BadRequest("lambdas must be finite");
  auto F = isonet::fold(base_, plan);
  plan_ = plan;
  closure_ = nullptr;
  set_current(std::move(F.net));
  return state_locked();
}

json Session::reflect() {
  std::unique_lock lock(mu_);
  auto piece = isonet::fold(base_, plan_).net;
  closure_ = nullptr;
  set_current(reflect_extend(piece));
  return state_locked();
}

json Session::close(const json& body) {
  int p = int_field(body, "p"), q = int_field(body, "q");
  if (q < 1 || p < 0) throw BadRequest("need p >= 0 and q >= 1");
  ClosureOptions opt;
  if (body.contains("gap")) opt.free_gaps = {int_field(body, "gap")};
  for (auto [key, dst] : {std::pair{"lo", &opt.lo}, std::pair{"hi", &opt.hi}}) {
    if (!body.contains(key)) continue;
    if (!body[key].is_number()) throw BadRequest(std::string(key) + " must be a number");
    *dst = body[key].get<double>();
  }
  if (body.contains("samples")) opt.samples = int_field(body, "samples");
  if (!(opt.hi > opt.lo) || opt.samples < 2) throw BadRequest("bad scan interval");
  std::unique_lock lock(mu_);
  for (int g : opt.free_gaps)
    if (g < 0 || g >= base_.stripes() - 1) throw BadRequest("gap out of range");
  auto cp = solve_closure(base_, plan_, p, q, opt);
  auto piece = isonet::fold(base_, cp.plan).net;
  auto T = close_torus(piece, q);
  plan_ = cp.plan;
  closure_ = {{"p", p},
              {"q", q},
              {"gap", cp.gap},
              {"lambda", cp.lambda},
              {"cos_psi", cp.cos_psi},
              {"target", cp.target},
              {"angle_residual", cp.residual},
              {"closure_residual", T.residual},
              {"seams", T.seams},
              {"plan", plan_json(cp.plan)}};
  set_current(std::move(T.net));
  return state_locked();
}

void install_routes(httplib::Server& server, Session& session) {
  server.Get("/net", [&](const httplib::Request&, httplib::Response& res) { respond(res, [&] { return session.net(); }); });
  server.Get("/report",
             [&](const httplib::Request&, httplib::Response& res) { respond(res, [&] { return session.report(); }); });
  server.Post("/fold", [&](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] { return session.fold(parse_body(req.body)); });
  });
  server.Post("/reflect",
              [&](const httplib::Request&, httplib::Response& res) { respond(res, [&] { return session.reflect(); }); });
  server.Post("/close", [&](const httplib::Request& req, httplib::Response& res) {
    respond(res, [&] { return session.close(parse_body(req.body)); });
  });
}

}  // namespace isonet
