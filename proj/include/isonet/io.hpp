#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isonet/darboux.hpp"
#include "isonet/folding.hpp"
#include "isonet/verify.hpp"

namespace isonet {

using json = nlohmann::json;

// Interchange document. R32 holds planar curves and holomorphic maps (5 coordinates),
// R42 holds nets in 3-space (6 coordinates). A single curve is a one-stripe R32 net.
struct NetFile {
  std::string model = "R32";
  std::vector<std::vector<Eigen::VectorXd>> stripes;  // stripes[k][i]
  std::vector<Eigen::VectorXd> spheres;               // R42 only
  int stripe_axis = 0;                                // index along which the curves are spherical
  bool closed = false;
  bool isothermic = true;
  json meta = json::object();

  int dim() const { return model == "R42" ? 6 : 5; }
};

json to_json(const NetFile& f);
NetFile net_from_json(const json& j);  // BadInput on schema violations

NetFile load_net(const std::string& path);  // "-" reads stdin
void save_net(const NetFile& f, const std::string& path);
NetFile parse_net(const std::string& text);
std::string dump_net(const NetFile& f);

NetFile curve_file(const DiscreteCurve& c, const json& seed_params = json::object());
NetFile planar_file(const PlanarNet& net);
NetFile holomorphic_file(const HolomorphicMap& H);
NetFile circular_file(const CircularNet& net);

DiscreteCurve curve_of(const NetFile& f, int stripe = 0);
PlanarNet planar_of(const NetFile& f);
CircularNet circular_of(const NetFile& f);  // lifts R32 documents

json plan_json(const FoldPlan& plan);
FoldPlan plan_from_json(const json& j);

json report_json(const DiagnosticReport& rep, std::size_t max_failures = 50);
json error_json(const std::exception& e);

struct ObjOptions {
  bool groups = true;  // one group per stripe
  bool wrap = false;   // close the lattice across the seam of closed stripes
};

// decoded points as vertices, quads in lattice order, 1-based indices
void write_obj(const NetFile& f, std::ostream& os, const ObjOptions& opt = {});

}  // namespace isonet
