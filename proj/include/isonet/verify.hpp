#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isonet/folding.hpp"

namespace isonet {

struct Failure {
  int stripe = 0;
  int vertex = 0;
  double residual = 0;
};

struct Check {
  std::string name;
  double max_residual = 0;
  double threshold = 0;
  bool pass = true;
  std::vector<Failure> failures;
};

struct DiagnosticReport {
  std::vector<Check> checks;
  std::vector<double> cross_ratios;  // per gap, when isothermic
  bool pass = true;

  const Check* find(const std::string& name) const;
};

struct CheckOptions {
  double lightcone = 1e-10;
  double incidence = 1e-10;
  double concircular = 1e-10;
  double cross_ratio = 1e-9;  // relative spread per gap
  bool distinct_spheres = false;
  double distinct = 1e-9;
  bool planar = false;  // every sphere is a plane
  std::optional<std::vector<Vec6>> sphere_span;  // spheres lie in the span of these vectors
  double span = 1e-9;
  // per gap j: s_{j+1} lies in span(s_j, pencils[j], p); zero entries are skipped
  std::optional<std::vector<Vec6>> pencils;
  double pencil = 1e-10;
};

DiagnosticReport check_net(const CircularNet& net, const CheckOptions& opt = {});

// residual of a sphere against the plane criterion <s, q0> = 0
double plane_residual(const Vec6& s);

}  // namespace isonet
