#pragma once

#include <optional>
#include <vector>

#include "isonet/curves.hpp"

namespace isonet {

// Net in R^{4,2}; stripe i has its curve in points[i] on the sphere spheres[i].
struct CircularNet {
  std::vector<std::vector<Vec6>> points;
  std::vector<Vec6> spheres;        // <s,p> = -1
  std::vector<Vec6> gap_complexes;  // transported evolution complexes, one per gap
  bool closed = false;
  bool isothermic = true;

  int stripes() const { return int(points.size()); }
  int vertices() const { return points.empty() ? 0 : int(points[0].size()); }
};

CircularNet lift_net(const PlanarNet& net);

enum class FoldMode { Auto, Spheres, Complexes, Explicit };
const char* mode_name(FoldMode m);

struct FoldPlan {
  std::vector<double> lambdas;  // one per gap
  FoldMode mode = FoldMode::Auto;
  std::vector<Vec6> complexes;  // Explicit mode
};

struct Folded {
  CircularNet net;
  std::vector<Vec6> complexes;  // zero where the gap was left untouched
  std::vector<FoldMode> modes;
  std::vector<Vec6> pencils;  // with s_j and p spans the pencil of gap j; zero where skipped
};

// spheres: n = s_j + lambda s_k - (1 + lambda) p
// complexes: n = s_j - p + (1 + lambda) w, w the unit M-inversion part of the gap complex
Folded fold(const CircularNet& net, const FoldPlan& plan);

// complexes undoing a fold that used `complexes`
FoldPlan inverse_plan(const std::vector<Vec6>& complexes);

CircularNet flatten(const CircularNet& net);

// complexes-mode parameter producing the same folding complex as the spheres-mode lambda at gap j
double remark_parameter(const CircularNet& net, int gap, double lambda);

// appends the mirror images of stripes n-1, ..., 1 in the last sphere
CircularNet reflect_extend(const CircularNet& piece);

struct BoundaryAngle {
  double cos_psi = 0;   // between the first and last sphere
  double cos_phi = 0;   // rotation angle of the two boundary reflections
  double raw = 0;       // angle formula on s_1 and its mirror in s_n
};

BoundaryAngle boundary_angle(const CircularNet& piece, double tol = 1e-12);

struct ClosureOptions {
  std::vector<int> free_gaps{0};
  double lo = -10, hi = 10;
  int samples = 2048;
  double tol = 1e-10;
};

struct ClosurePlan {
  FoldPlan plan;
  int gap = -1;
  double lambda = 0;
  double cos_psi = 0;
  double target = 0;
  double residual = 0;
};

// adjusts one free folding parameter so that the piece closes after q extended pieces
ClosurePlan solve_closure(const CircularNet& base, const FoldPlan& plan, int p, int q, const ClosureOptions& opt = {});

struct Torus {
  CircularNet net;
  int pieces = 0;
  double residual = 0;
  std::vector<int> seams;  // first stripe of each extended piece
};

Torus close_torus(const CircularNet& piece, int q, double tol = 1e-8);

}  // namespace isonet
