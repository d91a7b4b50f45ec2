#pragma once

#include <optional>
#include <vector>

#include "isonet/curves.hpp"

namespace isonet {

Vec5 tangential_circle(const Vec5& f0, const Vec5& c1, const Vec5& f1, double tol = default_tol());

struct Construction2Step {
  Vec5 point;
  Vec5 circle_a;
  Vec5 circle_b;
};

Construction2Step construction2_step(const Vec5& f0, const Vec5& f1, const Vec5& f2, const Vec5& c1a,
                                     const Vec5& c1b, const Vec5& m1, const Vec5& m2,
                                     double tol = default_tol());

// iterate from the seed f0, f1, f2 with circles c1a, c1b at f1; returns the curve
DiscreteCurve construction2(const Vec5& f0, const Vec5& f1, const Vec5& f2, Vec5 c1a, Vec5 c1b, const Vec5& m1,
                            const Vec5& m2, int steps, double tol = default_tol());

double s_lambda_dual(double lambda);
CircleCongruence s_lambda(const CircleCongruence& a, const CircleCongruence& d, double lambda);

struct Combination {
  CircleCongruence circles;
  double xi = 0;
  double xi_dev = 0;
  double eta = 0;
  double eta_dev = 0;
};

// c = lambda c1 + dual c2 + p with dual = (1 + 2 lambda) / (2 xi lambda - 2);
// eta from <c_i - c_j, m1 + eta m2> = 0 when both complexes are given
Combination combine_congruences(const CircleCongruence& c1, const CircleCongruence& c2, double lambda,
                                const std::optional<Vec5>& m1 = {}, const std::optional<Vec5>& m2 = {},
                                double tol = 1e-8);

// the member of the family orthogonal to c1
Combination orthogonal_combination(const CircleCongruence& c1, const CircleCongruence& c2, double tol = 1e-8);

// complex containing all circles, signed so that <m, p> < 0
KernelFit<double, 5> congruence_complex(const CircleCongruence& c);

enum class DarbouxCase { TwoSolutions, OneSolution, CircleTarget };
const char* case_name(DarbouxCase c);

struct DarbouxTransform {
  DiscreteCurve curve;
  int offset = 0;  // curve.points[i] pairs with vertex i + offset of f
  Vec5 m_bar = Vec5::Zero();
  Vec5 b = Vec5::Zero();
  double mu = 0;
  DarbouxCase kind = DarbouxCase::TwoSolutions;
};

// c normalized <c,p> = -1 and lying in the complex m_bar; first entry is the mu^+ branch
std::vector<DarbouxTransform> darboux_explicit(const DiscreteCurve& f, const CircleCongruence& c, const Vec5& m_bar,
                                               double tol = 1e-10);

struct StepMeta {
  double lambda = 0;
  DarbouxCase kind = DarbouxCase::TwoSolutions;
  Vec5 m_bar = Vec5::Zero();
  Vec5 b = Vec5::Zero();
  double mu = 0;
  Vec5 space_form = Vec5::Zero();
  Vec5 elastic = Vec5::Zero();
  double elastic_residual = 0;
  double cross_ratio = 0;
  double cross_ratio_dev = 0;
  double nu_residual = 0;
};

struct HolomorphicMap : PlanarNet {
  std::vector<StepMeta> steps;
  Vec5 space_form = infinity<double, 5>();
  Vec5 elastic = Vec5::Zero();
  int crop = 0;  // vertices dropped at each end of open stripes
};

struct ExtendOptions {
  int stripes = 1;
  std::vector<double> lambdas;        // raw parameters; the last one repeats
  std::optional<double> step_length;  // mean Euclidean step, solved per stripe
  int branch = 1;                     // +1: mu^+, -1: mu^-
  bool flip = false;                  // orientation of the tangent lines
};

HolomorphicMap extend_holomorphic(const DiscreteCurve& f, const ExtendOptions& opt,
                                  const Vec5& q = infinity<double, 5>());

}  // namespace isonet
