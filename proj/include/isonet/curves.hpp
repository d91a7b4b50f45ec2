#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "isonet/lie.hpp"

namespace isonet {

using Mat5 = Eigen::Matrix<double, 5, 5>;

struct Monodromy {
  int period = 0;
  Mat5 map = Mat5::Identity();
  double residual = 0;
  double isometry_residual = 0;
  bool fixes_infinity = false;
};

// Light-cone points of a planar discrete curve; closed curves wrap around.
struct DiscreteCurve {
  std::vector<Vec5> points;
  bool closed = false;
  std::optional<Monodromy> monodromy;

  int size() const { return int(points.size()); }
  int edges() const { return closed ? size() : size() - 1; }
  const Vec5& at(int i) const {
    int n = size();
    return points[((i % n) + n) % n];
  }
};

// Per-vertex circles; circles[i] belongs to vertex i + offset.
struct CircleCongruence {
  std::vector<Vec5> circles;
  int offset = 0;
};

struct EvolutionMap {
  std::vector<Vec5> complexes;  // edge i -> i+1
  std::vector<Vec5> fixed;      // declared fixed complexes (p implied)
  bool closed = false;
};

// Stripes of a planar net; gap_complexes[i] is fixed by the evolution between stripes i and i+1.
struct PlanarNet {
  std::vector<DiscreteCurve> stripes;
  std::vector<Vec5> gap_complexes;
  bool isothermic = true;
};

EvolutionMap r_evolution(const DiscreteCurve& f, const DiscreteCurve& g, double tol = default_tol());
DiscreteCurve evolve(const EvolutionMap& sigma, const Vec5& g0);

Eigen::Matrix<double, 5, 3> pencil_basis(const DiscreteCurve& f, int i, double tol = default_tol());

struct ArcLength {
  bool ok = false;
  double chi = 0;
  double max_dev = 0;
  int worst_edge = -1;
};

ArcLength arc_length_check(const DiscreteCurve& f, const Vec5& q, double tol = default_tol());

struct ArcLengthCongruence {
  CircleCongruence circles;
  double chi = 0;
  double alpha = 0;
};

// sign picks the branch of alpha
ArcLengthCongruence arc_length_congruence(const DiscreteCurve& f, const Vec5& q, int sign = 1,
                                          double tol = default_tol());

enum class ElasticaForm { Auto, Cn, Dn };

struct ElasticaParams {
  double k = 0.8;
  double z = 0;
  double phase = 0;
  double h = 0.1;
  int n = 100;
  ElasticaForm form = ElasticaForm::Auto;
};

struct Elastica {
  DiscreteCurve curve;
  std::vector<double> curvature;  // curvature[i] at vertex i + 1 (open) or i (closed)
  ElasticaParams params;
  double closure = 0;
};

ElasticaForm resolve_form(double k, ElasticaForm form);
double elastica_period_z(double k, double r, ElasticaForm form = ElasticaForm::Auto);
Elastica elastic_curve_euclidean(ElasticaParams params);
double figure_eight_modulus(int r);
Elastica figure_eight(int r, double h = 0.1);

struct ElasticFit {
  CircleCongruence circles;
  std::vector<Vec5> tangents;  // per edge, oriented
  Vec5 complex = Vec5::Zero();
  double residual = 0;
};

ElasticFit elastic_congruence_fit(const DiscreteCurve& f, const Vec5& q, bool flip = false,
                                  double threshold = 1e-8);

Monodromy monodromy_detect(const DiscreteCurve& f, int period, double tol = 1e-8);

PlanarNet joachimsthal_seed(const std::vector<Vec5>& circles, const std::vector<Vec5>& samples,
                            double tol = 1e-8);

// the two null directions of span(W) (Gram of signature (1,1)), as normalized circles
std::array<Vec5, 2> null_pair(const Eigen::Matrix<double, 5, 2>& W, double tol = default_tol());

}  // namespace isonet
