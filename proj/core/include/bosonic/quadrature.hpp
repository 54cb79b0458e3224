#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bosonic/error.hpp"
#include "bosonic/parallel.hpp"
#include "bosonic/vec.hpp"

namespace bosonic {

enum class Domain { Sphere, Hyperplane, Ball };

struct QuadratureRule {
  Domain domain = Domain::Sphere;
  int m = 0;               // ambient dimension of the problem (R^{m-1} for hyperplane rules)
  int exactness_degree = -1;  // -1 for mapped rules without polynomial exactness
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::string description;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

struct GaussRule {
  std::vector<double> nodes, weights;
};

// n-point Gauss-Jacobi rule on [-1,1] for the weight (1-t)^alpha (1+t)^beta.
const GaussRule& gauss_jacobi(int n, double alpha, double beta);
const GaussRule& gauss_legendre(int n);

// Caps the node count of every rule built afterwards (0 = unlimited).
void set_node_budget(std::size_t max_nodes);
std::size_t node_budget();

// Product rule on S^{m-1}, exact for polynomials of total degree <= degree.
QuadratureRule sphere_rule(int m, int degree);

// Rule on B^m exact for polynomials of degree <= degree.
QuadratureRule ball_rule(int m, int degree);

// Rule on R^{m-1} in polar form with r = s/(1-s) and Gauss-Legendre in s.
QuadratureRule hyperplane_rule(int m, int radial_order, int angular_degree);

struct GradedHyperplaneSpec {
  double inner = 1.0;      // first radial panel [0, inner]
  double outer = 8.0;      // doubling panels stop here; a mapped tail covers [outer, inf)
  int panel_order = 12;
  int angular_degree = 16;
};

// Polar rule on R^{m-1} about the origin, graded towards r = 0.
QuadratureRule graded_hyperplane_rule(int m, const GradedHyperplaneSpec& spec);

// Polar rule on the disk B(center, radius) in R^{m-1}, equal Gauss-Legendre panels in r.
QuadratureRule disk_rule(const Vec& center, double radius, int panels, int panel_order, int angular_degree);

// Polar rule about `pole` (strictly inside B(center, radius)) whose rays stop on the circle;
// radial panels double from `inner` so a kernel peaked at the pole is resolved.
QuadratureRule star_disk_rule(const Vec& center, double radius, const Vec& pole, double inner, int panel_order,
                              int angular_degree);
// Polar rule on the cap {z on S^{m-1} : angle(z, axis) < cap_angle} about `pole` inside the cap;
// geodesic rays stop on the cap boundary and radial panels double from `inner`.
QuadratureRule cap_rule(const Vec& axis, double cap_angle, const Vec& pole, double inner, int panel_order, int angular_degree);

struct GradedSphereSpec {
  double width = 0.1;     // first polar panel [0, width]
  int panel_order = 12;
  int angular_degree = 16;
};

// Rule on S^{m-1} in polar coordinates about `pole`, graded towards the pole.
QuadratureRule graded_sphere_rule(const Vec& pole, const GradedSphereSpec& spec);

QuadratureRule translated(const QuadratureRule& rule, const Vec& shift);
// Maps a unit-ball rule onto B(center, radius).
QuadratureRule mapped_ball(const QuadratureRule& rule, const Vec& center, double radius);

// Deterministic pairwise summation.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

[[noreturn]] void throw_non_finite(const QuadratureRule& rule, std::size_t node, double value);

// sum_i w_i f(node_i); f must be safe to call concurrently.
template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  std::vector<double> terms(rule.size());
  parallel_for(rule.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double v = f(rule.nodes[i]);
      if (!std::isfinite(v)) throw_non_finite(rule, i, v);
      terms[i] = rule.weights[i] * v;
    }
  });
  return pairwise_sum(terms);
}

}  // namespace bosonic
