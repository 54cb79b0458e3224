#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bosonic/clifford.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/operator.hpp"
#include "bosonic/quadrature.hpp"

namespace bosonic {

// Scalar profiles for boundary coefficient functions (the closed datum catalog).
struct Profile {
  enum class Kind { Constant, Polynomial, Gaussian, Bump };
  struct Term {
    double coefficient = 0.0;
    std::vector<int> powers;
  };

  Kind kind = Kind::Constant;
  double amplitude = 0.0;      // constant value / peak height
  Vec center;                  // Gaussian and bump centre
  double width = 1.0;          // Gaussian: exp(-|p-c|^2 / width^2); bump: support radius
  std::vector<Term> terms;     // polynomial

  static Profile constant(double value);
  static Profile polynomial(std::vector<Term> terms);
  static Profile gaussian(double amplitude, const Vec& center, double width);
  static Profile bump(double amplitude, const Vec& center, double radius);

  double operator()(const Vec& p) const;
  int polynomial_degree() const;
  // True if the profile tends to 0 at infinity.
  bool decays() const { return kind == Kind::Gaussian || kind == Kind::Bump || (kind == Kind::Constant && amplitude == 0.0); }
  // Radius (about `center`) outside which the profile is negligible; 0 if it does not decay.
  double extent() const;
};

// Resolves a point set so that H_k coefficients can be read off from point values.
class CoefficientProjector {
 public:
  explicit CoefficientProjector(std::shared_ptr<const HarmonicBasis> basis);

  const std::vector<Vec>& points() const { return points_; }
  // Coefficients of the H_k element with the given values at points().
  std::vector<double> coefficients(const double* values) const;
  double condition_number() const { return condition_; }

 private:
  std::shared_ptr<const HarmonicBasis> basis_;
  std::vector<Vec> points_;
  Eigen::MatrixXd inverse_;
  double condition_ = 0.0;
};

std::shared_ptr<const CoefficientProjector> shared_projector(int m, int k);

enum class BoundaryKind { Hyperplane, Sphere };

// H_k-valued boundary function f(p, w) = sum_j g_j(p) phi_j(w).
class BoundaryDatum {
 public:
  using Component = std::pair<std::size_t, Profile>;

  static BoundaryDatum separable(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind, std::vector<Component> components);
  static BoundaryDatum zero(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind);
  static BoundaryDatum from_coefficients(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind, CoefficientFn fn,
                                         bool decays, Vec center, double extent, std::string description);
  // Projects a raw callable f(p, w) onto H_k in w with a sphere rule of the given degree.
  static BoundaryDatum project_callable(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind,
                                        std::function<double(const Vec&, const Vec&)> f, int degree, bool decays,
                                        Vec center, double extent, std::string description);

  const HarmonicBasis& basis() const { return *basis_; }
  std::shared_ptr<const HarmonicBasis> basis_ptr() const { return basis_; }
  BoundaryKind kind() const { return kind_; }
  int m() const { return basis_->m(); }
  bool decays() const { return decays_; }
  bool is_zero() const { return zero_; }
  const Vec& center() const { return center_; }
  double extent() const { return extent_; }
  const std::string& description() const { return description_; }
  // Components of a separable datum; empty for data built from a coefficient callable.
  bool is_separable() const { return separable_; }
  const std::vector<Component>& components() const { return components_; }

  std::vector<double> coefficients(const Vec& p) const;
  double value(const Vec& p, const Vec& w) const;
  // L^2(S^{m-1}) distance between the raw callable and its projection at p (0 for basis-built data).
  double projection_defect(const Vec& p) const;

 private:
  BoundaryDatum() = default;

  std::shared_ptr<const HarmonicBasis> basis_;
  BoundaryKind kind_ = BoundaryKind::Sphere;
  CoefficientFn fn_;
  std::function<double(const Vec&, const Vec&)> raw_;
  int raw_degree_ = 0;
  bool separable_ = false;
  std::vector<Component> components_;
  bool decays_ = true, zero_ = false;
  Vec center_;
  double extent_ = 1.0;
  std::string description_;
};

struct HalfSpaceQuadrature {
  int panel_order = 12;
  int angular_degree = 16;
  double outer_scale = 8.0;
};

struct BallQuadrature {
  int sphere_degree = 16;      // plain rule used near the centre
  int panel_order = 12;
  int angular_degree = 16;
  double guard = 1e-3;         // required distance of x from the sphere
  double plain_radius = 0.1;   // |x| below this uses the plain sphere rule
};

// Boundary rule adapted to an evaluation point (absolute boundary nodes).
QuadratureRule half_space_rule(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q);
QuadratureRule ball_boundary_rule(const Vec& x, const BallQuadrature& q);

// Part of a boundary datum together with the rule that integrates it.
struct DatumPiece {
  BoundaryDatum part;
  QuadratureRule rule;
};

// A decaying component whose support is wide compared with the kernel seen from x is integrated
// over its own support disk. A bump close to x' gets a rule polar about x' that stops at its
// support edge; every other component shares the rule centred at x'.
std::vector<DatumPiece> half_space_plan(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q);
// A bump on the sphere is integrated over its support cap by a polar rule that stops at the cap
// edge; every other component shares the rule adapted to x.
std::vector<DatumPiece> ball_plan(const BoundaryDatum& h, const Vec& x, const BallQuadrature& q);
std::size_t plan_node_count(const std::vector<DatumPiece>& plan);

// Values of P_H[f](x, nu) at every nu in `nus`, using `rule` on the hyperplane.
std::vector<double> poisson_half_values(const BoundaryDatum& f, const PointHalfSpace& x, const std::vector<Vec>& nus,
                                        const QuadratureRule& rule);
std::vector<double> poisson_half_values(const std::vector<DatumPiece>& plan, const PointHalfSpace& x,
                                        const std::vector<Vec>& nus);
std::vector<double> poisson_ball_values(const BoundaryDatum& h, const Vec& x, const std::vector<Vec>& nus,
                                        const QuadratureRule& rule);
std::vector<double> poisson_ball_values(const std::vector<DatumPiece>& plan, const Vec& x, const std::vector<Vec>& nus);

double poisson_integral_half(const BoundaryDatum& f, const PointHalfSpace& x, const Vec& nu, const HalfSpaceQuadrature& q = {});
double poisson_integral_ball(const BoundaryDatum& h, const Vec& x, const Vec& nu, const BallQuadrature& q = {});
// H_k coefficients of P_H[f](x, .) and P_B[h](x, .).
std::vector<double> poisson_coefficients_half(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q = {});
std::vector<double> poisson_coefficients_ball(const BoundaryDatum& h, const Vec& x, const BallQuadrature& q = {});

// Solution fields; frozen_at() pins the boundary rule for finite differences.
FieldHk solve_half(const BoundaryDatum& f, const HalfSpaceQuadrature& q = {});
FieldHk solve_ball(const BoundaryDatum& h, const BallQuadrature& q = {});

// (m + kp)^{-1}: ratio of ball-measure to sphere-measure p-th powers in u.
double ball_sphere_factor(int m, int k, double p);

enum class UMeasure { Sphere, Ball };

// (int over boundary rule, int over u) |sum_j g_j(p) phi_j(u)|^p, then the 1/p power.
// The ball measure reuses the sphere nodes of the u-rule, so the two stay comparable.
double lp_norm(const std::function<std::vector<double>(const Vec&)>& coefficients, const HarmonicBasis& basis,
               const QuadratureRule& boundary_rule, double p, int u_degree, UMeasure measure = UMeasure::Sphere);
double lp_norm(const BoundaryDatum& f, const QuadratureRule& boundary_rule, double p, int u_degree,
               UMeasure measure = UMeasure::Sphere);

struct ConvergenceRow {
  double parameter = 0.0;  // r for the ball, y for the half-space
  double error = 0.0;      // || solution trace - datum ||_p
};

struct ConvergenceOptions {
  double p = 2.0;
  int u_degree = 8;
  int outer_degree = 12;            // outer sphere rule (ball)
  GradedHyperplaneSpec outer_plane;  // outer hyperplane rule (half-space); centred at datum centre
  BallQuadrature ball;
  HalfSpaceQuadrature half;
};

std::vector<ConvergenceRow> boundary_convergence_report(const BoundaryDatum& h, const std::vector<double>& radii,
                                                        const ConvergenceOptions& options = {});
std::vector<ConvergenceRow> halfspace_convergence_report(const BoundaryDatum& f, const std::vector<double>& heights,
                                                         const ConvergenceOptions& options = {});

// |F(a, nu) - (c/2) int F(a + r zeta, zeta nu zeta) dS(zeta)|.
double mean_value_check(const FieldHk& field, const Vec& a, double r, const Vec& nu, int sphere_degree, double guard = 1e-3);
// |F(a, nu) - (m+2k-2)/((m-2)V) int_{B(a,r)} F(x, R_eta nu) dx|.
double volume_mean_value_check(const FieldHk& field, const Vec& a, double r, const Vec& nu, int ball_degree,
                               double guard = 1e-3, DkOptions options = {});

// Ball datum induced by a hyperplane datum through the upper-half-space Cayley map:
// h(zeta, w) = |g(zeta)|^{2-m} f(psi(zeta), S_{g(zeta)}^{-1} w).
BoundaryDatum induced_ball_datum(const BoundaryDatum& f);

struct TransferSample {
  Vec x, nu;
  double ball_value = 0.0;      // P_B[h](x, nu)
  double weighted_half = 0.0;   // |g(x)|^{2-m} P_H[f](psi(x), S_{g(x)}^{-1} nu)
  double deviation = 0.0;
};

struct TransferReport {
  std::vector<TransferSample> samples;
  double max_deviation = 0.0;
};

TransferReport conformal_transfer_check(const BoundaryDatum& f, const std::vector<Vec>& points, const std::vector<Vec>& nus,
                                        const BallQuadrature& ball = {}, const HalfSpaceQuadrature& half = {});

// Surface Jacobian of the sphere-to-hyperplane Cayley map by finite differences.
double cayley_jacobian_fd(const Vec& zeta, double h = 1e-5);

// |int_{R^{m-1}} F dt' - int_S F(psi(zeta)) J(zeta) dS(zeta)| / |int F| for a Gaussian F.
double jacobian_change_of_variables_check(int m, double width, int sphere_degree);

struct CauchyRow {
  double r = 0.0;
  double gradient = 0.0;  // |grad_x F(a, nu)|
  double sup = 0.0;       // sampled sup of |F| over B(a,r) x B^m
  double ratio = 0.0;     // gradient * r / sup
};

struct CauchyOptions {
  int ball_degree = 2;      // interior samples of B(a, r)
  int sphere_degree = 6;    // samples of the bounding sphere and of nu directions
  double fd_step = 1e-4;    // relative to r
  double guard = 1e-3;
};

std::vector<CauchyRow> cauchy_estimate_probe(const FieldHk& field, const Vec& a, const Vec& nu, const std::vector<double>& radii,
                                             const CauchyOptions& options = {});

// int int |grad_x P_B(0, zeta, omega, nu)| dS(omega) dS(zeta): bounds |grad F(a,nu)| r / sup|F|.
double cauchy_gradient_bound(int m, int k, const Vec& nu, int sphere_degree);

}  // namespace bosonic
