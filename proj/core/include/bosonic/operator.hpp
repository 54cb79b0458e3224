#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bosonic/harmonic.hpp"

namespace bosonic {

enum class FieldDomain { HalfSpace, Ball, AllSpace };

// x -> (g_1(x), ..., g_t(x)), the H_k coefficients of a field f(x, u) = sum_j g_j(x) phi_j(u).
using CoefficientFn = std::function<std::vector<double>(const Vec&)>;

class FieldHk {
 public:
  FieldHk(std::shared_ptr<const HarmonicBasis> basis, FieldDomain domain, CoefficientFn coefficients, std::string provenance);

  const HarmonicBasis& basis() const { return *basis_; }
  std::shared_ptr<const HarmonicBasis> basis_ptr() const { return basis_; }
  FieldDomain domain() const { return domain_; }
  const std::string& provenance() const { return provenance_; }

  std::vector<double> coefficients(const Vec& x) const;
  double value(const Vec& x, const Vec& nu) const;

  // True when x lies in the open domain at distance > margin from its boundary.
  bool contains(const Vec& x, double margin = 0.0) const;

  // A field with the same values whose discretisation is fixed at x0, so that
  // nearby evaluations vary smoothly (finite differences need this).
  FieldHk frozen_at(const Vec& x0) const;
  void set_freeze(std::function<FieldHk(const Vec&)> freeze) { freeze_ = std::move(freeze); }

  // Coefficients on the boundary of a ball-domain field (the Dirichlet datum), if known.
  bool has_closure() const { return static_cast<bool>(closure_); }
  std::vector<double> closure_coefficients(const Vec& zeta) const;
  void set_closure(CoefficientFn closure) { closure_ = std::move(closure); }

 private:
  std::shared_ptr<const HarmonicBasis> basis_;
  FieldDomain domain_;
  CoefficientFn coef_;
  std::string provenance_;
  std::function<FieldHk(const Vec&)> freeze_;
  CoefficientFn closure_;
};

// Field given by a polynomial in (x, u) whose u-part lies in H_k for every x.
FieldHk polynomial_field(const MultiPoly& p, std::shared_ptr<const HarmonicBasis> basis,
                         FieldDomain domain = FieldDomain::AllSpace);

struct DkOptions {
  bool allow_k0 = false;  // k = 0 is the classical Laplacian; off unless asked for
};

namespace detail {
void check_dk_parameters(int m, int k, const DkOptions& options);
}

// D_k = Lap_x - c1 <u,D_x><D_u,D_x> + c2 |u|^2 <D_u,D_x>^2 applied coefficient-wise.
template <class Scalar>
BasicMultiPoly<Scalar> apply_Dk_poly(const BasicMultiPoly<Scalar>& p, int m, int k, DkOptions options = {}) {
  if (p.dim() != m) throw DimensionMismatch("polynomial dimension differs from m");
  detail::check_dk_parameters(m, k, options);
  const Scalar c1 = Scalar(4) / Scalar(m + 2 * k - 2);
  const Scalar c2 = Scalar(4) / Scalar((m + 2 * k - 2) * (m + 2 * k - 4));

  BasicMultiPoly<Scalar> out = p.laplacian_x();
  BasicMultiPoly<Scalar> mixed(m), quartic(m);
  for (int i = 0; i < m; ++i) {
    const auto dxi = p.derivative_x(i);
    for (int j = 0; j < m; ++j) {
      const auto dxij = dxi.derivative_x(j);
      if (dxij.is_zero()) continue;
      const auto duj = dxij.derivative_u(j);
      mixed += duj.times_variable(Var::U, i);
      quartic += duj.derivative_u(i);
    }
  }
  BasicMultiPoly<Scalar> u2(m);
  for (int i = 0; i < m; ++i) {
    Exponents e{};
    e[m + i] = 2;
    u2.add_term(e, Scalar(1));
  }
  out -= mixed * c1;
  out += (u2 * quartic) * c2;
  return out;
}

// Null solutions of D_k whose x- and u-dependence use disjoint coordinates: a harmonic
// polynomial in the leading x variables times Re/Im (u_a + i u_b)^k in the trailing u variables.
// Empty when m is too small for the construction.
std::vector<RationalPoly> disjoint_null_solutions(int m, int k);

struct MaxwellReport {
  bool agree = false;          // D_1 equals the two-term generalized Maxwell form
  bool third_term_vanishes = false;
  double max_difference = 0.0;
};

MaxwellReport maxwell_reduction_check(int m, const RationalPoly& p);

struct DkResidual {
  std::vector<double> coefficients;  // H_k coefficients of D_k F(x, .)
  double value_at_nu = 0.0;
  double norm = 0.0;                 // Euclidean norm of coefficients
  double h = 0.0;
};

struct RichardsonPair {
  DkResidual coarse, fine;  // steps h and h/2
  double ratio = 0.0;       // coarse.norm / fine.norm; about 4 for a second-order scheme
};

// Finite-difference application of D_k: exact in u on the basis, central differences in x.
class BosonicOperator {
 public:
  explicit BosonicOperator(std::shared_ptr<const HarmonicBasis> basis, DkOptions options = {});

  const HarmonicBasis& basis() const { return *basis_; }

  DkResidual apply_fd(const FieldHk& field, const Vec& x, const Vec& nu, double h = 1e-3) const;
  RichardsonPair richardson(const FieldHk& field, const Vec& x, const Vec& nu, double h = 1e-3) const;

  // Combines a coefficient Hessian (hess[l] is the m x m Hessian of g_l) into D_k coefficients.
  std::vector<double> combine(const std::vector<std::vector<double>>& hess) const;

 private:
  std::shared_ptr<const HarmonicBasis> basis_;
  int m_, k_;
  double c1_, c2_;
  // mixed_[(l*m+i)*m+j]: coefficients of u_i d_j phi_l; quartic_: of |u|^2 d_i d_j phi_l.
  std::vector<std::vector<double>> mixed_, quartic_;
};

inline DkResidual apply_Dk_fd(const FieldHk& field, const Vec& x, const Vec& nu, double h = 1e-3) {
  return BosonicOperator(field.basis_ptr()).apply_fd(field, x, nu, h);
}

}  // namespace bosonic
