#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bosonic/polynomial.hpp"

namespace bosonic {

// Surface area of S^{m-1}: 2 pi^{m/2} / Gamma(m/2).
double sphere_area(int m);

// Integral of prod u_i^{alpha_i} over S^{m-1} against the unnormalised measure.
double sphere_moment(int m, const std::vector<int>& alpha);

// dim of the space of degree-k harmonic polynomials in m variables.
std::size_t harmonic_dimension(int m, int k);

// Number of monomials of total degree d in m variables.
std::size_t monomial_count(int m, int d);

// All u-exponent vectors of total degree d, u_1-heavy first.
std::vector<std::vector<int>> monomial_exponents(int m, int d);

// Sphere inner product of two polynomials that depend on u only.
double sphere_inner_product(const MultiPoly& p, const MultiPoly& q);

struct BasisBudget {
  std::size_t max_monomials = 20000;
};

// Orthonormal basis of H_k with respect to dS on S^{m-1}.
class HarmonicBasis {
 public:
  HarmonicBasis(int m, int k, BasisBudget budget = {});

  int m() const { return m_; }
  int k() const { return k_; }
  std::size_t size() const { return elements_.size(); }

  const std::vector<MultiPoly>& elements() const { return elements_; }
  const MultiPoly& element(std::size_t j) const { return elements_.at(j); }
  // Integer-coefficient null-space generators of the u-Laplacian (before orthonormalisation).
  const std::vector<RationalPoly>& exact_generators() const { return generators_; }
  // Sphere Gram matrix of elements(), recomputed from moments.
  Eigen::MatrixXd gram() const;

  // Writes phi_1(u)..phi_t(u) into out (length size()).
  void evaluate(const Vec& u, double* out) const;
  std::vector<double> evaluate(const Vec& u) const;
  double combination(const std::vector<double>& coefficients, const Vec& u) const;

  // Values of every degree-k monomial at u, in monomials() order.
  void monomial_values(const Vec& u, double* out) const;
  const std::vector<std::vector<int>>& monomials() const { return monomials_; }
  // Row j holds the coefficients of phi_j over monomials().
  const Eigen::MatrixXd& coefficient_matrix() const { return coef_; }

 private:
  int m_, k_;
  std::vector<std::vector<int>> monomials_;
  std::vector<RationalPoly> generators_;
  std::vector<MultiPoly> elements_;
  Eigen::MatrixXd coef_;
};

// Cached, shared instance per (m, k).
std::shared_ptr<const HarmonicBasis> shared_basis(int m, int k);

struct Expansion {
  std::vector<double> coefficients;
  // Largest coefficient of p - sum c_j phi_j.
  double residual = 0.0;
};

// Coefficients c_j = <p, phi_j> on the sphere; residual flags p outside H_k.
Expansion expand_in_basis(const MultiPoly& p, const HarmonicBasis& basis);

}  // namespace bosonic
