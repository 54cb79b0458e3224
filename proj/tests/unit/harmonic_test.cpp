#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bosonic/harmonic.hpp"
#include "bosonic/quadrature.hpp"
#include "test_support.hpp"

using namespace bosonic;

namespace {

constexpr double kPi = std::numbers::pi;

Exponents u_exponents(int m, std::initializer_list<int> powers) {
  Exponents e{};
  int i = 0;
  for (int p : powers) e[m + i++] = static_cast<std::uint8_t>(p);
  return e;
}

MultiPoly random_u_poly(std::mt19937_64& gen, int m, int degree) {
  std::normal_distribution<double> n;
  MultiPoly p(m);
  for (const auto& a : monomial_exponents(m, degree)) {
    Exponents e{};
    for (int i = 0; i < m; ++i) e[m + i] = static_cast<std::uint8_t>(a[i]);
    p.add_term(e, n(gen));
  }
  return p;
}

}  // namespace

TEST(Polynomial, ArithmeticAndDerivatives) {
  const int m = 3;
  const MultiPoly x1 = MultiPoly::variable(m, Var::X, 0), u2 = MultiPoly::variable(m, Var::U, 1);
  const MultiPoly p = x1 * x1 * u2 + MultiPoly::constant(m, 3.0);
  EXPECT_DOUBLE_EQ(p.evaluate(Vec{2, 0, 0}, Vec{0, 5, 0}), 23.0);
  EXPECT_EQ(p.derivative_x(0), x1 * u2 * 2.0);
  EXPECT_TRUE(p.derivative_u(0).is_zero());
  EXPECT_EQ(p.laplacian_x(), u2 * 2.0);
  EXPECT_EQ(p.degree(Var::X), 2);
  EXPECT_EQ(p.degree(Var::U), 1);
  EXPECT_FALSE(p.homogeneous(Var::X, 2));
  EXPECT_THROW(p + MultiPoly(4), DimensionMismatch);
}

TEST(Polynomial, LaplacianExamples) {
  const int m = 3;
  const MultiPoly u1 = MultiPoly::variable(m, Var::U, 0), u2 = MultiPoly::variable(m, Var::U, 1);
  EXPECT_TRUE((u1 * u1 - u2 * u2).laplacian_u().is_zero());
  EXPECT_EQ((u1 * u1).laplacian_u(), MultiPoly::constant(m, 2.0));
  EXPECT_TRUE((u1 * u2).laplacian_u().is_zero());
}

TEST(Polynomial, RationalArithmeticIsExact) {
  const RationalPoly u1 = RationalPoly::variable(3, Var::U, 0);
  const RationalPoly third = u1 * Rational(1, 3);
  EXPECT_TRUE((third * Rational(3) - u1).is_zero());
  EXPECT_DOUBLE_EQ(to_double(third).evaluate(Vec(3), Vec{3, 0, 0}), 1.0);
}

TEST(Harmonic, SphereAreas) {
  EXPECT_NEAR(sphere_area(2), 2 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2 * kPi * kPi, 1e-13);
  EXPECT_NEAR(sphere_area(5), 8 * kPi * kPi / 3, 1e-13);
}

TEST(Harmonic, SphereMomentExamples) {
  EXPECT_NEAR(sphere_moment(3, {0, 0, 0}), 4 * kPi, 1e-14);
  EXPECT_NEAR(sphere_moment(3, {2, 0, 0}), 4 * kPi / 3, 1e-14);
  EXPECT_EQ(sphere_moment(3, {1, 0, 0}), 0.0);
  EXPECT_EQ(sphere_moment(4, {2, 1, 0, 0}), 0.0);
  for (int m = 3; m <= 6; ++m) {
    std::vector<int> a(m, 0);
    a[0] = 2;
    EXPECT_NEAR(sphere_moment(m, a), sphere_area(m) / m, 1e-13);
  }
}

TEST(Harmonic, SphereMomentsMatchQuadrature) {
  for (int m = 3; m <= 5; ++m) {
    const QuadratureRule rule = sphere_rule(m, 8);
    for (int d = 0; d <= 8; ++d)
      for (const auto& a : monomial_exponents(m, d)) {
        const double q = integrate(rule, [&](const Vec& u) {
          double v = 1.0;
          for (int i = 0; i < m; ++i) v *= std::pow(u[i], a[i]);
          return v;
        });
        EXPECT_NEAR(q, sphere_moment(m, a), 1e-12) << "m=" << m << " degree " << d;
      }
  }
}

TEST(Harmonic, DimensionExamples) {
  EXPECT_EQ(harmonic_dimension(3, 1), 3u);
  EXPECT_EQ(harmonic_dimension(3, 2), 5u);
  EXPECT_EQ(harmonic_dimension(5, 3), 30u);
  EXPECT_EQ(harmonic_dimension(4, 0), 1u);
  for (int m = 3; m <= 7; ++m)
    for (int k = 2; k <= 6; ++k)
      EXPECT_EQ(harmonic_dimension(m, k), monomial_count(m, k) - monomial_count(m, k - 2));
}

TEST(Harmonic, GeneratorsAreExactlyHarmonicAndHomogeneous) {
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 4; ++k) {
      const HarmonicBasis basis(m, k);
      ASSERT_EQ(basis.size(), harmonic_dimension(m, k));
      ASSERT_EQ(basis.exact_generators().size(), basis.size());
      for (const auto& g : basis.exact_generators()) {
        EXPECT_TRUE(g.laplacian_u().is_zero());
        EXPECT_TRUE(g.homogeneous(Var::U, k));
        EXPECT_EQ(g.degree(Var::X), 0);
      }
      for (const auto& p : basis.elements()) EXPECT_TRUE(p.homogeneous(Var::U, k));
    }
}

TEST(Harmonic, BasisIsOrthonormal) {
  for (int m = 3; m <= 5; ++m)
    for (int k = 0; k <= 4; ++k) {
      const HarmonicBasis basis(m, k);
      const Eigen::MatrixXd G = basis.gram();
      EXPECT_LE((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-10) << m << "," << k;
    }
}

TEST(Harmonic, EvaluateMatchesElements) {
  const auto basis = shared_basis(4, 3);
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec u = bosonic::test::random_vec(gen, 4);
    const auto vals = basis->evaluate(u);
    for (std::size_t j = 0; j < basis->size(); ++j) EXPECT_NEAR(vals[j], basis->element(j).evaluate(Vec(4), u), 1e-12);
  }
}

TEST(Harmonic, SharedBasisIsCached) {
  EXPECT_EQ(shared_basis(3, 2).get(), shared_basis(3, 2).get());
}

TEST(Harmonic, BudgetRefusesHugeBases) {
  BasisBudget tiny;
  tiny.max_monomials = 10;
  EXPECT_THROW(HarmonicBasis(5, 4, tiny), BudgetExceeded);
}

TEST(Expansion, BasisElementHasUnitCoefficient) {
  const auto basis = shared_basis(3, 2);
  const Expansion ex = expand_in_basis(basis->element(1), *basis);
  for (std::size_t j = 0; j < basis->size(); ++j) EXPECT_NEAR(ex.coefficients[j], j == 1 ? 1.0 : 0.0, 1e-12);
  EXPECT_LE(ex.residual, 1e-12);
}

TEST(Expansion, ZeroPolynomial) {
  const auto basis = shared_basis(3, 2);
  const Expansion ex = expand_in_basis(MultiPoly(3), *basis);
  for (double c : ex.coefficients) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(ex.residual, 0.0);
}

TEST(Expansion, RoundTripsRandomHarmonicPolynomials) {
  std::mt19937_64 gen(22);
  for (int m = 3; m <= 5; ++m) {
    const auto basis = shared_basis(m, 3);
    const auto a = bosonic::test::random_coefficients(gen, basis->size());
    MultiPoly p(m);
    for (std::size_t j = 0; j < a.size(); ++j) p += basis->element(j) * a[j];
    const Expansion ex = expand_in_basis(p, *basis);
    EXPECT_LE(bosonic::test::max_abs_diff(ex.coefficients, a), 1e-11);
    EXPECT_LE(ex.residual, 1e-11);
  }
}

TEST(Expansion, NonHarmonicInputLeavesResidual) {
  const auto basis = shared_basis(3, 2);
  const MultiPoly u1sq = MultiPoly::monomial(3, u_exponents(3, {2, 0, 0}), 1.0);
  EXPECT_GT(expand_in_basis(u1sq, *basis).residual, 0.1);
  std::mt19937_64 gen(23);
  EXPECT_GT(expand_in_basis(random_u_poly(gen, 3, 2), *basis).residual, 1e-3);
}
