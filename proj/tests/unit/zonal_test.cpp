#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bosonic/quadrature.hpp"
#include "bosonic/zonal.hpp"
#include "test_support.hpp"

using namespace bosonic;
using bosonic::test::random_unit;
using bosonic::test::random_vec;

TEST(Gegenbauer, Examples) {
  EXPECT_DOUBLE_EQ(gegenbauer(0, 0.5, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(gegenbauer(1, 1.5, 0.3), 0.9);
  EXPECT_NEAR(gegenbauer(2, 0.5, 1.0), 1.0, 1e-15);
  // Legendre P_2 and P_3.
  EXPECT_NEAR(gegenbauer(2, 0.5, 0.4), 0.5 * (3 * 0.16 - 1), 1e-15);
  EXPECT_NEAR(gegenbauer(3, 0.5, -0.7), 0.5 * (5 * -0.343 - 3 * -0.7), 1e-15);
  // Chebyshev U_2 at lambda = 1.
  EXPECT_NEAR(gegenbauer(2, 1.0, 0.25), 4 * 0.0625 - 1, 1e-15);
}

TEST(Zonal, Examples) {
  const double w3 = 4 * std::numbers::pi;
  EXPECT_NEAR(ZonalKernel(3, 0)(Vec{1, 0, 0}, Vec{0, 1, 0}), 1 / w3, 1e-15);
  for (int m = 3; m <= 6; ++m) {
    const double w = sphere_area(m);
    EXPECT_NEAR(zonal_eval(m, 1, Vec::unit(m, 0), Vec::unit(m, 0)), m / w, 1e-14);
    EXPECT_NEAR(zonal_eval(m, 1, Vec::unit(m, 0), Vec::unit(m, 1)), 0.0, 1e-15);
  }
  EXPECT_NEAR(zonal_oracle(*shared_basis(3, 1), Vec{0, 0, 1}, Vec{0, 0, 1}), 3 / w3, 1e-13);
}

TEST(Zonal, ClosedFormMatchesBasisSum) {
  std::mt19937_64 gen(31);
  for (int m = 3; m <= 5; ++m)
    for (int k = 0; k <= 4; ++k) {
      const auto basis = shared_basis(m, k);
      const ZonalKernel Z(m, k);
      for (int trial = 0; trial < 40; ++trial) {
        const Vec u = random_unit(gen, m), v = random_unit(gen, m);
        EXPECT_NEAR(Z(u, v), zonal_oracle(*basis, u, v), 1e-9) << m << "," << k;
      }
    }
}

TEST(Zonal, SymmetricBihomogeneousAndBounded) {
  std::mt19937_64 gen(32);
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 4; ++k) {
      const ZonalKernel Z(m, k);
      const double bound = static_cast<double>(harmonic_dimension(m, k)) / sphere_area(m);
      EXPECT_NEAR(Z(Vec::unit(m, 0), Vec::unit(m, 0)), bound, 1e-12 * bound);
      for (int trial = 0; trial < 20; ++trial) {
        const Vec u = random_vec(gen, m), v = random_vec(gen, m);
        const double z = Z(u, v);
        EXPECT_NEAR(z, Z(v, u), 1e-12 * std::max(1.0, std::abs(z)));
        EXPECT_NEAR(Z(u * 1.7, v * 0.6), std::pow(1.7 * 0.6, k) * z, 1e-11 * std::max(1.0, std::abs(z)));
        EXPECT_LE(std::abs(Z(normalized(u), normalized(v))), bound * (1 + 1e-9));
      }
    }
}

TEST(Zonal, ReflectionCovariance) {
  std::mt19937_64 gen(33);
  for (int m = 3; m <= 5; ++m) {
    const ZonalKernel Z(m, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec a = random_vec(gen, m), u = random_unit(gen, m), v = random_unit(gen, m);
      EXPECT_NEAR(Z(reflect(a, u), reflect(a, v)), Z(u, v), 1e-10);
    }
  }
}

TEST(Zonal, ReproducesHarmonicPolynomials) {
  std::mt19937_64 gen(34);
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 4; ++k) {
      const auto basis = shared_basis(m, k);
      const ZonalKernel Z(m, k);
      const QuadratureRule rule = sphere_rule(m, 2 * k + 2);
      for (int trial = 0; trial < 5; ++trial) {
        const auto a = bosonic::test::random_coefficients(gen, basis->size());
        const Vec v = random_unit(gen, m);
        const double lhs = integrate(rule, [&](const Vec& u) { return Z(u, v) * basis->combination(a, u); });
        EXPECT_NEAR(lhs, basis->combination(a, v), 1e-9);
      }
    }
}

TEST(Zonal, ReflectedAverageIdentity) {
  // Averaging f(zeta u zeta) over the sphere scales f by (m-2) omega / (m+2k-2).
  std::mt19937_64 gen(35);
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 3; ++k) {
      const auto basis = shared_basis(m, k);
      const QuadratureRule rule = sphere_rule(m, 2 * k + 2);
      const auto a = bosonic::test::random_coefficients(gen, basis->size());
      const Vec u = random_unit(gen, m);
      const double lhs = integrate(rule, [&](const Vec& z) { return basis->combination(a, reflect(z, u)); });
      const double factor = (m - 2) * sphere_area(m) / (m + 2 * k - 2);
      EXPECT_NEAR(lhs, factor * basis->combination(a, u), 1e-8);
    }
}
