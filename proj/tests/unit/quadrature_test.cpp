#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bosonic/harmonic.hpp"
#include "bosonic/quadrature.hpp"
#include "test_support.hpp"

using namespace bosonic;

namespace {

double monomial(const Vec& u, const std::vector<int>& a) {
  double v = 1.0;
  for (int i = 0; i < u.dim(); ++i) v *= std::pow(u[i], a[i]);
  return v;
}

struct BudgetReset {
  ~BudgetReset() { set_node_budget(0); }
};

struct ThreadReset {
  ~ThreadReset() { set_thread_count(1); }
};

}  // namespace

TEST(GaussRules, LegendreIntegratesPolynomialsExactly) {
  const GaussRule& g = gauss_legendre(5);
  for (int d = 0; d <= 9; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
    EXPECT_NEAR(s, d % 2 ? 0.0 : 2.0 / (d + 1), 1e-14) << d;
  }
}

TEST(GaussRules, JacobiWeight) {
  // int (1-t)(1+t)^2 dt over [-1, 1] = 4/3.
  const GaussRule& g = gauss_jacobi(4, 1.0, 2.0);
  double s = 0.0;
  for (double w : g.weights) s += w;
  EXPECT_NEAR(s, 4.0 / 3.0, 1e-14);
}

TEST(SphereRule, Examples) {
  for (int m = 3; m <= 6; ++m) {
    const QuadratureRule rule = sphere_rule(m, 4);
    EXPECT_NEAR(rule.total_weight(), sphere_area(m), 1e-12);
    EXPECT_NEAR(integrate(rule, [](const Vec& u) { return u[0] * u[0]; }), sphere_area(m) / m, 1e-13);
    EXPECT_NEAR(integrate(rule, [](const Vec& u) { return u[0] * u[1]; }), 0.0, 1e-14);
    for (double w : rule.weights) EXPECT_GT(w, 0.0);
    for (const auto& n : rule.nodes) EXPECT_NEAR(norm(n), 1.0, 1e-14);
  }
}

TEST(SphereRule, ExactOnAllMonomialsUpToItsDegree) {
  for (int m = 3; m <= 5; ++m) {
    const QuadratureRule rule = sphere_rule(m, 10);
    for (int d = 0; d <= 10; ++d)
      for (const auto& a : monomial_exponents(m, d))
        EXPECT_NEAR(integrate(rule, [&](const Vec& u) { return monomial(u, a); }), sphere_moment(m, a), 1e-10);
  }
}

TEST(SphereRule, BasisElementsAreOrthogonal) {
  const auto basis = shared_basis(3, 1);
  const QuadratureRule rule = sphere_rule(3, 4);
  EXPECT_NEAR(integrate(rule, [&](const Vec& u) { return basis->evaluate(u)[0] * basis->evaluate(u)[1]; }), 0.0, 1e-14);
}

TEST(BallRule, Moments) {
  for (int m = 3; m <= 5; ++m) {
    const QuadratureRule rule = ball_rule(m, 6);
    const double w = sphere_area(m);
    EXPECT_NEAR(rule.total_weight(), w / m, 1e-12);
    EXPECT_NEAR(integrate(rule, [](const Vec& x) { return norm2(x); }), w / (m + 2), 1e-12);
    EXPECT_NEAR(integrate(rule, [](const Vec& x) { return x[0]; }), 0.0, 1e-14);
    for (const auto& n : rule.nodes) EXPECT_LT(norm(n), 1.0);
  }
}

TEST(BallRule, MappedOntoSubBall) {
  const QuadratureRule rule = mapped_ball(ball_rule(3, 4), Vec{1, 2, 3}, 0.5);
  EXPECT_NEAR(rule.total_weight(), 4.0 / 3.0 * std::numbers::pi * 0.125, 1e-12);
  EXPECT_NEAR(integrate(rule, [](const Vec& x) { return x[1]; }) / rule.total_weight(), 2.0, 1e-12);
}

TEST(HyperplaneRule, PoissonWeightIntegratesToHalfSphere) {
  for (int m = 3; m <= 5; ++m) {
    const QuadratureRule rule = hyperplane_rule(m, 64, 12);
    for (double y : {0.5, 2.0}) {
      const double v = integrate(rule, [&](const Vec& t) { return y / std::pow(norm2(t) + y * y, 0.5 * m); });
      EXPECT_NEAR(v, sphere_area(m) / 2, 1e-8) << "m=" << m << " y=" << y;
    }
    EXPECT_NEAR(integrate(rule, [&](const Vec& t) { return t[0] / std::pow(norm2(t) + 1.0, 0.5 * m); }), 0.0, 1e-12);
  }
}

TEST(HyperplaneRule, GaussianMass) {
  const QuadratureRule rule = graded_hyperplane_rule(3, {0.5, 4.0, 12, 16});
  EXPECT_NEAR(integrate(rule, [](const Vec& t) { return std::exp(-norm2(t)); }), std::numbers::pi, 1e-10);
}

TEST(HyperplaneRule, RefinementReducesError) {
  auto err = [](int order) {
    const QuadratureRule rule = hyperplane_rule(3, order, 8);
    return std::abs(integrate(rule, [](const Vec& t) { return 0.3 / std::pow(norm2(t) + 0.09, 1.5); }) - 2 * std::numbers::pi);
  };
  const double e1 = err(4), e2 = err(8), e3 = err(16);
  EXPECT_LT(e2, e1);
  EXPECT_LT(e3, e2);
}

TEST(DiskRule, AreaAndCentre) {
  const QuadratureRule rule = disk_rule(Vec{0.5, -0.5}, 0.8, 4, 8, 8);
  EXPECT_NEAR(rule.total_weight(), std::numbers::pi * 0.64, 1e-12);
  for (const auto& n : rule.nodes) EXPECT_LE(norm(n - Vec{0.5, -0.5}), 0.8);
  EXPECT_NEAR(integrate(rule, [](const Vec& t) { return t[0]; }) / rule.total_weight(), 0.5, 1e-12);
}

TEST(StarDiskRule, AreaForOffCentrePoles) {
  const Vec c{0.5, -0.5};
  for (const Vec& pole : {c, Vec{0.9, -0.5}, Vec{0.5, 0.25}}) {
    const QuadratureRule rule = star_disk_rule(c, 0.8, pole, 0.05, 8, 64);
    EXPECT_NEAR(rule.total_weight(), std::numbers::pi * 0.64, 1e-10);
    for (const auto& n : rule.nodes) EXPECT_LE(norm(n - c), 0.8 + 1e-12);
    EXPECT_NEAR(integrate(rule, [](const Vec& t) { return t[0]; }) / rule.total_weight(), 0.5, 1e-10);
  }
  EXPECT_THROW(star_disk_rule(c, 0.8, Vec{1.4, -0.5}, 0.05, 8, 16), DomainError);
  EXPECT_THROW(star_disk_rule(c, 0.8, Vec{0.5, -0.5, 0.0}, 0.05, 8, 16), DimensionMismatch);
}

TEST(CapRule, AreaAndMoments) {
  // A cap of angle a on S^2 has area 2 pi (1 - cos a) and mean axis component (1 + cos a) / 2.
  const Vec axis = normalized(Vec{1, 2, 2});
  const double a = 0.7;
  const Vec side = normalized(Vec{2, -1, 0});
  for (double off : {0.0, 0.3, 0.6}) {
    const Vec pole = axis * std::cos(off) + side * std::sin(off);
    const QuadratureRule rule = cap_rule(axis, a, pole, 0.02, 10, 48);
    EXPECT_NEAR(rule.total_weight(), 2 * std::numbers::pi * (1 - std::cos(a)), 1e-10);
    EXPECT_NEAR(integrate(rule, [&](const Vec& z) { return dot(z, axis); }) / rule.total_weight(), 0.5 * (1 + std::cos(a)), 1e-10);
    for (const auto& n : rule.nodes) {
      EXPECT_NEAR(norm(n), 1.0, 1e-14);
      EXPECT_GE(dot(n, axis), std::cos(a) - 1e-12);
    }
  }
  // m = 4: the cap {z_1 > 0} is half of S^3, area pi^2.
  EXPECT_NEAR(cap_rule(Vec::unit(4, 0), std::numbers::pi / 2, normalized(Vec{1, 1, 0, 0}), 0.1, 10, 12).total_weight(),
              std::numbers::pi * std::numbers::pi, 1e-10);
  EXPECT_THROW(cap_rule(axis, a, side, 0.02, 10, 20), DomainError);
  EXPECT_THROW(cap_rule(axis, 3.5, axis, 0.02, 10, 20), DomainError);
}

TEST(GradedSphereRule, PoissonNormalizationNearPole) {
  // int (1 - r^2) / |r eta - zeta|^m dS(zeta) = omega_m for r < 1.
  for (int m = 3; m <= 4; ++m) {
    const Vec eta = normalized(Vec::unit(m, 0) + Vec::unit(m, m - 1));
    for (double r : {0.0, 0.3, 0.7}) {
      const QuadratureRule rule = graded_sphere_rule(eta, {0.05, 16, 16});
      const double v = integrate(rule, [&](const Vec& z) { return (1 - r * r) / std::pow(norm2(eta * r - z), 0.5 * m); });
      EXPECT_NEAR(v, sphere_area(m), 1e-6 * sphere_area(m)) << "m=" << m << " r=" << r;
    }
  }
}

TEST(Integrate, NonFiniteSampleNamesNode) {
  const QuadratureRule rule = sphere_rule(3, 2);
  try {
    integrate(rule, [](const Vec& u) { return u[0] > 0.0 ? std::nan("") : 1.0; });
    FAIL() << "expected NonFiniteSample";
  } catch (const NonFiniteSample& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(Integrate, BitIdenticalAcrossThreadCounts) {
  ThreadReset reset;
  const QuadratureRule rule = sphere_rule(5, 20);
  auto f = [](const Vec& u) { return std::exp(u[0] + 0.3 * u[1]) * std::sin(3 * u[4]); };
  set_thread_count(1);
  const double one = integrate(rule, f);
  set_thread_count(3);
  const double three = integrate(rule, f);
  EXPECT_EQ(one, three);
}

TEST(PairwiseSum, MatchesExactSum) {
  std::vector<double> v(10000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 1000.0, 1e-10);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Budget, OversizedRuleThrows) {
  BudgetReset reset;
  set_node_budget(10);
  EXPECT_THROW(sphere_rule(3, 16), BudgetExceeded);
  EXPECT_THROW(hyperplane_rule(3, 64, 16), BudgetExceeded);
  set_node_budget(0);
  EXPECT_NO_THROW(sphere_rule(3, 16));
}

TEST(Translated, ShiftsNodes) {
  const QuadratureRule base = hyperplane_rule(3, 8, 4);
  const QuadratureRule shifted = translated(base, Vec{1.0, -2.0});
  ASSERT_EQ(base.size(), shifted.size());
  EXPECT_NEAR(norm(shifted.nodes[3] - base.nodes[3] - Vec{1.0, -2.0}), 0.0, 1e-15);
}
