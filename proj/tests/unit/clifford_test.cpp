#include <gtest/gtest.h>

#include <cmath>

#include "bosonic/clifford.hpp"
#include "bosonic/solver.hpp"
#include "test_support.hpp"

using namespace bosonic;
using bosonic::test::random_vec;

namespace {

Multivector e(int m, int i) { return Multivector::vector(Vec::unit(m, i)); }

void expect_mv_near(const Multivector& a, const Multivector& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  for (std::uint32_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "blade " << i;
}

void expect_vec_near(const Vec& a, const Vec& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}

Multivector random_mv(std::mt19937_64& gen, int m) {
  std::normal_distribution<double> n;
  Multivector a(m);
  for (std::uint32_t b = 0; b < a.size(); ++b) a[b] = n(gen);
  return a;
}

}  // namespace

TEST(Clifford, GeneratorsAnticommuteExhaustively) {
  for (int m = 1; m <= 6; ++m)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Multivector s = geometric_product(e(m, i), e(m, j)) + geometric_product(e(m, j), e(m, i));
        expect_mv_near(s, Multivector::scalar(m, i == j ? -2.0 : 0.0), 0.0);
      }
}

TEST(Clifford, BasisProducts) {
  const int m = 3;
  expect_mv_near(geometric_product(e(m, 0), e(m, 0)), Multivector::scalar(m, -1.0), 0.0);
  expect_mv_near(geometric_product(e(m, 0), e(m, 1)), Multivector::blade(m, 0b011), 0.0);
  expect_mv_near(geometric_product(e(m, 1), e(m, 0)), Multivector::blade(m, 0b011, -1.0), 0.0);
}

TEST(Clifford, VectorSquaresToMinusNormSquared) {
  const Multivector x = Multivector::vector(Vec{2.0, 3.0});
  expect_mv_near(geometric_product(x, x), Multivector::scalar(2, -13.0), 0.0);
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = random_vec(gen, 5);
    expect_mv_near(geometric_product(Multivector::vector(v), Multivector::vector(v)), Multivector::scalar(5, -norm2(v)), 1e-12);
  }
}

TEST(Clifford, GeometricProductIsAssociative) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_mv(gen, 4), b = random_mv(gen, 4), c = random_mv(gen, 4);
    expect_mv_near(geometric_product(geometric_product(a, b), c), geometric_product(a, geometric_product(b, c)), 1e-11);
  }
}

TEST(Clifford, ReversionExamples) {
  expect_mv_near(reversion(Multivector::scalar(3, 5.0)), Multivector::scalar(3, 5.0), 0.0);
  expect_mv_near(reversion(Multivector::blade(3, 0b111)), Multivector::blade(3, 0b111, -1.0), 0.0);
  const Multivector e12 = Multivector::blade(4, 0b0011), e34 = Multivector::blade(4, 0b1100);
  expect_mv_near(reversion(geometric_product(e12, e34)), Multivector::blade(4, 0b1111), 0.0);
  expect_mv_near(geometric_product(reversion(e34), reversion(e12)), Multivector::blade(4, 0b1111), 0.0);
}

TEST(Clifford, ReversionIsAnInvolutiveAntiAutomorphism) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_mv(gen, 5), b = random_mv(gen, 5);
    expect_mv_near(reversion(reversion(a)), a, 0.0);
    expect_mv_near(reversion(geometric_product(a, b)), geometric_product(reversion(b), reversion(a)), 1e-11);
  }
}

TEST(Clifford, VectorInverseExamples) {
  expect_vec_near(vector_inverse(Vec{1, 0, 0}), Vec{-1, 0, 0}, 0.0);
  expect_vec_near(vector_inverse(Vec{2, 0, 0}), Vec{-0.5, 0, 0}, 1e-16);
  expect_vec_near(vector_inverse(Vec{1, 1, 0}), Vec{-0.5, -0.5, 0}, 1e-16);
  EXPECT_THROW(vector_inverse(Vec{0, 0, 0}), DomainError);
}

TEST(Clifford, VectorInverseIsTwoSided) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = random_vec(gen, 4);
    const auto p = geometric_product(Multivector::vector(v), Multivector::vector(vector_inverse(v)));
    expect_mv_near(p, Multivector::scalar(4, 1.0), 1e-12);
  }
}

TEST(Clifford, VersorInverse) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = geometric_product(Multivector::vector(random_vec(gen, 4)), Multivector::vector(random_vec(gen, 4)));
    expect_mv_near(geometric_product(g, versor_inverse(g)), Multivector::scalar(4, 1.0), 1e-11);
  }
}

TEST(Clifford, SandwichReflects) {
  expect_vec_near(sandwich(Vec{1, 0, 0}, Vec{0, 1, 0}), Vec{0, 1, 0}, 0.0);
  expect_vec_near(sandwich(Vec{1, 0, 0}, Vec{1, 0, 0}), Vec{-1, 0, 0}, 0.0);
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a = random_vec(gen, 5), u = random_vec(gen, 5);
    const Vec s = sandwich(a, u);
    EXPECT_NEAR(norm(s), norm(u), 1e-12 * norm(u));
    expect_vec_near(s, reflect(a, u), 1e-12);
    expect_vec_near(sandwich(a, s), u, 1e-12);
  }
  EXPECT_THROW(sandwich(Vec{0, 0, 0}, Vec{1, 0, 0}), DomainError);
}

TEST(Clifford, VersorSandwichIsOrthogonalAndInvertible) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    // A product of vectors lies in the Clifford group.
    const auto g = geometric_product(geometric_product(Multivector::vector(random_vec(gen, 4)), Multivector::vector(random_vec(gen, 4))),
                                     Multivector::vector(random_vec(gen, 4)));
    const Vec u = random_vec(gen, 4), v = random_vec(gen, 4);
    EXPECT_NEAR(dot(versor_sandwich(g, u), versor_sandwich(g, v)), dot(u, v), 1e-10);
    expect_vec_near(versor_sandwich_inverse(g, versor_sandwich(g, u)), u, 1e-11);
  }
}

TEST(Clifford, DimensionMismatchThrows) {
  EXPECT_THROW(geometric_product(e(3, 0), e(4, 0)), DimensionMismatch);
}

TEST(Moebius, PrimitiveExamples) {
  const auto I = MoebiusTransform::identity(3);
  expect_vec_near(I.eval(Vec{0.3, -2, 5}), Vec{0.3, -2, 5}, 0.0);
  expect_vec_near(MoebiusTransform::translation(Vec{1, 2, 3}).eval(Vec{1, 1, 1}), Vec{2, 3, 4}, 1e-15);
  expect_vec_near(MoebiusTransform::dilation(3, 2.0).eval(Vec{1, -1, 0.5}), Vec{2, -2, 1}, 1e-15);
  expect_vec_near(MoebiusTransform::reflection(Vec{0, 0, 2}).eval(Vec{1, 2, 3}), Vec{1, 2, -3}, 1e-15);
  // The inversion is x -> x^{-1} = -x / |x|^2.
  expect_vec_near(MoebiusTransform::inversion(3).eval(Vec{2, 0, 0}), Vec{-0.5, 0, 0}, 1e-15);
}

TEST(Moebius, PoleThrows) {
  EXPECT_THROW(MoebiusTransform::inversion(3).eval(Vec{0, 0, 0}), PoleError);
}

TEST(Moebius, MatrixAgreesWithFactorChain) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 3 + trial % 2;
    auto T = MoebiusTransform::identity(m);
    for (int s = 0; s < 3; ++s) {
      const Vec v = random_vec(gen, m);
      switch (kind(gen)) {
        case 0: T = T.then(MoebiusTransform::translation(v)); break;
        case 1: T = T.then(MoebiusTransform::dilation(m, 0.5 + norm(v))); break;
        case 2: T = T.then(MoebiusTransform::reflection(v)); break;
        default: T = T.then(MoebiusTransform::inversion(m)); break;
      }
    }
    const Vec x = random_vec(gen, m);
    const Vec tx = T.eval(x);
    EXPECT_LE(norm(tx - T.eval_primitives(x)), 1e-10 * std::max(1.0, norm(tx)));
    EXPECT_LE(norm(T.inverse().eval(tx) - x), 1e-9 * std::max(1.0, norm(x)));
  }
}

TEST(Moebius, DistanceIdentity) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto T = MoebiusTransform::inversion(3).then(MoebiusTransform::translation(random_vec(gen, 3)))
                       .then(MoebiusTransform::inversion(3));
    const Vec x = random_vec(gen, 3), z = random_vec(gen, 3);
    const double rhs = norm(x - z) / std::sqrt(T.denominator(x).norm2() * T.denominator(z).norm2());
    EXPECT_NEAR(norm(T.eval(x) - T.eval(z)), rhs, 1e-10 * rhs);
  }
}

TEST(Cayley, Examples) {
  expect_vec_near(cayley(Vec{0, 0, -1}), Vec{0, 0, 0}, 1e-15);
  expect_vec_near(cayley(Vec{0, 0, 0}), Vec{0, 0, -0.5}, 1e-15);
  expect_vec_near(cayley(Vec{0, 0, 0}, CayleyOrientation::UpperHalfSpace), Vec{0, 0, 0.5}, 1e-15);
  EXPECT_THROW(cayley(Vec{0, 0, 1}), PoleError);
}

TEST(Cayley, SphereMapsToHyperplaneAndBallToHalfSpace) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 50; ++trial) {
    Vec zeta = bosonic::test::random_unit(gen, 4);
    if (zeta[3] > 0.9) zeta[3] = -zeta[3];
    EXPECT_NEAR(cayley(zeta)[3], 0.0, 1e-12);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = bosonic::test::random_in_ball(gen, 3, 1.0);
    const Vec z = cayley(x, CayleyOrientation::UpperHalfSpace);
    EXPECT_GT(z[2], 0.0);
    EXPECT_LE(norm(cayley_inverse(z, CayleyOrientation::UpperHalfSpace) - x), 1e-12);
    EXPECT_LE(norm(cayley_inverse(cayley(x)) - x), 1e-12);
  }
}

TEST(Cayley, JacobianClosedForm) {
  for (int m = 3; m <= 6; ++m) EXPECT_NEAR(cayley_jacobian(-Vec::unit(m, m - 1)), std::pow(2.0, -2 * m + 2), 1e-15);
  EXPECT_NEAR(cayley_jacobian(Vec{1, 0, 0}), 0.25, 1e-15);
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    Vec zeta = bosonic::test::random_unit(gen, 3);
    if (zeta[2] > 0.9) zeta[2] = -zeta[2];
    EXPECT_NEAR(cayley_jacobian_fd(zeta) / cayley_jacobian(zeta), 1.0, 1e-6);
  }
}
