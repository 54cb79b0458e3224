#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonic/vec.hpp"

namespace bosonic {

// Element of the Clifford algebra Cl_m with e_i e_j + e_j e_i = -2 delta_ij.
// Blade e_A is addressed by the bitmask of A (bit i-1 set <=> e_i in A).
class Multivector {
 public:
  static constexpr int kMaxAlgebraDim = 16;

  Multivector() = default;
  explicit Multivector(int m);

  static Multivector scalar(int m, double s);
  static Multivector vector(const Vec& x);
  static Multivector blade(int m, std::uint32_t mask, double coefficient = 1.0);

  int dim() const { return m_; }
  std::size_t size() const { return coef_.size(); }
  double operator[](std::uint32_t mask) const { return coef_[mask]; }
  double& operator[](std::uint32_t mask) { return coef_[mask]; }
  const std::vector<double>& coefficients() const { return coef_; }

  double scalar_part() const { return coef_.empty() ? 0.0 : coef_[0]; }
  Vec vector_part() const;
  // Sum of squared coefficients; equals g * conj(g) for Clifford-group elements.
  double norm2() const;
  bool is_vector(double tol = 0.0) const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double s);

 private:
  int m_ = 0;
  std::vector<double> coef_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);

// Sign of e_A e_B relative to e_{A xor B}.
int blade_product_sign(std::uint32_t a, std::uint32_t b);

Multivector geometric_product(const Multivector& a, const Multivector& b);
Multivector reversion(const Multivector& a);
Multivector grade_involution(const Multivector& a);
// Clifford conjugation: reversion composed with grade involution.
Multivector conjugation(const Multivector& a);
// Inverse of a Clifford-group element (versor): conj(g) / (g conj(g)).
Multivector versor_inverse(const Multivector& g);
Vec vector_inverse(const Vec& x);

// a u a / |a|^2 for vectors a, u, evaluated through the algebra.
Vec sandwich(const Vec& a, const Vec& u);
// rev(g) u g / |g|^2; an orthogonal map of R^m for Clifford-group g.
Vec versor_sandwich(const Multivector& g, const Vec& u);
// Inverse of versor_sandwich: g u rev(g) / |g|^2.
Vec versor_sandwich_inverse(const Multivector& g, const Vec& u);

struct MoebiusFactor {
  enum class Kind { Translation, Dilation, Reflection, Inversion };
  Kind kind;
  Vec vector;           // translation vector or reflection normal
  double scale = 1.0;   // dilation factor
};

// Moebius map x -> (a x + b)(c x + d)^{-1}, built only from primitive factors.
// Matrices are normalised so that the pseudo-determinant has modulus one.
class MoebiusTransform {
 public:
  static MoebiusTransform identity(int m);
  static MoebiusTransform translation(const Vec& b);
  static MoebiusTransform dilation(int m, double lambda);
  static MoebiusTransform reflection(const Vec& normal);
  static MoebiusTransform inversion(int m);

  int dim() const { return a_.dim(); }
  const Multivector& a() const { return a_; }
  const Multivector& b() const { return b_; }
  const Multivector& c() const { return c_; }
  const Multivector& d() const { return d_; }
  // Factors in application order: the first entry acts first on x.
  const std::vector<MoebiusFactor>& provenance() const { return factors_; }

  // (*this) o inner: apply inner first.
  MoebiusTransform compose(const MoebiusTransform& inner) const;
  MoebiusTransform then(const MoebiusTransform& outer) const { return outer.compose(*this); }
  MoebiusTransform inverse() const;

  Vec eval(const Vec& x) const;
  // Evaluates the primitive factors one after another (independent check of eval).
  Vec eval_primitives(const Vec& x) const;
  // c x + d; its norm is the local conformal scale |T'(x)|^{-1/2}.
  Multivector denominator(const Vec& x) const;

  std::string describe() const;

 private:
  MoebiusTransform(Multivector a, Multivector b, Multivector c, Multivector d, std::vector<MoebiusFactor> f)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), factors_(std::move(f)) {}

  Multivector a_, b_, c_, d_;
  std::vector<MoebiusFactor> factors_;
};

Vec apply_factor(const MoebiusFactor& f, const Vec& x);

// The Cayley map z = -1/2 (x + e_m)(e_m x + 1)^{-1}; sends the ball to {z_m < 0}.
MoebiusTransform cayley_transform(int m);
// Cayley map followed by z_m -> -z_m; sends the ball to {z_m > 0}.
MoebiusTransform reflected_cayley_transform(int m);

enum class CayleyOrientation { AsWritten, UpperHalfSpace };

Vec cayley(const Vec& x, CayleyOrientation orientation = CayleyOrientation::AsWritten);
Vec cayley_inverse(const Vec& z, CayleyOrientation orientation = CayleyOrientation::AsWritten);
// Surface Jacobian |e_m zeta + 1|^{-2m+2} of the sphere-to-hyperplane map.
double cayley_jacobian(const Vec& zeta);

}  // namespace bosonic
