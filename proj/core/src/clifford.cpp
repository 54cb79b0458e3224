#include "bosonic/clifford.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace bosonic {

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

Multivector::Multivector(int m) : m_(m) {
  if (m < 1 || m > kMaxAlgebraDim) throw DomainError("Clifford dimension must lie in [1,16], got " + std::to_string(m));
  coef_.assign(std::size_t{1} << m, 0.0);
}

Multivector Multivector::scalar(int m, double s) {
  Multivector r(m);
  r.coef_[0] = s;
  return r;
}

Multivector Multivector::vector(const Vec& x) {
  Multivector r(x.dim());
  for (int i = 0; i < x.dim(); ++i) r.coef_[std::size_t{1} << i] = x[i];
  return r;
}

Multivector Multivector::blade(int m, std::uint32_t mask, double coefficient) {
  Multivector r(m);
  if (mask >= r.coef_.size()) throw DomainError("blade index out of range");
  r.coef_[mask] = coefficient;
  return r;
}

Vec Multivector::vector_part() const {
  Vec v(m_);
  for (int i = 0; i < m_; ++i) v[i] = coef_[std::size_t{1} << i];
  return v;
}

double Multivector::norm2() const {
  double s = 0.0;
  for (double c : coef_) s += c * c;
  return s;
}

bool Multivector::is_vector(double tol) const {
  for (std::size_t a = 0; a < coef_.size(); ++a)
    if (std::popcount(a) != 1 && std::abs(coef_[a]) > tol) return false;
  return true;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  if (o.m_ != m_) throw DimensionMismatch("multivector dimensions differ");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
  return *this;
}
Multivector& Multivector::operator-=(const Multivector& o) {
  if (o.m_ != m_) throw DimensionMismatch("multivector dimensions differ");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
  return *this;
}
Multivector& Multivector::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }

int blade_product_sign(std::uint32_t a, std::uint32_t b) {
  // Transpositions needed to sort e_A e_B, plus one -1 per repeated generator.
  int swaps = 0;
  for (std::uint32_t s = a >> 1; s != 0; s >>= 1) swaps += std::popcount(s & b);
  swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("geometric product of Cl_" + std::to_string(a.dim()) + " and Cl_" + std::to_string(b.dim()));
  Multivector r(a.dim());
  const std::uint32_t n = static_cast<std::uint32_t>(a.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    double ai = a[i];
    if (ai == 0.0) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      double bj = b[j];
      if (bj == 0.0) continue;
      r[i ^ j] += blade_product_sign(i, j) * ai * bj;
    }
  }
  return r;
}

Multivector reversion(const Multivector& a) {
  Multivector r = a;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    int g = std::popcount(i);
    if ((g * (g - 1) / 2) & 1) r[i] = -r[i];
  }
  return r;
}

Multivector grade_involution(const Multivector& a) {
  Multivector r = a;
  for (std::uint32_t i = 0; i < a.size(); ++i)
    if (std::popcount(i) & 1) r[i] = -r[i];
  return r;
}

Multivector conjugation(const Multivector& a) { return grade_involution(reversion(a)); }

Multivector versor_inverse(const Multivector& g) {
  double n = g.norm2();
  if (n == 0.0) throw DomainError("inverse of the zero multivector");
  return conjugation(g) * (1.0 / n);
}

Vec vector_inverse(const Vec& x) {
  double n = norm2(x);
  if (n == 0.0) throw DomainError("inverse of the zero vector");
  return x * (-1.0 / n);
}

Vec sandwich(const Vec& a, const Vec& u) {
  a.check(u);
  double n = norm2(a);
  if (n == 0.0) throw DomainError("sandwich with the zero vector");
  Multivector A = Multivector::vector(a);
  return geometric_product(geometric_product(A, Multivector::vector(u)), A).vector_part() * (1.0 / n);
}

Vec versor_sandwich(const Multivector& g, const Vec& u) {
  double n = g.norm2();
  if (n == 0.0) throw DomainError("sandwich with the zero multivector");
  return geometric_product(geometric_product(reversion(g), Multivector::vector(u)), g).vector_part() * (1.0 / n);
}

Vec versor_sandwich_inverse(const Multivector& g, const Vec& u) {
  double n = g.norm2();
  if (n == 0.0) throw DomainError("sandwich with the zero multivector");
  return geometric_product(geometric_product(g, Multivector::vector(u)), reversion(g)).vector_part() * (1.0 / n);
}

namespace {

Multivector mat_entry(const Multivector& p, const Multivector& q, const Multivector& r, const Multivector& s) {
  return geometric_product(p, q) + geometric_product(r, s);
}

}  // namespace

MoebiusTransform MoebiusTransform::identity(int m) {
  return {Multivector::scalar(m, 1.0), Multivector(m), Multivector(m), Multivector::scalar(m, 1.0), {}};
}

MoebiusTransform MoebiusTransform::translation(const Vec& b) {
  int m = b.dim();
  return {Multivector::scalar(m, 1.0), Multivector::vector(b), Multivector(m), Multivector::scalar(m, 1.0),
          {MoebiusFactor{MoebiusFactor::Kind::Translation, b, 1.0}}};
}

MoebiusTransform MoebiusTransform::dilation(int m, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("dilation factor must be positive and finite");
  double s = std::sqrt(lambda);
  return {Multivector::scalar(m, s), Multivector(m), Multivector(m), Multivector::scalar(m, 1.0 / s),
          {MoebiusFactor{MoebiusFactor::Kind::Dilation, Vec(m), lambda}}};
}

MoebiusTransform MoebiusTransform::reflection(const Vec& normal) {
  Vec n = normalized(normal);
  int m = n.dim();
  // [[a, 0], [0, a^{-1}]] acts as x -> a x a for unit a.
  return {Multivector::vector(n), Multivector(m), Multivector(m), Multivector::vector(vector_inverse(n)),
          {MoebiusFactor{MoebiusFactor::Kind::Reflection, n, 1.0}}};
}

MoebiusTransform MoebiusTransform::inversion(int m) {
  return {Multivector(m), Multivector::scalar(m, 1.0), Multivector::scalar(m, 1.0), Multivector(m),
          {MoebiusFactor{MoebiusFactor::Kind::Inversion, Vec(m), 1.0}}};
}

MoebiusTransform MoebiusTransform::compose(const MoebiusTransform& in) const {
  if (in.dim() != dim()) throw DimensionMismatch("composing Moebius maps of different dimension");
  std::vector<MoebiusFactor> f = in.factors_;
  f.insert(f.end(), factors_.begin(), factors_.end());
  return {mat_entry(a_, in.a_, b_, in.c_), mat_entry(a_, in.b_, b_, in.d_), mat_entry(c_, in.a_, d_, in.c_),
          mat_entry(c_, in.b_, d_, in.d_), std::move(f)};
}

MoebiusTransform MoebiusTransform::inverse() const {
  MoebiusTransform r = identity(dim());
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    switch (it->kind) {
      case MoebiusFactor::Kind::Translation: r = r.then(translation(-it->vector)); break;
      case MoebiusFactor::Kind::Dilation: r = r.then(dilation(dim(), 1.0 / it->scale)); break;
      case MoebiusFactor::Kind::Reflection: r = r.then(reflection(it->vector)); break;
      case MoebiusFactor::Kind::Inversion: r = r.then(inversion(dim())); break;
    }
  }
  return r;
}

Multivector MoebiusTransform::denominator(const Vec& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("point dimension differs from transform dimension");
  return geometric_product(c_, Multivector::vector(x)) + d_;
}

Vec MoebiusTransform::eval(const Vec& x) const {
  Multivector g = denominator(x);
  double n = g.norm2();
  double scale = std::sqrt(c_.norm2()) * norm(x) + std::sqrt(d_.norm2());
  if (!(n > 0.0) || std::sqrt(n) <= 1e-14 * scale) throw PoleError("Moebius map has a pole at " + to_string(x));
  Multivector num = geometric_product(a_, Multivector::vector(x)) + b_;
  return geometric_product(num, conjugation(g)).vector_part() * (1.0 / n);
}

Vec apply_factor(const MoebiusFactor& f, const Vec& x) {
  switch (f.kind) {
    case MoebiusFactor::Kind::Translation: return x + f.vector;
    case MoebiusFactor::Kind::Dilation: return x * f.scale;
    case MoebiusFactor::Kind::Reflection: return reflect(f.vector, x);
    case MoebiusFactor::Kind::Inversion:
      if (norm2(x) == 0.0) throw PoleError("inversion at the origin");
      return vector_inverse(x);
  }
  return x;
}

Vec MoebiusTransform::eval_primitives(const Vec& x) const {
  Vec y = x;
  for (const auto& f : factors_) y = apply_factor(f, y);
  return y;
}

std::string MoebiusTransform::describe() const {
  std::ostringstream os;
  if (factors_.empty()) return "identity";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " -> ";
    const auto& f = factors_[i];
    switch (f.kind) {
      case MoebiusFactor::Kind::Translation: os << "translate" << to_string(f.vector); break;
      case MoebiusFactor::Kind::Dilation: os << "dilate(" << f.scale << ")"; break;
      case MoebiusFactor::Kind::Reflection: os << "reflect" << to_string(f.vector); break;
      case MoebiusFactor::Kind::Inversion: os << "invert"; break;
    }
  }
  return os.str();
}

MoebiusTransform cayley_transform(int m) {
  Vec em = Vec::unit(m, m - 1);
  return MoebiusTransform::translation(-em)
      .then(MoebiusTransform::inversion(m))
      .then(MoebiusTransform::reflection(em))
      .then(MoebiusTransform::translation(em * 0.5));
}

MoebiusTransform reflected_cayley_transform(int m) {
  return cayley_transform(m).then(MoebiusTransform::reflection(Vec::unit(m, m - 1)));
}

namespace {

const MoebiusTransform& cached_cayley(int m, CayleyOrientation o, bool inverse) {
  // One slot per (m, orientation, direction); built on first use.
  static thread_local std::vector<MoebiusTransform> cache[2][2];
  auto& slots = cache[o == CayleyOrientation::UpperHalfSpace][inverse];
  if (slots.size() <= static_cast<std::size_t>(m)) {
    while (slots.size() <= static_cast<std::size_t>(m)) {
      int d = static_cast<int>(slots.size());
      if (d < 1) {
        slots.push_back(MoebiusTransform::identity(1));
        continue;
      }
      MoebiusTransform t = o == CayleyOrientation::UpperHalfSpace ? reflected_cayley_transform(d) : cayley_transform(d);
      slots.push_back(inverse ? t.inverse() : t);
    }
  }
  return slots[m];
}

}  // namespace

Vec cayley(const Vec& x, CayleyOrientation o) { return cached_cayley(x.dim(), o, false).eval(x); }

Vec cayley_inverse(const Vec& z, CayleyOrientation o) { return cached_cayley(z.dim(), o, true).eval(z); }

double cayley_jacobian(const Vec& zeta) {
  int m = zeta.dim();
  Multivector g = geometric_product(Multivector::vector(Vec::unit(m, m - 1)), Multivector::vector(zeta)) + Multivector::scalar(m, 1.0);
  double n2 = g.norm2();
  if (n2 <= 1e-28) throw PoleError("Cayley Jacobian has a pole at e_m");
  return std::pow(n2, -(m - 1.0));
}

}  // namespace bosonic
