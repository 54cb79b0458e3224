#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

#include "bosonic/error.hpp"

namespace bosonic {

inline constexpr int kMaxDim = 16;

// Small fixed-capacity real vector; avoids heap traffic in quadrature loops.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int n) : n_(n) {
    if (n < 0 || n > kMaxDim) throw DomainError("vector dimension out of range: " + std::to_string(n));
  }
  Vec(std::initializer_list<double> values) : Vec(static_cast<int>(values.size())) {
    int i = 0;
    for (double v : values) c_[i++] = v;
  }

  static Vec unit(int n, int i) {
    Vec v(n);
    v[i] = 1.0;
    return v;
  }

  int dim() const { return n_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  const double* data() const { return c_.data(); }

  Vec& operator+=(const Vec& o) {
    check(o);
    for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    check(o);
    for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
  }

  void check(const Vec& o) const {
    if (o.n_ != n_) throw DimensionMismatch("vector dimensions differ: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

 private:
  std::array<double, kMaxDim> c_{};
  int n_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
  a.check(b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return a * (1.0 / n);
}

// Reflection of u across the hyperplane orthogonal to a: u - 2<u,a>a/|a|^2.
// Equals the Clifford sandwich a u a / |a|^2.
inline Vec reflect(const Vec& a, const Vec& u) {
  double aa = norm2(a);
  if (aa == 0.0) throw DomainError("reflection through the zero vector");
  return u - a * (2.0 * dot(u, a) / aa);
}

// Prepend/append helpers for half-space points x = (x', y).
inline Vec join(const Vec& head, double last) {
  Vec r(head.dim() + 1);
  for (int i = 0; i < head.dim(); ++i) r[i] = head[i];
  r[head.dim()] = last;
  return r;
}
inline Vec head(const Vec& x) {
  Vec r(x.dim() - 1);
  for (int i = 0; i < r.dim(); ++i) r[i] = x[i];
  return r;
}

std::string to_string(const Vec& v);

}  // namespace bosonic
