#include "bosonic/zonal.hpp"

namespace bosonic {

double gegenbauer(int n, double lambda, double t) {
  if (n < 0) throw DomainError("Gegenbauer degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * lambda * t;
  for (int j = 2; j <= n; ++j) {
    double next = (2.0 * (j + lambda - 1.0) * t * cur - (j + 2.0 * lambda - 2.0) * prev) / j;
    prev = cur;
    cur = next;
  }
  return cur;
}

ZonalKernel::ZonalKernel(int m, int k) : m_(m), k_(k), lambda_(0.5 * (m - 2)) {
  if (m < 3) throw DomainError("zonal kernel needs m >= 3, got " + std::to_string(m));
  if (k < 0) throw DomainError("zonal kernel needs k >= 0");
  z_ = (2.0 * k + m - 2.0) / ((m - 2.0) * sphere_area(m));
}

double ZonalKernel::operator()(const Vec& u, const Vec& v) const {
  if (u.dim() != m_ || v.dim() != m_) throw DimensionMismatch("zonal kernel arguments must have dimension m");
  if (k_ == 0) return z_;
  // Homogeneous form H_n = |u|^n |v|^n C_n(<u,v>/(|u||v|)); no square roots needed.
  const double s = dot(u, v), q = norm2(u) * norm2(v);
  double prev = 1.0, cur = 2.0 * lambda_ * s;
  for (int n = 2; n <= k_; ++n) {
    double next = (2.0 * (n + lambda_ - 1.0) * s * cur - (n + 2.0 * lambda_ - 2.0) * q * prev) / n;
    prev = cur;
    cur = next;
  }
  return z_ * cur;
}

double zonal_oracle(const HarmonicBasis& basis, const Vec& u, const Vec& v) {
  auto a = basis.evaluate(u), b = basis.evaluate(v);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace bosonic
