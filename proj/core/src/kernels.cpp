#include "bosonic/kernels.hpp"

#include <cmath>

#include "bosonic/harmonic.hpp"

namespace bosonic {

KernelConstants KernelConstants::of(int m, int k) {
  if (m < 3) throw DomainError("kernel constants need m >= 3");
  if (k < 0) throw DomainError("kernel constants need k >= 0");
  KernelConstants c;
  c.m = m;
  c.k = k;
  c.omega_m = sphere_area(m);
  c.c_mk = 2.0 * (m + 2.0 * k - 2.0) / ((m - 2.0) * c.omega_m);
  return c;
}

PointHalfSpace::PointHalfSpace(const Vec& x_prime, double y) : x_prime_(x_prime), y_(y) {
  if (!(y > 0.0)) throw DomainError("half-space point needs y > 0, got y = " + std::to_string(y));
}

PointHalfSpace PointHalfSpace::from_full(const Vec& x) { return PointHalfSpace(head(x), x[x.dim() - 1]); }

PoissonKernel::PoissonKernel(int m, int k) : constants_(KernelConstants::of(m, k)), zonal_(m, k) {}

double PoissonKernel::half(const PointHalfSpace& x, const Vec& t_prime, const Vec& u, const Vec& v) const {
  const int m = constants_.m;
  if (x.dim() != m || t_prime.dim() != m - 1) throw DimensionMismatch("half-space kernel arguments have wrong dimension");
  Vec d = join(x.x_prime() - t_prime, x.y());
  const double r2 = norm2(d), r = std::sqrt(r2);
  if (r < kSingularGuard) throw DomainError("half-space kernel evaluated at its singular point");
  return constants_.c_mk * x.y() / std::pow(r, m) * zonal_(reflect(d, u), v);
}

double PoissonKernel::ball(const Vec& x, const Vec& zeta, const Vec& omega, const Vec& nu) const {
  const int m = constants_.m;
  if (x.dim() != m || zeta.dim() != m) throw DimensionMismatch("ball kernel arguments have wrong dimension");
  const double xx = norm2(x);
  if (xx >= 1.0 || 1.0 - std::sqrt(xx) < kSingularGuard)
    throw DomainError("ball kernel needs |x| < 1, got |x| = " + std::to_string(std::sqrt(xx)));
  Vec d = x - zeta;
  const double r = norm(d);
  if (r < kSingularGuard) throw DomainError("ball kernel evaluated at its singular point");
  return 0.5 * constants_.c_mk * (1.0 - xx) / std::pow(r, m) * zonal_(reflect(d, omega), nu);
}

RotationPair kernel_rotation_pair(const MoebiusTransform& t, const Vec& x, const Vec& zeta) {
  RotationPair p{t.denominator(x), t.denominator(zeta)};
  if (p.g_zeta.norm2() <= kSingularGuard * kSingularGuard) throw PoleError("rotation pair at a pole: zeta = " + to_string(zeta));
  if (p.g_x.norm2() <= kSingularGuard * kSingularGuard) throw PoleError("rotation pair at a pole: x = " + to_string(x));
  return p;
}

RotationPair kernel_rotation_pair(const Vec& x, const Vec& zeta, CayleyOrientation o) {
  const int m = x.dim();
  return kernel_rotation_pair(o == CayleyOrientation::UpperHalfSpace ? reflected_cayley_transform(m) : cayley_transform(m), x, zeta);
}

}  // namespace bosonic
