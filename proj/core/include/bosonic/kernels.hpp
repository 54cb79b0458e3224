#pragma once

#include "bosonic/clifford.hpp"
#include "bosonic/zonal.hpp"

namespace bosonic {

inline constexpr double kSingularGuard = 1e-12;

struct KernelConstants {
  int m = 0, k = 0;
  double omega_m = 0.0;  // surface area of S^{m-1}
  double c_mk = 0.0;     // 2(m+2k-2) / ((m-2) omega_m)

  static KernelConstants of(int m, int k);
};

// x = (x', y) with y > 0.
class PointHalfSpace {
 public:
  PointHalfSpace(const Vec& x_prime, double y);
  static PointHalfSpace from_full(const Vec& x);

  const Vec& x_prime() const { return x_prime_; }
  double y() const { return y_; }
  int dim() const { return x_prime_.dim() + 1; }
  Vec full() const { return join(x_prime_, y_); }

 private:
  Vec x_prime_;
  double y_;
};

class PoissonKernel {
 public:
  PoissonKernel(int m, int k);

  const KernelConstants& constants() const { return constants_; }
  const ZonalKernel& zonal() const { return zonal_; }

  // c y / |x-t|^m Z_k(R_{x-t} u, v), with t = (t', 0).
  double half(const PointHalfSpace& x, const Vec& t_prime, const Vec& u, const Vec& v) const;
  // (c/2)(1-|x|^2) / |x-zeta|^m Z_k(R_{x-zeta} omega, nu).
  double ball(const Vec& x, const Vec& zeta, const Vec& omega, const Vec& nu) const;

 private:
  KernelConstants constants_;
  ZonalKernel zonal_;
};

// The sandwich maps S_{g(zeta)} (acting on u) and S_{g(x)} (acting on v) for a Moebius map
// with denominator g(p) = c p + d.
struct RotationPair {
  Multivector g_x, g_zeta;

  Vec omega(const Vec& u) const { return versor_sandwich(g_zeta, u); }
  Vec nu(const Vec& v) const { return versor_sandwich(g_x, v); }
  Vec omega_inverse(const Vec& w) const { return versor_sandwich_inverse(g_zeta, w); }
  Vec nu_inverse(const Vec& w) const { return versor_sandwich_inverse(g_x, w); }
};

RotationPair kernel_rotation_pair(const MoebiusTransform& transform, const Vec& x, const Vec& zeta);
RotationPair kernel_rotation_pair(const Vec& x, const Vec& zeta,
                                  CayleyOrientation orientation = CayleyOrientation::AsWritten);

}  // namespace bosonic
