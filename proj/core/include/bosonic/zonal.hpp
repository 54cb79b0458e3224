#pragma once

#include "bosonic/harmonic.hpp"
#include "bosonic/vec.hpp"

namespace bosonic {

// Gegenbauer polynomial C_n^lambda(t) by the three-term recurrence.
double gegenbauer(int n, double lambda, double t);

// Reproducing kernel of H_k on S^{m-1} (unnormalised dS), extended bihomogeneously.
class ZonalKernel {
 public:
  ZonalKernel(int m, int k);

  int m() const { return m_; }
  int k() const { return k_; }
  double normalization() const { return z_; }

  double operator()(const Vec& u, const Vec& v) const;

 private:
  int m_, k_;
  double lambda_, z_;
};

inline double zonal_eval(int m, int k, const Vec& u, const Vec& v) { return ZonalKernel(m, k)(u, v); }

// sum_j phi_j(u) phi_j(v) over an orthonormal basis.
double zonal_oracle(const HarmonicBasis& basis, const Vec& u, const Vec& v);

}  // namespace bosonic
