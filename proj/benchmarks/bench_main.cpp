#include <benchmark/benchmark.h>

#include <random>

#include "bosonic/harmonic.hpp"
#include "bosonic/quadrature.hpp"
#include "bosonic/solver.hpp"
#include "bosonic/zonal.hpp"

using namespace bosonic;

namespace {

Vec unit(std::mt19937_64& gen, int m) {
  std::normal_distribution<double> n;
  Vec v(m);
  for (int i = 0; i < m; ++i) v[i] = n(gen);
  return normalized(v);
}

void BM_ZonalKernel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), k = static_cast<int>(state.range(1));
  const ZonalKernel Z(m, k);
  std::mt19937_64 gen(1);
  const Vec u = unit(gen, m), v = unit(gen, m);
  for (auto _ : state) benchmark::DoNotOptimize(Z(u, v));
}
BENCHMARK(BM_ZonalKernel)->Args({3, 2})->Args({5, 4})->Args({8, 6});

void BM_BasisConstruction(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    HarmonicBasis b(m, k);
    benchmark::DoNotOptimize(b.size());
  }
}
BENCHMARK(BM_BasisConstruction)->Args({3, 2})->Args({4, 3})->Args({5, 3})->Unit(benchmark::kMillisecond);

void BM_SphereRule(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), degree = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sphere_rule(m, degree).size());
}
BENCHMARK(BM_SphereRule)->Args({3, 16})->Args({4, 16})->Args({5, 12})->Unit(benchmark::kMicrosecond);

void BM_BallCoefficients(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto basis = shared_basis(m, 2);
  const BoundaryDatum h = BoundaryDatum::separable(basis, BoundaryKind::Sphere,
                                                   {{0, Profile::gaussian(1.0, Vec::unit(m, 0), 0.7)},
                                                    {1, Profile::bump(1.0, Vec::unit(m, 1), 0.6)}});
  Vec x(m);
  x[0] = 0.3;
  x[1] = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(poisson_coefficients_ball(h, x));
}
BENCHMARK(BM_BallCoefficients)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_HalfSpaceCoefficients(benchmark::State& state) {
  const auto basis = shared_basis(3, 2);
  const BoundaryDatum f = BoundaryDatum::separable(basis, BoundaryKind::Hyperplane,
                                                   {{0, Profile::gaussian(1.0, Vec(2), 1.0)}, {2, Profile::bump(0.5, Vec{0.5, -0.5}, 0.8)}});
  const PointHalfSpace x(Vec{0.4, -0.3}, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_coefficients_half(f, x));
}
BENCHMARK(BM_HalfSpaceCoefficients)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
