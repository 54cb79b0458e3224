#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bosonic/vec.hpp"

namespace bosonic::test {

inline Vec random_vec(std::mt19937_64& gen, int m, double scale = 1.0) {
  std::normal_distribution<double> n;
  Vec v(m);
  for (int i = 0; i < m; ++i) v[i] = scale * n(gen);
  return v;
}

inline Vec random_unit(std::mt19937_64& gen, int m) { return normalized(random_vec(gen, m)); }

inline Vec random_in_ball(std::mt19937_64& gen, int m, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec p(m);
  do {
    for (int i = 0; i < m; ++i) p[i] = radius * u(gen);
  } while (norm(p) >= radius);
  return p;
}

inline std::vector<double> random_coefficients(std::mt19937_64& gen, std::size_t t) {
  std::normal_distribution<double> n;
  std::vector<double> a(t);
  for (auto& v : a) v = n(gen);
  return a;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace bosonic::test
