#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosonic/solver.hpp"

namespace bosonic::cli {

inline constexpr int kSchemaVersion = 1;

// Malformed or schema-violating input; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ProblemDomain { Ball, HalfSpace };

struct QuadratureSettings {
  int sphere_degree = 16;
  int panel_order = 12;
  int angular_degree = 16;
  double outer_scale = 8.0;
  int radial_order = 64;   // unscaled hyperplane rule used by the kernel identity checks
  double guard = 1e-3;

  BallQuadrature ball() const;
  HalfSpaceQuadrature half() const;
};

struct ProblemConfig {
  int schema_version = kSchemaVersion;
  int m = 3, k = 1;
  ProblemDomain domain = ProblemDomain::Ball;
  std::vector<BoundaryDatum::Component> components;
  QuadratureSettings quadrature;
  std::vector<Vec> points, nus;
  int random_count = 0;
  std::uint64_t random_seed = 0;
  double tolerance_scale = 1.0;

  BoundaryKind boundary() const { return domain == ProblemDomain::Ball ? BoundaryKind::Sphere : BoundaryKind::Hyperplane; }
  BoundaryDatum datum() const;
  // Explicit points followed by the seeded random ones.
  std::vector<Vec> sample_points() const;
  std::vector<Vec> sample_nus() const;
};

ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

}  // namespace bosonic::cli
