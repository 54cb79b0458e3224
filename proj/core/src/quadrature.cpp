#include "bosonic/quadrature.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

namespace bosonic {

namespace {

std::atomic<std::size_t> g_node_budget{0};

void check_budget(std::size_t nodes, const std::string& what) {
  std::size_t cap = g_node_budget.load();
  if (cap != 0 && nodes > cap)
    throw BudgetExceeded(what + " needs " + std::to_string(nodes) + " nodes, budget is " + std::to_string(cap));
}

GaussRule golub_welsch(int n, double a, double b) {
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 1);
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int j = 1; j < n; ++j) {
    double s = 2.0 * j + ab;
    diag(j) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int j = 1; j < n; ++j) {
    double s = 2.0 * j + ab;
    double b2;
    if (j == 1) {
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(j - 1) = std::sqrt(b2);
  }
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  if (n == 1) {
    r.nodes[0] = diag(0);
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error("Gauss-Jacobi eigenproblem failed");
  for (int j = 0; j < n; ++j) {
    r.nodes[j] = es.eigenvalues()(j);
    double v = es.eigenvectors()(0, j);
    r.weights[j] = mu0 * v * v;
  }
  return r;
}

std::string fmt(const char* what, int m, int a, int b = -1) {
  std::ostringstream os;
  os << what << "(m=" << m << ", " << a;
  if (b >= 0) os << ", " << b;
  os << ")";
  return os.str();
}

}  // namespace

double QuadratureRule::total_weight() const { return pairwise_sum(weights); }

const GaussRule& gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi parameters must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, golub_welsch(n, alpha, beta)).first;
  return it->second;
}

const GaussRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

void set_node_budget(std::size_t max_nodes) { g_node_budget = max_nodes; }
std::size_t node_budget() { return g_node_budget.load(); }

namespace {

std::size_t sphere_rule_size(int m, int degree) {
  if (m == 2) return static_cast<std::size_t>(degree + 1);
  return static_cast<std::size_t>(degree / 2 + 1) * sphere_rule_size(m - 1, degree);
}

QuadratureRule build_sphere_rule(int m, int degree) {
  QuadratureRule r;
  r.domain = Domain::Sphere;
  r.m = m;
  r.exactness_degree = degree;
  r.description = fmt("sphere_rule", m, degree);
  if (m == 2) {
    const int n = degree + 1;
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * std::numbers::pi * j / n;
      r.nodes.push_back(Vec{std::cos(th), std::sin(th)});
      r.weights.push_back(2.0 * std::numbers::pi / n);
    }
    return r;
  }
  const auto& g = gauss_jacobi(degree / 2 + 1, 0.5 * (m - 3), 0.5 * (m - 3));
  QuadratureRule sub = sphere_rule(m - 1, degree);
  r.nodes.reserve(g.nodes.size() * sub.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double t = g.nodes[i], s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < sub.size(); ++j) {
      Vec u(m);
      u[0] = t;
      for (int c = 1; c < m; ++c) u[c] = s * sub.nodes[j][c - 1];
      r.nodes.push_back(u);
      r.weights.push_back(g.weights[i] * sub.weights[j]);
    }
  }
  return r;
}

}  // namespace

QuadratureRule sphere_rule(int m, int degree) {
  if (m < 2 || m > kMaxDim) throw DomainError("sphere rule needs 2 <= m <= 16");
  if (degree < 0) throw DomainError("sphere rule degree must be non-negative");
  check_budget(sphere_rule_size(m, degree), fmt("sphere_rule", m, degree));
  static std::mutex mu;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({m, degree});
    if (it != cache.end()) return it->second;
  }
  QuadratureRule r = build_sphere_rule(m, degree);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(m, degree), r);
  return r;
}

QuadratureRule ball_rule(int m, int degree) {
  if (m < 2 || m > kMaxDim) throw DomainError("ball rule needs 2 <= m <= 16");
  if (degree < 0) throw DomainError("ball rule degree must be non-negative");
  const int nr = degree / 2 + 1;
  check_budget(static_cast<std::size_t>(nr) * sphere_rule_size(m, degree), fmt("ball_rule", m, degree));
  const auto& g = gauss_jacobi(nr, 0.0, m - 1.0);
  QuadratureRule s = sphere_rule(m, degree);
  QuadratureRule r;
  r.domain = Domain::Ball;
  r.m = m;
  r.exactness_degree = degree;
  r.description = fmt("ball_rule", m, degree);
  const double scale = std::ldexp(1.0, -m);
  for (int i = 0; i < nr; ++i) {
    const double rho = 0.5 * (1.0 + g.nodes[i]);
    for (std::size_t j = 0; j < s.size(); ++j) {
      r.nodes.push_back(s.nodes[j] * rho);
      r.weights.push_back(g.weights[i] * scale * s.weights[j]);
    }
  }
  return r;
}

QuadratureRule hyperplane_rule(int m, int radial_order, int angular_degree) {
  if (m < 3 || m > kMaxDim) throw DomainError("hyperplane rule needs 3 <= m <= 16");
  if (radial_order < 1) throw DomainError("hyperplane rule needs a positive radial order");
  check_budget(static_cast<std::size_t>(radial_order) * sphere_rule_size(m - 1, angular_degree),
               fmt("hyperplane_rule", m, radial_order, angular_degree));
  const auto& g = gauss_legendre(radial_order);
  QuadratureRule ang = sphere_rule(m - 1, angular_degree);
  QuadratureRule r;
  r.domain = Domain::Hyperplane;
  r.m = m;
  r.description = fmt("hyperplane_rule", m, radial_order, angular_degree);
  for (int i = 0; i < radial_order; ++i) {
    const double s = 0.5 * (1.0 + g.nodes[i]);
    const double rad = s / (1.0 - s);
    const double w = 0.5 * g.weights[i] / ((1.0 - s) * (1.0 - s)) * std::pow(rad, m - 2);
    for (std::size_t j = 0; j < ang.size(); ++j) {
      r.nodes.push_back(ang.nodes[j] * rad);
      r.weights.push_back(w * ang.weights[j]);
    }
  }
  return r;
}

QuadratureRule graded_hyperplane_rule(int m, const GradedHyperplaneSpec& spec) {
  if (m < 3 || m > kMaxDim) throw DomainError("hyperplane rule needs 3 <= m <= 16");
  if (!(spec.inner > 0.0) || !(spec.outer > 0.0) || spec.panel_order < 1)
    throw DomainError("graded hyperplane rule needs positive inner/outer radii and panel order");
  std::vector<double> edges{0.0};
  for (double e = spec.inner;; e *= 2.0) {
    edges.push_back(e);
    if (e >= spec.outer) break;
  }
  const std::size_t panels = edges.size() - 1;
  const std::size_t ang_size = sphere_rule_size(m - 1, spec.angular_degree);
  std::ostringstream desc;
  desc << "graded_hyperplane_rule(m=" << m << ", inner=" << spec.inner << ", outer=" << spec.outer
       << ", order=" << spec.panel_order << ", angular=" << spec.angular_degree << ")";
  check_budget((panels + 1) * static_cast<std::size_t>(spec.panel_order) * ang_size, desc.str());

  const auto& g = gauss_legendre(spec.panel_order);
  QuadratureRule ang = sphere_rule(m - 1, spec.angular_degree);
  QuadratureRule r;
  r.domain = Domain::Hyperplane;
  r.m = m;
  r.description = desc.str();
  auto emit = [&](double rad, double w) {
    w *= std::pow(rad, m - 2);
    for (std::size_t j = 0; j < ang.size(); ++j) {
      r.nodes.push_back(ang.nodes[j] * rad);
      r.weights.push_back(w * ang.weights[j]);
    }
  };
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = edges[p], b = edges[p + 1], h = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) emit(a + h * (1.0 + g.nodes[i]), h * g.weights[i]);
  }
  // Tail [b, inf) through r = b / (1 - s).
  const double b = edges.back();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = 0.5 * (1.0 + g.nodes[i]);
    emit(b / (1.0 - s), 0.5 * g.weights[i] * b / ((1.0 - s) * (1.0 - s)));
  }
  return r;
}

QuadratureRule disk_rule(const Vec& center, double radius, int panels, int panel_order, int angular_degree) {
  const int m = center.dim() + 1;
  if (m < 3 || m > kMaxDim) throw DomainError("disk rule needs a centre in R^{m-1} with 3 <= m <= 16");
  if (!(radius > 0.0) || panels < 1 || panel_order < 1) throw DomainError("disk rule needs positive radius, panels and order");
  std::ostringstream desc;
  desc << "disk_rule(m=" << m << ", centre=" << to_string(center) << ", radius=" << radius << ", panels=" << panels
       << ", order=" << panel_order << ", angular=" << angular_degree << ")";
  check_budget(static_cast<std::size_t>(panels) * static_cast<std::size_t>(panel_order) * sphere_rule_size(m - 1, angular_degree),
               desc.str());
  const auto& g = gauss_legendre(panel_order);
  QuadratureRule ang = sphere_rule(m - 1, angular_degree);
  QuadratureRule r;
  r.domain = Domain::Hyperplane;
  r.m = m;
  r.description = desc.str();
  const double h = 0.5 * radius / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double rad = radius * p / panels + h * (1.0 + g.nodes[i]);
      const double w = h * g.weights[i] * std::pow(rad, m - 2);
      for (std::size_t j = 0; j < ang.size(); ++j) {
        r.nodes.push_back(center + ang.nodes[j] * rad);
        r.weights.push_back(w * ang.weights[j]);
      }
    }
  return r;
}

QuadratureRule star_disk_rule(const Vec& center, double radius, const Vec& pole, double inner, int panel_order,
                              int angular_degree) {
  const int m = center.dim() + 1;
  if (m < 3 || m > kMaxDim) throw DomainError("star disk rule needs a centre in R^{m-1} with 3 <= m <= 16");
  if (pole.dim() != center.dim()) throw DimensionMismatch("star disk rule pole and centre differ in dimension");
  const Vec off = pole - center;
  const double slack = radius * radius - norm2(off);
  if (!(radius > 0.0) || !(inner > 0.0) || panel_order < 1 || !(slack > 0.0))
    throw DomainError("star disk rule needs positive radii and order and a pole inside the disk");
  std::ostringstream desc;
  desc << "star_disk_rule(m=" << m << ", centre=" << to_string(center) << ", radius=" << radius << ", pole=" << to_string(pole)
       << ", inner=" << inner << ", order=" << panel_order << ", angular=" << angular_degree << ")";
  const std::size_t ang_size = sphere_rule_size(m - 1, angular_degree);
  const double far = radius + norm(off);
  std::size_t panels = 4;
  for (double e = inner; e < far; e *= 2.0) ++panels;
  check_budget(panels * static_cast<std::size_t>(panel_order) * ang_size, desc.str());

  const auto& g = gauss_legendre(panel_order);
  QuadratureRule ang = sphere_rule(m - 1, angular_degree);
  QuadratureRule r;
  r.domain = Domain::Hyperplane;
  r.m = m;
  r.description = desc.str();
  std::vector<double> edges;
  for (std::size_t j = 0; j < ang.size(); ++j) {
    const Vec& w = ang.nodes[j];
    const double b = dot(off, w);
    // Distance from the pole to the circle along w.
    const double reach = -b + std::sqrt(b * b + slack);
    edges.assign(1, 0.0);
    for (double e = inner; e < 0.75 * reach; e *= 2.0) edges.push_back(e);
    edges.push_back(reach);
    // Panels wider than a quarter of the ray are split so the support edge stays resolved.
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double a = edges[p], span = edges[p + 1] - a;
      const int pieces = std::max(1, static_cast<int>(std::ceil(span / (0.25 * reach) - 1e-12)));
      const double h = 0.5 * span / pieces;
      for (int piece = 0; piece < pieces; ++piece)
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          const double rad = a + 2.0 * h * piece + h * (1.0 + g.nodes[i]);
          r.nodes.push_back(pole + w * rad);
          r.weights.push_back(h * g.weights[i] * std::pow(rad, m - 2) * ang.weights[j]);
        }
    }
  }
  return r;
}

namespace {

// Unit directions of `ang` (a rule on S^{m-2}) carried into the tangent space at `pole` by the
// Householder reflection taking e_1 to the pole.
std::vector<Vec> tangent_directions(const Vec& pole, const QuadratureRule& ang) {
  const int m = pole.dim();
  Vec v = Vec::unit(m, 0) - pole;
  const double vv = norm2(v);
  std::vector<Vec> out;
  out.reserve(ang.size());
  for (const auto& w : ang.nodes) {
    Vec y(m);
    for (int c = 1; c < m; ++c) y[c] = w[c - 1];
    if (vv > 0.0) y = y - v * (2.0 * dot(v, y) / vv);
    out.push_back(y);
  }
  return out;
}

}  // namespace

QuadratureRule graded_sphere_rule(const Vec& pole_in, const GradedSphereSpec& spec) {
  const int m = pole_in.dim();
  if (m < 3 || m > kMaxDim) throw DomainError("graded sphere rule needs 3 <= m <= 16");
  if (!(spec.width > 0.0) || spec.panel_order < 1) throw DomainError("graded sphere rule needs positive width and order");
  const Vec pole = normalized(pole_in);
  const double pi = std::numbers::pi;
  std::vector<double> edges{0.0};
  double e = spec.width;
  while (e < 0.25 && e < pi) {
    edges.push_back(e);
    e *= 2.0;
  }
  const double start = edges.back();
  const int uniform = static_cast<int>(std::ceil((pi - start) / 0.5));
  for (int i = 1; i <= uniform; ++i) edges.push_back(start + (pi - start) * i / uniform);

  const std::size_t ang_size = sphere_rule_size(m - 1, spec.angular_degree);
  std::ostringstream desc;
  desc << "graded_sphere_rule(m=" << m << ", width=" << spec.width << ", order=" << spec.panel_order
       << ", angular=" << spec.angular_degree << ")";
  check_budget((edges.size() - 1) * static_cast<std::size_t>(spec.panel_order) * ang_size, desc.str());

  QuadratureRule ang = sphere_rule(m - 1, spec.angular_degree);
  const std::vector<Vec> tangent = tangent_directions(pole, ang);

  const auto& g = gauss_legendre(spec.panel_order);
  QuadratureRule r;
  r.domain = Domain::Sphere;
  r.m = m;
  r.description = desc.str();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], h = 0.5 * (edges[p + 1] - a);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double th = a + h * (1.0 + g.nodes[i]);
      const double c = std::cos(th), s = std::sin(th);
      const double w = h * g.weights[i] * std::pow(s, m - 2);
      for (std::size_t j = 0; j < tangent.size(); ++j) {
        r.nodes.push_back(pole * c + tangent[j] * s);
        r.weights.push_back(w * ang.weights[j]);
      }
    }
  }
  return r;
}

QuadratureRule cap_rule(const Vec& axis_in, double cap_angle, const Vec& pole_in, double inner, int panel_order,
                        int angular_degree) {
  const int m = axis_in.dim();
  if (m < 3 || m > kMaxDim) throw DomainError("cap rule needs 3 <= m <= 16");
  if (pole_in.dim() != m) throw DimensionMismatch("cap rule pole and axis differ in dimension");
  const double pi = std::numbers::pi;
  if (!(cap_angle > 0.0 && cap_angle < pi) || !(inner > 0.0) || panel_order < 1)
    throw DomainError("cap rule needs a cap angle in (0, pi), a positive inner width and order");
  const Vec axis = normalized(axis_in), pole = normalized(pole_in);
  const double cos_cap = std::cos(cap_angle);
  if (!(dot(axis, pole) > cos_cap)) throw DomainError("cap rule pole must lie inside the cap");
  std::ostringstream desc;
  desc << "cap_rule(m=" << m << ", axis=" << to_string(axis) << ", angle=" << cap_angle << ", pole=" << to_string(pole)
       << ", inner=" << inner << ", order=" << panel_order << ", angular=" << angular_degree << ")";
  const std::size_t ang_size = sphere_rule_size(m - 1, angular_degree);
  std::size_t panels = 4;
  for (double e = inner; e < pi; e *= 2.0) ++panels;
  check_budget(panels * static_cast<std::size_t>(panel_order) * ang_size, desc.str());

  const auto& g = gauss_legendre(panel_order);
  QuadratureRule ang = sphere_rule(m - 1, angular_degree);
  const std::vector<Vec> tangent = tangent_directions(pole, ang);
  QuadratureRule r;
  r.domain = Domain::Sphere;
  r.m = m;
  r.description = desc.str();
  const double a_pole = dot(pole, axis);
  std::vector<double> edges;
  for (std::size_t j = 0; j < tangent.size(); ++j) {
    const Vec& w = tangent[j];
    // Along cos(t) pole + sin(t) w the axis component is R cos(t - phi); the ray leaves the cap
    // where that drops to cos(cap_angle).
    const double b = dot(w, axis), R = std::hypot(a_pole, b), phi = std::atan2(b, a_pole);
    const double reach = std::min(pi, phi + std::acos(std::clamp(cos_cap / R, -1.0, 1.0)));
    edges.assign(1, 0.0);
    for (double e = inner; e < 0.75 * reach; e *= 2.0) edges.push_back(e);
    edges.push_back(reach);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double a = edges[p], span = edges[p + 1] - a;
      const int pieces = std::max(1, static_cast<int>(std::ceil(span / (0.25 * reach) - 1e-12)));
      const double h = 0.5 * span / pieces;
      for (int piece = 0; piece < pieces; ++piece)
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          const double th = a + 2.0 * h * piece + h * (1.0 + g.nodes[i]);
          r.nodes.push_back(pole * std::cos(th) + w * std::sin(th));
          r.weights.push_back(h * g.weights[i] * std::pow(std::sin(th), m - 2) * ang.weights[j]);
        }
    }
  }
  return r;
}

QuadratureRule translated(const QuadratureRule& rule, const Vec& shift) {
  QuadratureRule r = rule;
  for (auto& n : r.nodes) n += shift;
  r.description += " + " + to_string(shift);
  return r;
}

QuadratureRule mapped_ball(const QuadratureRule& rule, const Vec& center, double radius) {
  if (rule.domain != Domain::Ball) throw DomainError("mapped_ball expects a ball rule");
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  QuadratureRule r = rule;
  const double scale = std::pow(radius, rule.m);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = center + r.nodes[i] * radius;
    r.weights[i] *= scale;
  }
  std::ostringstream os;
  os << " on B(" << to_string(center) << ", " << radius << ")";
  r.description += os.str();
  return r;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

void throw_non_finite(const QuadratureRule& rule, std::size_t node, double value) {
  std::ostringstream os;
  os << "non-finite integrand value " << value << " at node " << node << ' ' << to_string(rule.nodes[node]) << " of "
     << rule.description;
  throw NonFiniteSample(os.str());
}

}  // namespace bosonic
