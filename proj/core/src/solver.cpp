#include "bosonic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace bosonic {

// ---------------------------------------------------------------- profiles

Profile Profile::constant(double value) {
  Profile p;
  p.kind = Kind::Constant;
  p.amplitude = value;
  return p;
}

Profile Profile::polynomial(std::vector<Term> terms) {
  Profile p;
  p.kind = Kind::Polynomial;
  for (const auto& t : terms)
    for (int e : t.powers)
      if (e < 0) throw DomainError("polynomial profile has a negative power");
  p.terms = std::move(terms);
  return p;
}

Profile Profile::gaussian(double amplitude, const Vec& center, double width) {
  if (!(width > 0.0)) throw DomainError("Gaussian profile needs a positive width");
  Profile p;
  p.kind = Kind::Gaussian;
  p.amplitude = amplitude;
  p.center = center;
  p.width = width;
  return p;
}

Profile Profile::bump(double amplitude, const Vec& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("bump profile needs a positive radius");
  Profile p;
  p.kind = Kind::Bump;
  p.amplitude = amplitude;
  p.center = center;
  p.width = radius;
  return p;
}

double Profile::operator()(const Vec& x) const {
  switch (kind) {
    case Kind::Constant: return amplitude;
    case Kind::Polynomial: {
      double s = 0.0;
      for (const auto& t : terms) {
        if (static_cast<int>(t.powers.size()) > x.dim()) throw DimensionMismatch("polynomial profile has more powers than coordinates");
        double v = t.coefficient;
        for (std::size_t i = 0; i < t.powers.size(); ++i) v *= std::pow(x[static_cast<int>(i)], t.powers[i]);
        s += v;
      }
      return s;
    }
    case Kind::Gaussian: return amplitude * std::exp(-norm2(x - center) / (width * width));
    case Kind::Bump: {
      const double s2 = norm2(x - center) / (width * width);
      return s2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
    }
  }
  return 0.0;
}

int Profile::polynomial_degree() const {
  if (kind != Kind::Polynomial) return 0;
  int d = 0;
  for (const auto& t : terms) {
    if (t.coefficient == 0.0) continue;
    int s = 0;
    for (int e : t.powers) s += e;
    d = std::max(d, s);
  }
  return d;
}

double Profile::extent() const {
  switch (kind) {
    case Kind::Gaussian: return width * std::sqrt(std::log(1e16));
    case Kind::Bump: return width;
    default: return 0.0;
  }
}

// ---------------------------------------------------------------- projector

CoefficientProjector::CoefficientProjector(std::shared_ptr<const HarmonicBasis> basis) : basis_(std::move(basis)) {
  const int m = basis_->m(), k = basis_->k();
  const auto t = static_cast<Eigen::Index>(basis_->size());
  const QuadratureRule cand = sphere_rule(m, 2 * k + 4);
  const auto n = static_cast<Eigen::Index>(cand.size());
  Eigen::MatrixXd A(t, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto phi = basis_->evaluate(cand.nodes[c]);
    for (Eigen::Index j = 0; j < t; ++j) A(j, c) = phi[j];
  }
  // Column pivoting picks a well-spread subset (approximate Fekete points).
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto& perm = qr.colsPermutation().indices();
  Eigen::MatrixXd M(t, t);
  for (Eigen::Index q = 0; q < t; ++q) {
    points_.push_back(cand.nodes[perm[q]]);
    for (Eigen::Index j = 0; j < t; ++j) M(q, j) = A(j, perm[q]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  condition_ = sv(0) / sv(t - 1);
  if (!(condition_ < 1e8)) throw Error("coefficient projector is ill-conditioned: " + std::to_string(condition_));
  inverse_ = M.inverse();
}

std::vector<double> CoefficientProjector::coefficients(const double* values) const {
  const auto t = inverse_.rows();
  std::vector<double> c(static_cast<std::size_t>(t), 0.0);
  for (Eigen::Index j = 0; j < t; ++j) {
    double s = 0.0;
    for (Eigen::Index q = 0; q < t; ++q) s += inverse_(j, q) * values[q];
    c[static_cast<std::size_t>(j)] = s;
  }
  return c;
}

std::shared_ptr<const CoefficientProjector> shared_projector(int m, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const CoefficientProjector>> cache;
  auto basis = shared_basis(m, k);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, k}];
  if (!slot) slot = std::make_shared<const CoefficientProjector>(basis);
  return slot;
}

// ---------------------------------------------------------------- boundary data

namespace {

int boundary_dim(int m, BoundaryKind kind) { return kind == BoundaryKind::Hyperplane ? m - 1 : m; }

void check_boundary_point(const BoundaryDatum& f, const Vec& p) {
  if (p.dim() != boundary_dim(f.m(), f.kind()))
    throw DimensionMismatch("boundary point " + to_string(p) + " has wrong dimension for this datum");
}

}  // namespace

BoundaryDatum BoundaryDatum::separable(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind,
                                       std::vector<Component> components) {
  if (!basis) throw DomainError("boundary datum needs a harmonic basis");
  const int m = basis->m(), pd = boundary_dim(m, kind);
  const std::size_t t = basis->size();
  BoundaryDatum d;
  d.basis_ = basis;
  d.kind_ = kind;
  d.center_ = Vec(pd);
  d.decays_ = true;
  d.zero_ = true;
  std::ostringstream desc;
  int decaying = 0;
  for (const auto& [j, prof] : components) {
    if (j >= t) throw DomainError("basis index " + std::to_string(j) + " out of range; dim H_k = " + std::to_string(t));
    if ((prof.kind == Profile::Kind::Gaussian || prof.kind == Profile::Kind::Bump) && prof.center.dim() != pd)
      throw DimensionMismatch("profile centre has dimension " + std::to_string(prof.center.dim()) + ", boundary points have " +
                              std::to_string(pd));
    if (kind == BoundaryKind::Hyperplane && prof.polynomial_degree() > 0)
      throw DomainError("polynomial profiles of positive degree are unbounded on the hyperplane");
    if (prof.kind == Profile::Kind::Polynomial)
      for (const auto& term : prof.terms)
        if (static_cast<int>(term.powers.size()) > pd) throw DimensionMismatch("polynomial profile has more powers than coordinates");
    if (prof.kind == Profile::Kind::Polynomial) {
      for (const auto& term : prof.terms)
        if (term.coefficient != 0.0) d.zero_ = false;
    } else if (prof.amplitude != 0.0) {
      d.zero_ = false;
    }
    if (!prof.decays()) d.decays_ = false;
    if (prof.kind == Profile::Kind::Gaussian || prof.kind == Profile::Kind::Bump) {
      d.center_ += prof.center;
      ++decaying;
    }
    if (desc.tellp() > 0) desc << " + ";
    desc << "phi_" << j << "*";
    switch (prof.kind) {
      case Profile::Kind::Constant: desc << "const(" << prof.amplitude << ")"; break;
      case Profile::Kind::Polynomial: desc << "poly(deg " << prof.polynomial_degree() << ")"; break;
      case Profile::Kind::Gaussian: desc << "gauss(" << prof.amplitude << ", " << to_string(prof.center) << ", " << prof.width << ")"; break;
      case Profile::Kind::Bump: desc << "bump(" << prof.amplitude << ", " << to_string(prof.center) << ", " << prof.width << ")"; break;
    }
  }
  if (decaying) d.center_ *= 1.0 / decaying;
  d.extent_ = 0.0;
  for (const auto& [j, prof] : components)
    if (prof.decays() && prof.extent() > 0.0) d.extent_ = std::max(d.extent_, norm(prof.center - d.center_) + prof.extent());
  if (d.extent_ == 0.0) d.extent_ = 1.0;
  d.description_ = components.empty() ? "zero" : desc.str();
  d.separable_ = true;
  d.components_ = components;
  d.fn_ = [components, t](const Vec& p) {
    std::vector<double> g(t, 0.0);
    for (const auto& [j, prof] : components) g[j] += prof(p);
    return g;
  };
  return d;
}

BoundaryDatum BoundaryDatum::zero(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind) {
  return separable(std::move(basis), kind, {});
}

BoundaryDatum BoundaryDatum::from_coefficients(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind, CoefficientFn fn,
                                               bool decays, Vec center, double extent, std::string description) {
  if (!basis) throw DomainError("boundary datum needs a harmonic basis");
  if (center.dim() != boundary_dim(basis->m(), kind)) throw DimensionMismatch("datum centre has wrong dimension");
  BoundaryDatum d;
  d.basis_ = std::move(basis);
  d.kind_ = kind;
  d.fn_ = std::move(fn);
  d.decays_ = decays;
  d.center_ = center;
  d.extent_ = extent > 0.0 ? extent : 1.0;
  d.description_ = std::move(description);
  return d;
}

BoundaryDatum BoundaryDatum::project_callable(std::shared_ptr<const HarmonicBasis> basis, BoundaryKind kind,
                                              std::function<double(const Vec&, const Vec&)> f, int degree, bool decays,
                                              Vec center, double extent, std::string description) {
  if (!basis) throw DomainError("boundary datum needs a harmonic basis");
  auto rule = std::make_shared<const QuadratureRule>(sphere_rule(basis->m(), degree));
  auto b = basis;
  CoefficientFn fn = [rule, b, f](const Vec& p) {
    std::vector<double> g(b->size(), 0.0), phi(b->size());
    for (std::size_t q = 0; q < rule->size(); ++q) {
      const double v = rule->weights[q] * f(p, rule->nodes[q]);
      b->evaluate(rule->nodes[q], phi.data());
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += v * phi[j];
    }
    return g;
  };
  BoundaryDatum d = from_coefficients(std::move(basis), kind, std::move(fn), decays, center, extent, std::move(description));
  d.raw_ = std::move(f);
  d.raw_degree_ = degree;
  return d;
}

std::vector<double> BoundaryDatum::coefficients(const Vec& p) const {
  check_boundary_point(*this, p);
  if (zero_) return std::vector<double>(basis_->size(), 0.0);
  auto g = fn_(p);
  if (g.size() != basis_->size()) throw DimensionMismatch("datum returned the wrong number of coefficients");
  return g;
}

double BoundaryDatum::value(const Vec& p, const Vec& w) const { return basis_->combination(coefficients(p), w); }

double BoundaryDatum::projection_defect(const Vec& p) const {
  if (!raw_) return 0.0;
  const auto g = coefficients(p);
  const QuadratureRule rule = sphere_rule(m(), raw_degree_);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double e = raw_(p, rule.nodes[q]) - basis_->combination(g, rule.nodes[q]);
    s += rule.weights[q] * e * e;
  }
  return std::sqrt(std::max(0.0, s));
}

// ---------------------------------------------------------------- rules

QuadratureRule half_space_rule(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q) {
  if (f.kind() != BoundaryKind::Hyperplane) throw DomainError("half-space rule needs a hyperplane datum");
  if (x.dim() != f.m()) throw DimensionMismatch("evaluation point has wrong dimension");
  GradedHyperplaneSpec spec;
  spec.inner = 0.5 * x.y();
  spec.outer = q.outer_scale * std::max({1.0, x.y(), f.extent() + norm(x.x_prime() - f.center())});
  spec.panel_order = q.panel_order;
  spec.angular_degree = q.angular_degree;
  return translated(graded_hyperplane_rule(f.m(), spec), x.x_prime());
}

std::vector<DatumPiece> half_space_plan(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q) {
  if (!f.is_separable() || f.is_zero()) return {{f, half_space_rule(f, x, q)}};
  std::vector<DatumPiece> plan;
  std::vector<BoundaryDatum::Component> near;
  for (const auto& comp : f.components()) {
    const Profile& p = comp.second;
    if (p.kind == Profile::Kind::Gaussian || p.kind == Profile::Kind::Bump) {
      const double rho = p.extent(), d = norm(x.x_prime() - p.center);
      // Width of the kernel where it meets the support.
      const double s = std::hypot(std::max(0.0, d - rho), x.y());
      if (s >= 0.5 * rho) {
        // Angular nodes must resolve a kernel of width s across the disk.
        const int angular = static_cast<int>(std::ceil(q.angular_degree * std::clamp(rho / s, 1.0, 2.0)));
        plan.push_back({BoundaryDatum::separable(f.basis_ptr(), f.kind(), {comp}),
                        disk_rule(p.center, rho, 4, q.panel_order, angular)});
        continue;
      }
      if (p.kind == Profile::Kind::Bump) {
        // Rays from a pole near x' stop on the support circle, so no panel straddles the edge.
        // The pole keeps a tenth of the radius from the edge to bound the angular variation.
        const double reach = std::min(d, 0.9 * rho);
        const Vec pole = d > 0.0 ? p.center + (x.x_prime() - p.center) * (reach / d) : p.center;
        const double inner = 0.5 * std::hypot(norm(x.x_prime() - pole), x.y());
        const int angular = static_cast<int>(std::ceil(q.angular_degree * std::clamp(std::sqrt(rho / (rho - reach)), 1.0, 2.5)));
        plan.push_back({BoundaryDatum::separable(f.basis_ptr(), f.kind(), {comp}),
                        star_disk_rule(p.center, rho, pole, inner, q.panel_order, angular)});
        continue;
      }
    }
    near.push_back(comp);
  }
  if (!near.empty()) {
    BoundaryDatum part = BoundaryDatum::separable(f.basis_ptr(), f.kind(), near);
    QuadratureRule rule = half_space_rule(part, x, q);
    plan.insert(plan.begin(), {std::move(part), std::move(rule)});
  }
  return plan;
}

std::size_t plan_node_count(const std::vector<DatumPiece>& plan) {
  std::size_t n = 0;
  for (const auto& piece : plan) n += piece.rule.size();
  return n;
}

namespace {

double guarded_radius(const Vec& x, const BallQuadrature& q) {
  const double r = norm(x);
  if (!(r < 1.0 - q.guard))
    throw DomainError("ball evaluation point " + to_string(x) + " is within the guard distance " + std::to_string(q.guard) +
                      " of the sphere");
  return r;
}

double angle_between(const Vec& a, const Vec& b) { return std::acos(std::clamp(dot(a, b), -1.0, 1.0)); }

}  // namespace

QuadratureRule ball_boundary_rule(const Vec& x, const BallQuadrature& q) {
  const double r = guarded_radius(x, q);
  if (r <= q.plain_radius) return sphere_rule(x.dim(), q.sphere_degree);
  GradedSphereSpec spec;
  spec.width = 1.0 - r;
  spec.panel_order = q.panel_order;
  spec.angular_degree = q.angular_degree;
  return graded_sphere_rule(x, spec);
}

std::vector<DatumPiece> ball_plan(const BoundaryDatum& h, const Vec& x, const BallQuadrature& q) {
  if (h.kind() != BoundaryKind::Sphere) throw DomainError("ball plan needs a sphere datum");
  if (x.dim() != h.m()) throw DimensionMismatch("evaluation point has wrong dimension");
  const double r = guarded_radius(x, q);
  if (!h.is_separable() || h.is_zero()) return {{h, ball_boundary_rule(x, q)}};
  std::vector<DatumPiece> plan;
  std::vector<BoundaryDatum::Component> near;
  for (const auto& comp : h.components()) {
    const Profile& p = comp.second;
    const double cn = p.kind == Profile::Kind::Bump ? norm(p.center) : 0.0;
    // On the sphere |z - c| < rho is the cap <z, c/|c|> > cos_cap.
    const double cos_cap = cn > 0.0 ? (1.0 + cn * cn - p.extent() * p.extent()) / (2.0 * cn) : 1.0;
    if (!(cos_cap > -1.0 && cos_cap < 1.0)) {
      near.push_back(comp);
      continue;
    }
    const double cap = std::acos(cos_cap);
    const Vec axis = p.center * (1.0 / cn);
    Vec pole = axis;
    double inner = 0.25 * cap;
    if (r > q.plain_radius) {
      const Vec xh = x * (1.0 / r);
      const double to_x = angle_between(axis, xh);
      const Vec side = xh - axis * dot(xh, axis);
      if (to_x <= 0.9 * cap) {
        pole = xh;
      } else if (norm(side) > 1e-12) {
        pole = axis * std::cos(0.9 * cap) + normalized(side) * std::sin(0.9 * cap);
      }
      inner = 0.5 * std::hypot(angle_between(pole, xh), 1.0 - r);
    }
    const double off = angle_between(axis, pole);
    const int angular = static_cast<int>(std::ceil(q.angular_degree * std::clamp(std::sqrt(cap / (cap - off)), 1.0, 2.5)));
    plan.push_back({BoundaryDatum::separable(h.basis_ptr(), h.kind(), {comp}),
                    cap_rule(axis, cap, pole, std::min(inner, cap), q.panel_order, angular)});
  }
  if (!near.empty()) {
    BoundaryDatum part = BoundaryDatum::separable(h.basis_ptr(), h.kind(), near);
    plan.insert(plan.begin(), {std::move(part), ball_boundary_rule(x, q)});
  }
  return plan;
}

// ---------------------------------------------------------------- Poisson integrals

namespace {

// sum_i K_i h_i(R_{d_i} nu_q) for every q, where node(i, g, d) returns K_i (weight included),
// fills the H_k coefficients g of h_i and the reflection vector d_i.
template <class NodeFn>
std::vector<double> accumulate(const HarmonicBasis& basis, std::size_t n, const std::vector<Vec>& nus, NodeFn node) {
  const std::size_t t = basis.size(), nm = basis.monomials().size(), nq = nus.size();
  const Eigen::MatrixXd& C = basis.coefficient_matrix();
  const std::size_t chunks = (n + 255) / 256;
  std::vector<double> partial(chunks * nq, 0.0);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    std::vector<double> g(t), p(nm), mono(nm), acc(nq, 0.0);
    Vec d;
    for (std::size_t i = b; i < e; ++i) {
      const double K = node(i, g, d);
      if (K == 0.0) continue;
      std::fill(p.begin(), p.end(), 0.0);
      for (std::size_t j = 0; j < t; ++j) {
        if (g[j] == 0.0) continue;
        for (std::size_t c = 0; c < nm; ++c) p[c] += g[j] * C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      }
      for (std::size_t q = 0; q < nq; ++q) {
        basis.monomial_values(reflect(d, nus[q]), mono.data());
        double s = 0.0;
        for (std::size_t c = 0; c < nm; ++c) s += p[c] * mono[c];
        const double v = K * s;
        if (!std::isfinite(v))
          throw NonFiniteSample("non-finite Poisson integrand at node " + std::to_string(i) + ", d = " + to_string(d));
        acc[q] += v;
      }
    }
    std::copy(acc.begin(), acc.end(), partial.begin() + static_cast<std::ptrdiff_t>((b / 256) * nq));
  });
  std::vector<double> out(nq), column(chunks);
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t c = 0; c < chunks; ++c) column[c] = partial[c * nq + q];
    out[q] = pairwise_sum(column);
  }
  return out;
}

void check_nus(const std::vector<Vec>& nus, int m) {
  for (const auto& v : nus)
    if (v.dim() != m) throw DimensionMismatch("direction " + to_string(v) + " has wrong dimension");
}

}  // namespace

std::vector<double> poisson_half_values(const BoundaryDatum& f, const PointHalfSpace& x, const std::vector<Vec>& nus,
                                        const QuadratureRule& rule) {
  const int m = f.m();
  if (f.kind() != BoundaryKind::Hyperplane) throw DomainError("half-space Poisson integral needs a hyperplane datum");
  if (x.dim() != m) throw DimensionMismatch("evaluation point has wrong dimension");
  if (rule.domain != Domain::Hyperplane || rule.m != m) throw DomainError("half-space Poisson integral needs a hyperplane rule for R^{m-1}");
  check_nus(nus, m);
  if (f.is_zero()) return std::vector<double>(nus.size(), 0.0);
  const double c = KernelConstants::of(m, f.basis().k()).c_mk, y = x.y();
  const Vec xp = x.x_prime();
  return accumulate(f.basis(), rule.size(), nus, [&](std::size_t i, std::vector<double>& g, Vec& d) {
    const Vec& t = rule.nodes[i];
    d = join(xp - t, y);
    const double r2 = norm2(d);
    g = f.coefficients(t);
    return rule.weights[i] * c * y / std::pow(r2, 0.5 * m);
  });
}

std::vector<double> poisson_half_values(const std::vector<DatumPiece>& plan, const PointHalfSpace& x,
                                        const std::vector<Vec>& nus) {
  std::vector<double> out(nus.size(), 0.0);
  for (const auto& piece : plan) {
    const auto v = poisson_half_values(piece.part, x, nus, piece.rule);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += v[q];
  }
  return out;
}

std::vector<double> poisson_ball_values(const BoundaryDatum& h, const Vec& x, const std::vector<Vec>& nus,
                                        const QuadratureRule& rule) {
  const int m = h.m();
  if (h.kind() != BoundaryKind::Sphere) throw DomainError("ball Poisson integral needs a sphere datum");
  if (x.dim() != m) throw DimensionMismatch("evaluation point has wrong dimension");
  if (rule.domain != Domain::Sphere || rule.m != m) throw DomainError("ball Poisson integral needs a sphere rule");
  const double xx = norm2(x);
  if (!(xx < 1.0) || 1.0 - std::sqrt(xx) < kSingularGuard) throw DomainError("ball Poisson integral needs |x| < 1, got " + to_string(x));
  check_nus(nus, m);
  if (h.is_zero()) return std::vector<double>(nus.size(), 0.0);
  const double c = 0.5 * KernelConstants::of(m, h.basis().k()).c_mk * (1.0 - xx);
  return accumulate(h.basis(), rule.size(), nus, [&](std::size_t i, std::vector<double>& g, Vec& d) {
    const Vec& z = rule.nodes[i];
    d = x - z;
    const double r2 = norm2(d);
    if (r2 < kSingularGuard * kSingularGuard) throw DomainError("ball Poisson integral hit its singular point");
    g = h.coefficients(z);
    return rule.weights[i] * c / std::pow(r2, 0.5 * m);
  });
}

std::vector<double> poisson_ball_values(const std::vector<DatumPiece>& plan, const Vec& x, const std::vector<Vec>& nus) {
  std::vector<double> out(nus.size(), 0.0);
  for (const auto& piece : plan) {
    const auto v = poisson_ball_values(piece.part, x, nus, piece.rule);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += v[q];
  }
  return out;
}

double poisson_integral_half(const BoundaryDatum& f, const PointHalfSpace& x, const Vec& nu, const HalfSpaceQuadrature& q) {
  return poisson_half_values(half_space_plan(f, x, q), x, {nu})[0];
}

double poisson_integral_ball(const BoundaryDatum& h, const Vec& x, const Vec& nu, const BallQuadrature& q) {
  return poisson_ball_values(ball_plan(h, x, q), x, {nu})[0];
}

namespace {

std::vector<double> half_coefficients(const std::vector<DatumPiece>& plan, const PointHalfSpace& x) {
  const auto& basis = plan.front().part.basis();
  const auto proj = shared_projector(basis.m(), basis.k());
  const auto v = poisson_half_values(plan, x, proj->points());
  return proj->coefficients(v.data());
}

std::vector<double> ball_coefficients(const std::vector<DatumPiece>& plan, const Vec& x) {
  const auto& basis = plan.front().part.basis();
  const auto proj = shared_projector(basis.m(), basis.k());
  const auto v = poisson_ball_values(plan, x, proj->points());
  return proj->coefficients(v.data());
}

}  // namespace

std::vector<double> poisson_coefficients_half(const BoundaryDatum& f, const PointHalfSpace& x, const HalfSpaceQuadrature& q) {
  return half_coefficients(half_space_plan(f, x, q), x);
}

std::vector<double> poisson_coefficients_ball(const BoundaryDatum& h, const Vec& x, const BallQuadrature& q) {
  return ball_coefficients(ball_plan(h, x, q), x);
}

FieldHk solve_half(const BoundaryDatum& f, const HalfSpaceQuadrature& q) {
  if (f.kind() != BoundaryKind::Hyperplane) throw DomainError("half-space problem needs a hyperplane datum");
  auto fp = std::make_shared<const BoundaryDatum>(f);
  const std::string name = "P_H[" + f.description() + "]";
  FieldHk field(f.basis_ptr(), FieldDomain::HalfSpace,
                [fp, q](const Vec& x) { return poisson_coefficients_half(*fp, PointHalfSpace::from_full(x), q); }, name);
  auto closure = [fp](const Vec& p) { return fp->coefficients(p.dim() == fp->m() ? head(p) : p); };
  field.set_closure(closure);
  field.set_freeze([fp, q, name, closure](const Vec& x0) {
    auto plan = std::make_shared<const std::vector<DatumPiece>>(half_space_plan(*fp, PointHalfSpace::from_full(x0), q));
    FieldHk frozen(fp->basis_ptr(), FieldDomain::HalfSpace,
                   [plan](const Vec& x) { return half_coefficients(*plan, PointHalfSpace::from_full(x)); },
                   name + " frozen at " + to_string(x0));
    frozen.set_closure(closure);
    return frozen;
  });
  return field;
}

FieldHk solve_ball(const BoundaryDatum& h, const BallQuadrature& q) {
  if (h.kind() != BoundaryKind::Sphere) throw DomainError("ball problem needs a sphere datum");
  auto hp = std::make_shared<const BoundaryDatum>(h);
  const std::string name = "P_B[" + h.description() + "]";
  FieldHk field(h.basis_ptr(), FieldDomain::Ball, [hp, q](const Vec& x) { return poisson_coefficients_ball(*hp, x, q); }, name);
  auto closure = [hp](const Vec& z) { return hp->coefficients(normalized(z)); };
  field.set_closure(closure);
  field.set_freeze([hp, q, name, closure](const Vec& x0) {
    auto plan = std::make_shared<const std::vector<DatumPiece>>(ball_plan(*hp, x0, q));
    FieldHk frozen(hp->basis_ptr(), FieldDomain::Ball, [plan](const Vec& x) { return ball_coefficients(*plan, x); },
                   name + " frozen at " + to_string(x0));
    frozen.set_closure(closure);
    return frozen;
  });
  return field;
}

// ---------------------------------------------------------------- L^p norms

double ball_sphere_factor(int m, int k, double p) {
  if (!(p > 0.0)) throw DomainError("L^p exponent must be positive");
  return 1.0 / (m + k * p);
}

double lp_norm(const std::function<std::vector<double>(const Vec&)>& coefficients, const HarmonicBasis& basis,
               const QuadratureRule& boundary_rule, double p, int u_degree, UMeasure measure) {
  if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
  const int m = basis.m();
  const QuadratureRule urule = sphere_rule(m, u_degree);
  // Radial Gauss-Legendre on [0,1], exact for rho^{m-1+kp} when kp is an integer.
  std::vector<double> rho{1.0}, rw{1.0};
  if (measure == UMeasure::Ball) {
    const int n = static_cast<int>(std::ceil((m + basis.k() * p) / 2.0)) + 1;
    const auto& g = gauss_legendre(n);
    rho.clear();
    rw.clear();
    for (int i = 0; i < n; ++i) {
      rho.push_back(0.5 * (1.0 + g.nodes[i]));
      rw.push_back(0.5 * g.weights[i] * std::pow(rho.back(), m - 1));
    }
  }
  std::vector<double> terms(boundary_rule.size());
  parallel_for(boundary_rule.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> inner(urule.size() * rho.size());
    for (std::size_t i = b; i < e; ++i) {
      const auto g = coefficients(boundary_rule.nodes[i]);
      std::size_t n = 0;
      for (std::size_t r = 0; r < rho.size(); ++r)
        for (std::size_t q = 0; q < urule.size(); ++q)
          inner[n++] = rw[r] * urule.weights[q] * std::pow(std::abs(basis.combination(g, urule.nodes[q] * rho[r])), p);
      const double v = boundary_rule.weights[i] * pairwise_sum(inner);
      if (!std::isfinite(v)) throw_non_finite(boundary_rule, i, v);
      terms[i] = v;
    }
  });
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

double lp_norm(const BoundaryDatum& f, const QuadratureRule& boundary_rule, double p, int u_degree, UMeasure measure) {
  return lp_norm([&f](const Vec& x) { return f.coefficients(x); }, f.basis(), boundary_rule, p, u_degree, measure);
}

std::vector<ConvergenceRow> boundary_convergence_report(const BoundaryDatum& h, const std::vector<double>& radii,
                                                        const ConvergenceOptions& o) {
  if (h.kind() != BoundaryKind::Sphere) throw DomainError("boundary convergence on the ball needs a sphere datum");
  const QuadratureRule outer = sphere_rule(h.m(), o.outer_degree);
  std::vector<ConvergenceRow> rows;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0 - o.ball.guard)) throw DomainError("radius " + std::to_string(r) + " outside (0, 1 - guard)");
    auto diff = [&](const Vec& z) {
      auto g = poisson_coefficients_ball(h, z * r, o.ball);
      const auto f = h.coefficients(z);
      for (std::size_t j = 0; j < g.size(); ++j) g[j] -= f[j];
      return g;
    };
    rows.push_back({r, lp_norm(diff, h.basis(), outer, o.p, o.u_degree)});
  }
  return rows;
}

std::vector<ConvergenceRow> halfspace_convergence_report(const BoundaryDatum& f, const std::vector<double>& heights,
                                                         const ConvergenceOptions& o) {
  if (f.kind() != BoundaryKind::Hyperplane) throw DomainError("half-space convergence needs a hyperplane datum");
  if (!f.decays()) throw DomainError("half-space L^p convergence needs a decaying datum");
  GradedHyperplaneSpec spec = o.outer_plane;
  spec.outer = std::max(spec.outer, 2.0 * f.extent());
  const QuadratureRule outer = translated(graded_hyperplane_rule(f.m(), spec), f.center());
  std::vector<ConvergenceRow> rows;
  for (double y : heights) {
    if (!(y > 0.0)) throw DomainError("height must be positive");
    auto diff = [&](const Vec& t) {
      auto g = poisson_coefficients_half(f, PointHalfSpace(t, y), o.half);
      const auto v = f.coefficients(t);
      for (std::size_t j = 0; j < g.size(); ++j) g[j] -= v[j];
      return g;
    };
    rows.push_back({y, lp_norm(diff, f.basis(), outer, o.p, o.u_degree)});
  }
  return rows;
}

// ---------------------------------------------------------------- mean values

namespace {

void check_ball_inside(const FieldHk& field, const Vec& a, double r, double guard) {
  if (a.dim() != field.basis().m()) throw DimensionMismatch("centre has wrong dimension");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  bool ok = true;
  switch (field.domain()) {
    case FieldDomain::HalfSpace: ok = a[a.dim() - 1] - r > guard; break;
    case FieldDomain::Ball: ok = norm(a) + r < 1.0 - guard; break;
    case FieldDomain::AllSpace: break;
  }
  if (!ok)
    throw DomainError("closed ball B(" + to_string(a) + ", " + std::to_string(r) + ") leaves the field domain by the guard margin");
}

}  // namespace

double mean_value_check(const FieldHk& field, const Vec& a, double r, const Vec& nu, int sphere_degree, double guard) {
  check_ball_inside(field, a, r, guard);
  const int m = field.basis().m(), k = field.basis().k();
  const double half_c = 0.5 * KernelConstants::of(m, k).c_mk;
  const QuadratureRule rule = sphere_rule(m, sphere_degree);
  const double mean = integrate(rule, [&](const Vec& z) { return field.value(a + z * r, reflect(z, nu)); });
  return std::abs(field.value(a, nu) - half_c * mean);
}

double volume_mean_value_check(const FieldHk& field, const Vec& a, double r, const Vec& nu, int ball_degree, double guard,
                               DkOptions options) {
  const int m = field.basis().m(), k = field.basis().k();
  detail::check_dk_parameters(m, k, options);
  check_ball_inside(field, a, r, guard);
  const double volume = sphere_area(m) * std::pow(r, m) / m;
  const double pref = (m + 2.0 * k - 2.0) / ((m - 2.0) * volume);
  const QuadratureRule rule = mapped_ball(ball_rule(m, ball_degree), a, r);
  const double mean = integrate(rule, [&](const Vec& x) { return field.value(x, reflect(x - a, nu)); });
  return std::abs(field.value(a, nu) - pref * mean);
}

// ---------------------------------------------------------------- conformal transfer

BoundaryDatum induced_ball_datum(const BoundaryDatum& f) {
  if (f.kind() != BoundaryKind::Hyperplane) throw DomainError("induced ball datum needs a hyperplane datum");
  const int m = f.m();
  auto fp = std::make_shared<const BoundaryDatum>(f);
  auto T = std::make_shared<const MoebiusTransform>(reflected_cayley_transform(m));
  auto proj = shared_projector(m, f.basis().k());
  CoefficientFn fn = [fp, T, proj, m](const Vec& z) {
    const std::size_t t = fp->basis().size();
    try {
      const Multivector g = T->denominator(z);
      const double n2 = g.norm2();
      if (n2 <= kSingularGuard * kSingularGuard) throw PoleError("induced datum evaluated at the Cayley pole " + to_string(z));
      const Vec tp = head(T->eval(z));
      const auto coeff = fp->coefficients(tp);
      const double scale = std::pow(n2, 0.5 * (2.0 - m));
      std::vector<double> v(t);
      for (std::size_t q = 0; q < t; ++q)
        v[q] = scale * fp->basis().combination(coeff, versor_sandwich_inverse(g, proj->points()[q]));
      return proj->coefficients(v.data());
    } catch (const PoleError&) {
      if (fp->decays()) return std::vector<double>(t, 0.0);
      throw;
    }
  };
  return BoundaryDatum::from_coefficients(f.basis_ptr(), BoundaryKind::Sphere, fn, true, Vec(m), 2.0,
                                          "Cayley image of " + f.description());
}

TransferReport conformal_transfer_check(const BoundaryDatum& f, const std::vector<Vec>& points, const std::vector<Vec>& nus,
                                        const BallQuadrature& ball, const HalfSpaceQuadrature& half) {
  const int m = f.m();
  const BoundaryDatum h = induced_ball_datum(f);
  const MoebiusTransform T = reflected_cayley_transform(m);
  TransferReport rep;
  for (const auto& x : points) {
    const Multivector g = T.denominator(x);
    const double scale = std::pow(g.norm2(), 0.5 * (2.0 - m));
    const PointHalfSpace z = PointHalfSpace::from_full(T.eval(x));
    const auto bplan = ball_plan(h, x, ball);
    const auto hplan = half_space_plan(f, z, half);
    std::vector<Vec> rotated;
    for (const auto& nu : nus) rotated.push_back(versor_sandwich_inverse(g, nu));
    const auto bv = poisson_ball_values(bplan, x, nus);
    const auto hv = poisson_half_values(hplan, z, rotated);
    for (std::size_t q = 0; q < nus.size(); ++q) {
      TransferSample s{x, nus[q], bv[q], scale * hv[q], 0.0};
      s.deviation = std::abs(s.ball_value - s.weighted_half);
      rep.max_deviation = std::max(rep.max_deviation, s.deviation);
      rep.samples.push_back(s);
    }
  }
  return rep;
}

double cayley_jacobian_fd(const Vec& zeta_in, double h) {
  const int m = zeta_in.dim();
  const Vec zeta = normalized(zeta_in);
  Eigen::MatrixXd z(m, 1);
  for (int i = 0; i < m; ++i) z(i, 0) = zeta[i];
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ();
  Eigen::MatrixXd J(m - 1, m - 1);
  for (int c = 1; c < m; ++c) {
    Vec tau(m);
    for (int i = 0; i < m; ++i) tau[i] = Q(i, c);
    const Vec p = cayley(normalized(zeta + tau * h), CayleyOrientation::UpperHalfSpace);
    const Vec q = cayley(normalized(zeta - tau * h), CayleyOrientation::UpperHalfSpace);
    for (int i = 0; i < m - 1; ++i) J(i, c - 1) = (p[i] - q[i]) / (2.0 * h);
  }
  return std::sqrt(std::abs((J.transpose() * J).determinant()));
}

double jacobian_change_of_variables_check(int m, double width, int sphere_degree) {
  if (!(width > 0.0)) throw DomainError("Gaussian width must be positive");
  const double exact = std::pow(std::sqrt(std::numbers::pi) * width, m - 1);
  const QuadratureRule rule = sphere_rule(m, sphere_degree);
  const double mapped = integrate(rule, [&](const Vec& z) {
    if (1.0 - z[m - 1] < 1e-12) return 0.0;
    const Vec t = head(cayley(z, CayleyOrientation::UpperHalfSpace));
    return std::exp(-norm2(t) / (width * width)) * cayley_jacobian(z);
  });
  return std::abs(mapped - exact) / exact;
}

// ---------------------------------------------------------------- Cauchy estimate

std::vector<CauchyRow> cauchy_estimate_probe(const FieldHk& field, const Vec& a, const Vec& nu, const std::vector<double>& radii,
                                             const CauchyOptions& o) {
  const int m = field.basis().m();
  if (a.dim() != m || nu.dim() != m) throw DimensionMismatch("Cauchy probe arguments have wrong dimension");
  if (!field.contains(a, o.guard)) throw DomainError("Cauchy probe centre lies outside the field domain");
  double rmin = std::numeric_limits<double>::infinity();
  for (double r : radii) rmin = std::min(rmin, r);
  const double h = o.fd_step * std::min(1.0, rmin);
  const FieldHk frozen = field.frozen_at(a);
  Vec grad(m);
  for (int i = 0; i < m; ++i) {
    const Vec e = Vec::unit(m, i) * h;
    grad[i] = (frozen.value(a + e, nu) - frozen.value(a - e, nu)) / (2.0 * h);
  }
  const double gnorm = norm(grad);

  std::vector<Vec> dirs = sphere_rule(m, o.sphere_degree).nodes;
  dirs.push_back(normalized(nu));
  const QuadratureRule unit_ball = ball_rule(m, o.ball_degree);
  const QuadratureRule sphere = sphere_rule(m, o.sphere_degree);

  auto coefficients_at = [&](const Vec& x) {
    if (field.contains(x, o.guard)) return field.coefficients(x);
    if (field.has_closure()) {
      if (field.domain() == FieldDomain::Ball && std::abs(norm(x) - 1.0) <= o.guard) return field.closure_coefficients(x);
      if (field.domain() == FieldDomain::HalfSpace && std::abs(x[m - 1]) <= o.guard) return field.closure_coefficients(x);
    }
    throw DomainError("Cauchy sample point " + to_string(x) + " lies outside the closed field domain");
  };

  std::vector<CauchyRow> rows;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("Cauchy radius must be positive");
    std::vector<Vec> pts{a};
    for (const auto& p : unit_ball.nodes) pts.push_back(a + p * r);
    for (const auto& z : sphere.nodes) pts.push_back(a + z * r);
    std::vector<double> best(pts.size(), 0.0);
    parallel_for(pts.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const auto g = coefficients_at(pts[i]);
        for (const auto& w : dirs) best[i] = std::max(best[i], std::abs(field.basis().combination(g, w)));
      }
    });
    CauchyRow row;
    row.r = r;
    row.gradient = gnorm;
    row.sup = *std::max_element(best.begin(), best.end());
    row.ratio = row.sup > 0.0 ? gnorm * r / row.sup : 0.0;
    rows.push_back(row);
  }
  return rows;
}

double cauchy_gradient_bound(int m, int k, const Vec& nu, int sphere_degree) {
  if (nu.dim() != m) throw DimensionMismatch("direction has wrong dimension");
  const double half_c = 0.5 * KernelConstants::of(m, k).c_mk;
  const ZonalKernel Z(m, k);
  const QuadratureRule rule = sphere_rule(m, sphere_degree);
  const double h = 1e-6;
  return integrate(rule, [&](const Vec& zeta) {
    std::vector<double> inner(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec& w = rule.nodes[q];
      Vec grad = zeta * (m * Z(reflect(zeta, w), nu));
      for (int i = 0; i < m; ++i) {
        const Vec e = Vec::unit(m, i) * h;
        grad[i] += (Z(reflect(e - zeta, w), nu) - Z(reflect(-e - zeta, w), nu)) / (2.0 * h);
      }
      inner[q] = rule.weights[q] * half_c * norm(grad);
    }
    return pairwise_sum(inner);
  });
}

}  // namespace bosonic
