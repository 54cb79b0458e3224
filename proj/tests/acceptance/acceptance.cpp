// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bosonic/solver.hpp"
#include "suites.hpp"

using namespace bosonic;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::vector<double> unit_coefficients(std::mt19937_64& gen, std::size_t t) {
  std::normal_distribution<double> n;
  std::vector<double> a(t);
  double s = 0.0;
  for (auto& v : a) s += (v = n(gen)) * v;
  for (auto& v : a) v /= std::sqrt(s);
  return a;
}

Vec in_ball(std::mt19937_64& gen, int m, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec p(m);
  do {
    for (int i = 0; i < m; ++i) p[i] = radius * u(gen);
  } while (norm(p) >= radius);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BoundaryDatum smooth_ball(int m, int k) {
  Vec c(m);
  c[0] = 0.8;
  c[m - 1] = 0.6;
  return BoundaryDatum::separable(shared_basis(m, k), BoundaryKind::Sphere,
                                  {{0, Profile::gaussian(1.0, c, 0.7)}, {1, Profile::polynomial({{0.5, {1, 1}}})}});
}

BoundaryDatum gaussian_half(int m, int k) {
  return BoundaryDatum::separable(shared_basis(m, k), BoundaryKind::Hyperplane, {{0, Profile::gaussian(1.0, Vec(m - 1), 1.0)}});
}

Outcome zonal_reproducing() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(1);
  double worst = 0.0;
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 4; ++k) {
      const auto basis = shared_basis(m, k);
      const ZonalKernel Z(m, k);
      const QuadratureRule rule = sphere_rule(m, 2 * k + 2);
      for (int trial = 0; trial < 20; ++trial) {
        const auto a = unit_coefficients(gen, basis->size());
        const Vec v = cli::random_unit(gen, m);
        const double lhs = integrate(rule, [&](const Vec& u) { return Z(u, v) * basis->combination(a, u); });
        worst = std::max(worst, std::abs(lhs - basis->combination(a, v)));
      }
    }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 10.0, "max error " + sci(worst) + " (tol 1e-8), " + sci(t) + " s (limit 10 s)"};
}

Outcome kernel_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(2);
  double worst = 0.0, spread = 0.0;
  for (int m = 3; m <= 5; ++m)
    for (int k = 1; k <= 3; ++k) {
      const auto basis = shared_basis(m, k);
      const double c = KernelConstants::of(m, k).c_mk;
      const QuadratureRule rule = hyperplane_rule(m, 64, std::max(16, 2 * k + 2));
      for (int trial = 0; trial < 3; ++trial) {
        const auto a = unit_coefficients(gen, basis->size());
        const Vec u = cli::random_unit(gen, m);
        double lo = 1e300, hi = -1e300;
        for (double y : {0.5, 1.0, 2.0}) {
          const double v = integrate(rule, [&](const Vec& t) {
            const Vec d = join(-t, y);
            return c * y / std::pow(norm2(d), 0.5 * m) * basis->combination(a, reflect(d, u));
          });
          worst = std::max(worst, std::abs(v - basis->combination(a, u)));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        spread = std::max(spread, hi - lo);
      }
    }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && spread < 1e-8 && t < 60.0,
          "max error " + sci(worst) + " (tol 1e-6), spread over y " + sci(spread) + " (tol 1e-8), " + sci(t) + " s (limit 60 s)"};
}

Outcome kernel_normalization() {
  std::mt19937_64 gen(3);
  double worst = 0.0;
  for (int k : {1, 2}) {
    const PoissonKernel P(3, k);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec u = cli::random_unit(gen, 3), v = cli::random_unit(gen, 3);
      const Vec xp{std::uniform_real_distribution<double>(-1, 1)(gen), std::uniform_real_distribution<double>(-1, 1)(gen)};
      const PointHalfSpace x(xp, std::uniform_real_distribution<double>(0.2, 2.0)(gen));
      const QuadratureRule rule = translated(hyperplane_rule(3, 64, 16), xp);
      worst = std::max(worst, std::abs(integrate(rule, [&](const Vec& t) { return P.half(x, t, u, v); }) - P.zonal()(u, v)));
    }
  }
  return {worst <= 1e-6, "max deviation " + sci(worst) + " (tol 1e-6)"};
}

Outcome annihilation() {
  bool exact = true;
  const auto nulls = disjoint_null_solutions(5, 2);
  for (const auto& p : nulls) exact = exact && apply_Dk_poly(p, 5, 2).is_zero();
  Exponents e{};
  e[0] = 2;
  e[3] = 1;
  const RationalPoly hand = RationalPoly::monomial(3, e, Rational(1));
  const bool hand_ok = apply_Dk_poly(hand, 3, 1) == RationalPoly::variable(3, Var::U, 0) * Rational(-2, 3);

  const FieldHk F = solve_ball(smooth_ball(3, 1));
  const BosonicOperator D(F.basis_ptr());
  std::mt19937_64 gen(4);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double ratio = D.richardson(F, in_ball(gen, 3, 0.85), Vec::unit(3, 0), 1e-3).ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const bool order = lo >= 3.5 && hi <= 4.5;
  return {exact && !nulls.empty() && hand_ok && order,
          std::to_string(nulls.size()) + " null solutions " + (exact ? "exactly annihilated" : "NOT annihilated") +
              ", x1^2 u1 -> -(2/3) u1 " + (hand_ok ? "ok" : "WRONG") + ", residual ratios in [" + sci(lo) + ", " + sci(hi) +
              "] (want [3.5, 4.5])"};
}

Outcome moebius() {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n;
  double dist = 0.0, zonal = 0.0;
  for (int m : {3, 4}) {
    const ZonalKernel Z(m, 2);
    for (int trial = 0; trial < 100; ++trial) {
      const MoebiusTransform T = cli::random_moebius(gen, m);
      Vec x(m), z(m);
      for (int i = 0; i < m; ++i) {
        x[i] = n(gen);
        z[i] = n(gen);
      }
      const Vec tx = T.eval(x), tz = T.eval(z);
      const Multivector gx = T.denominator(x), gz = T.denominator(z);
      const double rhs = norm(x - z) / std::sqrt(gx.norm2() * gz.norm2());
      dist = std::max(dist, std::abs(norm(tx - tz) - rhs) / rhs);
      const Vec u = cli::random_unit(gen, m), v = cli::random_unit(gen, m);
      zonal = std::max(zonal, std::abs(Z(reflect(tx - tz, u), v) - Z(reflect(x - z, versor_sandwich(gz, u)), versor_sandwich(gx, v))));
    }
  }
  return {dist <= 1e-10 && zonal <= 1e-8, "distance identity " + sci(dist) + " (tol 1e-10), zonal identity " + sci(zonal) + " (tol 1e-8)"};
}

Outcome conformal() {
  std::mt19937_64 gen(6);
  std::vector<Vec> points;
  for (int i = 0; i < 10; ++i) points.push_back(in_ball(gen, 3, 0.8));
  BallQuadrature ball;
  ball.sphere_degree = 48;
  ball.panel_order = 24;
  ball.angular_degree = 48;
  const TransferReport rep = conformal_transfer_check(gaussian_half(3, 1), points, {Vec::unit(3, 0), normalized(Vec{0, 0.6, 0.8})}, ball);
  double jac = 0.0;
  for (int i = 0; i < 20; ++i) {
    Vec zeta = cli::random_unit(gen, 3);
    if (zeta[2] > 0.9) zeta[2] = -zeta[2];
    jac = std::max(jac, std::abs(cayley_jacobian_fd(zeta) - cayley_jacobian(zeta)) / cayley_jacobian(zeta));
  }
  return {rep.max_deviation <= 1e-5 && jac <= 1e-6,
          "transfer deviation " + sci(rep.max_deviation) + " (tol 1e-5), Jacobian FD " + sci(jac) + " (tol 1e-6)"};
}

Outcome mean_values() {
  std::string info;
  double sphere = 0.0, volume = 0.0;
  for (int m : {3, 4, 5}) {
    const int k = m == 3 ? 1 : 2;
    const auto basis = shared_basis(m, k);
    Vec a(m), nu(m);
    for (int i = 0; i < m; ++i) {
      a[i] = 0.1 * (i + 1) * (i % 2 ? -1.0 : 1.0);
      nu[i] = 1.0 + 0.5 * i;
    }
    nu = normalized(nu);
    double s = 0.0, v = 0.0;
    for (const auto& p : disjoint_null_solutions(m, k)) {
      const FieldHk F = polynomial_field(to_double(p), basis);
      s = std::max(s, mean_value_check(F, a, 0.7, nu, 2 * k + 8));
      v = std::max(v, volume_mean_value_check(F, a, 0.7, nu, 2 * k + 8));
    }
    if (m == 5) {
      sphere = s;
      volume = v;
    } else {
      info += "; m=" + std::to_string(m) + " (info) sphere " + sci(s) + " volume " + sci(v);
    }
  }
  return {sphere <= 1e-8 && volume <= 1e-6, "m=5 k=2 sphere " + sci(sphere) + " (tol 1e-8), volume " + sci(volume) + " (tol 1e-6)" + info};
}

Outcome lp_machinery() {
  const BoundaryDatum h = smooth_ball(3, 1);
  const QuadratureRule sphere = sphere_rule(3, 12);
  double factor = 0.0;
  for (double p : {1.0, 2.0, 4.0}) {
    const double s = lp_norm(h, sphere, p, 6), b = lp_norm(h, sphere, p, 6, UMeasure::Ball);
    factor = std::max(factor, std::abs(std::pow(b / s, p) - ball_sphere_factor(3, 1, p)));
  }
  ConvergenceOptions o;
  o.u_degree = 6;
  const auto half = halfspace_convergence_report(gaussian_half(3, 1), {0.5, 0.1, 0.02}, o);
  const auto ball = boundary_convergence_report(h, {0.5, 0.9, 0.99}, o);
  auto decreasing = [](const std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].error < rows[i - 1].error)) return false;
    return true;
  };
  auto list = [](const std::vector<ConvergenceRow>& rows) {
    std::string s;
    for (const auto& r : rows) s += (s.empty() ? "" : " > ") + sci(r.error);
    return s;
  };
  return {factor <= 1e-8 && decreasing(half) && decreasing(ball),
          "factor error " + sci(factor) + " (tol 1e-8); half-space " + list(half) + "; ball " + list(ball)};
}

Outcome cauchy_scaling() {
  const int m = 5, k = 2;
  const auto basis = shared_basis(m, k);
  const Vec nu = normalized(Vec{0.3, 0.1, 0.5, 0.7, 0.2});
  const double bound = cauchy_gradient_bound(m, k, nu, 8);
  const Vec a{0.2, -0.1, 0.3, 0.05, 0.1};
  std::vector<std::pair<FieldHk, Vec>> fields;
  for (const auto& p : disjoint_null_solutions(m, k)) fields.emplace_back(polynomial_field(to_double(p), basis), a);
  Vec c(m);
  c[2] = 0.6;
  c[4] = 0.8;
  BallQuadrature q;
  q.sphere_degree = 10;
  q.angular_degree = 10;
  fields.emplace_back(solve_ball(BoundaryDatum::separable(basis, BoundaryKind::Sphere,
                                                          {{0, Profile::gaussian(1.0, c, 0.7)}, {3, Profile::constant(0.5)}}),
                                 q),
                      Vec(m));
  CauchyOptions o;
  o.sphere_degree = 3;
  double worst = 0.0;
  for (const auto& [F, centre] : fields)
    for (const auto& row : cauchy_estimate_probe(F, centre, nu, {0.25, 0.5, 1.0}, o)) worst = std::max(worst, row.ratio);
  return {fields.size() >= 3 && worst < bound,
          std::to_string(fields.size()) + " fields, max ratio " + sci(worst) + " below run-reported constant " + sci(bound)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("bosonic-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string cfg = std::string(BOSONIC_CONFIG_DIR) + "/ball_m3k1.json";
  bool same = true;
  std::string detail;
  for (const char* suite : {"zonal", "dirichlet-ball", "conformal"}) {
    std::string reports[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = root / (std::string(suite) + std::to_string(run));
      const std::string cmd = std::string("\"") + BOSONIC_CLI_PATH + "\" --threads " + (run ? "2" : "1") + " verify \"" + cfg +
                              "\" --suite " + suite + " --out \"" + out.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        same = false;
        detail += std::string(suite) + " run failed; ";
      }
      reports[run] = slurp(out / (std::string(suite) + ".csv"));
    }
    const bool ok = !reports[0].empty() && reports[0] == reports[1];
    same = same && ok;
    detail += std::string(suite) + (ok ? " identical" : " DIFFERENT") + "; ";
  }
  fs::remove_all(root);
  return {same, detail + "(threads 1 vs 2)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zonal reproducing property", zonal_reproducing},
      {"half-space kernel identity and height independence", kernel_identity},
      {"half-space kernel normalization", kernel_normalization},
      {"D_k annihilation and finite-difference order", annihilation},
      {"Moebius distance and zonal transformation identities", moebius},
      {"conformal transfer and Cayley Jacobian", conformal},
      {"sphere and volume mean-value properties", mean_values},
      {"L^p norm factor and boundary convergence", lp_machinery},
      {"Cauchy-estimate scaling", cauchy_scaling},
      {"byte-identical verify reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
