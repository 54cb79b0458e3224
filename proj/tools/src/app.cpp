#include "app.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "report.hpp"
#include "suites.hpp"

namespace bosonic::cli {

namespace {

namespace fs = std::filesystem;

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_budget_env() {
  const char* env = std::getenv("BOSONIC_BVP_BUDGET");
  if (!env || !*env) return;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno || *end || env[0] == '-') throw ConfigError(std::string("BOSONIC_BVP_BUDGET must be a non-negative integer, got '") + env + "'");
  set_node_budget(static_cast<std::size_t>(v));
}

// Writes to a sibling temporary file first so a failed write leaves nothing behind.
void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
    if (!f) throw ConfigError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

void check_points(const ProblemConfig& c, const std::vector<Vec>& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec& p = points[i];
    const std::string where = "sample point " + std::to_string(i) + " " + to_string(p);
    if (c.domain == ProblemDomain::HalfSpace && !(p[c.m - 1] > 0.0))
      throw DomainError(where + " is not in the upper half-space (y <= 0)");
    if (c.domain == ProblemDomain::Ball && !(norm(p) < 1.0 - c.quadrature.guard))
      throw DomainError(where + " is not inside the ball with guard " + exact(c.quadrature.guard));
  }
}

int solve(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const ProblemConfig c = load_config(config_path);
  const std::vector<Vec> points = c.sample_points();
  if (points.empty()) throw ConfigError("outputs must list points or request random_points");
  const std::vector<Vec> nus = c.sample_nus();
  check_points(c, points);

  const BoundaryDatum datum = c.datum();
  const auto& basis = datum.basis();
  const std::size_t t = basis.size();
  std::vector<std::vector<double>> coeffs(points.size());
  std::vector<std::size_t> nodes(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (c.domain == ProblemDomain::Ball) {
      nodes[i] = plan_node_count(ball_plan(datum, points[i], c.quadrature.ball()));
      coeffs[i] = poisson_coefficients_ball(datum, points[i], c.quadrature.ball());
    } else {
      const PointHalfSpace x = PointHalfSpace::from_full(points[i]);
      nodes[i] = plan_node_count(half_space_plan(datum, x, c.quadrature.half()));
      coeffs[i] = poisson_coefficients_half(datum, x, c.quadrature.half());
    }
  }

  std::ostringstream csv;
  write_comment_header(csv, kSchemaVersion);
  for (int i = 0; i < c.m; ++i) csv << "x_" << i + 1 << ',';
  for (int i = 0; i < c.m; ++i) csv << "nu_" << i + 1 << ',';
  csv << "value";
  for (std::size_t j = 0; j < t; ++j) csv << ",g_" << j + 1;
  csv << "\r\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const auto& nu : nus) {
      for (int d = 0; d < c.m; ++d) csv << exact(points[i][d]) << ',';
      for (int d = 0; d < c.m; ++d) csv << exact(nu[d]) << ',';
      csv << exact(basis.combination(coeffs[i], nu));
      for (double g : coeffs[i]) csv << ',' << exact(g);
      csv << "\r\n";
    }

  const KernelConstants kc = KernelConstants::of(c.m, c.k);
  nlohmann::ordered_json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["m"] = c.m;
  manifest["k"] = c.k;
  manifest["domain"] = c.domain == ProblemDomain::Ball ? "ball" : "halfspace";
  manifest["datum"] = datum.description();
  manifest["constants"] = {{"omega_m", kc.omega_m}, {"c_mk", kc.c_mk}, {"dim_H_k", t}};
  manifest["quadrature"] = {{"sphere_degree", c.quadrature.sphere_degree}, {"panel_order", c.quadrature.panel_order},
                            {"angular_degree", c.quadrature.angular_degree}, {"outer_scale", c.quadrature.outer_scale},
                            {"guard", c.quadrature.guard}, {"node_budget", node_budget()}};
  manifest["rule_nodes_per_point"] = nodes;
  manifest["samples"] = {{"points", points.size()}, {"directions", nus.size()}, {"file", "samples.csv"}};

  make_out_dir(out_dir);
  write_file(fs::path(out_dir) / "samples.csv", csv.str());
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << points.size() * nus.size() << " samples to " << (fs::path(out_dir) / "samples.csv").string() << "\n";
  return kPass;
}

int verify(const std::string& config_path, const std::string& suite, const std::string& out_dir, double scale,
           std::ostream& out) {
  if (!is_suite(suite)) {
    std::string names;
    for (const auto& n : suite_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown suite '" + suite + "'; expected one of " + names);
  }
  const ProblemConfig c = load_config(config_path);
  const auto rows = run_suite(suite, c, scale * c.tolerance_scale);

  std::ostringstream csv;
  write_check_report(csv, rows, kSchemaVersion);
  make_out_dir(out_dir);
  const fs::path path = fs::path(out_dir) / (suite + ".csv");
  write_file(path, csv.str());

  int failed = 0;
  for (const auto& r : rows)
    if (!r.pass()) {
      ++failed;
      out << "FAIL " << r.id << " measured " << format_number(r.measured) << " tolerance " << format_number(r.tolerance) << "\n";
    }
  out << suite << ": " << rows.size() - failed << "/" << rows.size() << " rows pass; report " << path.string() << "\n";
  return failed ? kVerificationFailure : kPass;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson kernels and Dirichlet problems for bosonic Laplacians"};
  app.require_subcommand(1);
  int threads = 1;
  double scale = 1.0;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-scale", scale, "multiplies every suite tolerance")->check(CLI::PositiveNumber);

  std::string config, out_dir, suite;
  auto* solve_cmd = app.add_subcommand("solve", "evaluate the Dirichlet solution at the configured samples");
  solve_cmd->add_option("config", config, "problem config (JSON)")->required();
  solve_cmd->add_option("--out", out_dir, "output directory")->required();
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite and write its CSV report");
  verify_cmd->add_option("config", config, "problem config (JSON)")->required();
  verify_cmd->add_option("--suite", suite, "suite name")->required();
  verify_cmd->add_option("--out", out_dir, "output directory")->required();
  // Global flags are also accepted after the subcommand.
  for (auto* sub : {solve_cmd, verify_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    apply_budget_env();
    set_thread_count(threads);
    if (solve_cmd->parsed()) return solve(config, out_dir, out);
    return verify(config, suite, out_dir, scale, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DimensionMismatch& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const Error& e) {
    err << "guard violation: " << e.what() << "\n";
    return kGuardViolation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace bosonic::cli
