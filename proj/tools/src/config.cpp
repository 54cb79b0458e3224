#include "config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bosonic::cli {

using nlohmann::json;

BallQuadrature QuadratureSettings::ball() const {
  BallQuadrature q;
  q.sphere_degree = sphere_degree;
  q.panel_order = panel_order;
  q.angular_degree = angular_degree;
  q.guard = guard;
  return q;
}

HalfSpaceQuadrature QuadratureSettings::half() const {
  HalfSpaceQuadrature q;
  q.panel_order = panel_order;
  q.angular_degree = angular_degree;
  q.outer_scale = outer_scale;
  return q;
}

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing key '" + key + "' in " + where);
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<int>();
}

Vec vector_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  if (j.size() > static_cast<std::size_t>(kMaxDim)) throw ConfigError(where + " has too many entries");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Profile profile_of(const json& j, const std::string& where) {
  const std::string type = need(j, "type", where).is_string() ? j["type"].get<std::string>() : "";
  if (type == "constant") {
    only_keys(j, where, {"type", "value"});
    return Profile::constant(number(need(j, "value", where), where + ".value"));
  }
  if (type == "polynomial") {
    only_keys(j, where, {"type", "terms"});
    const json& terms = need(j, "terms", where);
    if (!terms.is_array()) throw ConfigError(where + ".terms must be an array");
    std::vector<Profile::Term> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      only_keys(terms[i], w, {"coefficient", "powers"});
      Profile::Term t;
      t.coefficient = number(need(terms[i], "coefficient", w), w + ".coefficient");
      const json& p = need(terms[i], "powers", w);
      if (!p.is_array()) throw ConfigError(w + ".powers must be an array");
      for (std::size_t e = 0; e < p.size(); ++e) {
        const int power = integer(p[e], w + ".powers");
        if (power < 0) throw ConfigError(w + ".powers must be non-negative");
        t.powers.push_back(power);
      }
      out.push_back(std::move(t));
    }
    return Profile::polynomial(std::move(out));
  }
  if (type == "gaussian" || type == "bump") {
    const char* size_key = type == "gaussian" ? "width" : "radius";
    only_keys(j, where, {"type", "amplitude", "center", size_key});
    const double a = number(need(j, "amplitude", where), where + ".amplitude");
    const Vec c = vector_of(need(j, "center", where), where + ".center");
    const double s = number(need(j, size_key, where), where + "." + size_key);
    if (!(s > 0.0)) throw ConfigError(where + "." + size_key + " must be positive");
    return type == "gaussian" ? Profile::gaussian(a, c, s) : Profile::bump(a, c, s);
  }
  throw ConfigError(where + ".type must be one of constant, polynomial, gaussian, bump");
}

void positive(int v, const std::string& what) {
  if (v < 1) throw ConfigError(what + " must be positive");
}

}  // namespace

ProblemConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config", {"schema_version", "m", "k", "domain", "datum", "quadrature", "outputs"});
  ProblemConfig c;
  c.schema_version = integer(need(j, "schema_version", "config"), "schema_version");
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version) + "; this build reads version " +
                      std::to_string(kSchemaVersion));
  c.m = integer(need(j, "m", "config"), "m");
  c.k = integer(need(j, "k", "config"), "k");
  if (c.m < 3 || c.m > kMaxDim) throw ConfigError("m must lie in [3, 16]");
  if (c.k < 1) throw ConfigError("k must be at least 1");
  if (c.k > 12) throw ConfigError("k must be at most 12");
  if (c.m + 2 * c.k - 4 == 0) throw ConfigError("m + 2k - 4 must be nonzero");
  const json& dom = need(j, "domain", "config");
  if (!dom.is_string()) throw ConfigError("domain must be a string");
  if (dom == "ball")
    c.domain = ProblemDomain::Ball;
  else if (dom == "halfspace")
    c.domain = ProblemDomain::HalfSpace;
  else
    throw ConfigError("domain must be \"ball\" or \"halfspace\"");

  const std::size_t t = harmonic_dimension(c.m, c.k);
  const int pd = c.domain == ProblemDomain::Ball ? c.m : c.m - 1;
  const json& datum = need(j, "datum", "config");
  only_keys(datum, "datum", {"components"});
  const json& comps = need(datum, "components", "datum");
  if (!comps.is_array()) throw ConfigError("datum.components must be an array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string w = "datum.components[" + std::to_string(i) + "]";
    only_keys(comps[i], w, {"basis_index", "profile"});
    const int idx = integer(need(comps[i], "basis_index", w), w + ".basis_index");
    if (idx < 0 || static_cast<std::size_t>(idx) >= t)
      throw ConfigError(w + ".basis_index must lie in [0, " + std::to_string(t) + ") for dim H_k = " + std::to_string(t));
    Profile p = profile_of(need(comps[i], "profile", w), w + ".profile");
    if ((p.kind == Profile::Kind::Gaussian || p.kind == Profile::Kind::Bump) && p.center.dim() != pd)
      throw ConfigError(w + ".profile.center must have " + std::to_string(pd) + " entries");
    if (p.kind == Profile::Kind::Polynomial) {
      for (const auto& term : p.terms)
        if (static_cast<int>(term.powers.size()) > pd) throw ConfigError(w + ".profile powers exceed the boundary dimension");
      if (c.domain == ProblemDomain::HalfSpace && p.polynomial_degree() > 0)
        throw ConfigError(w + ": polynomial profiles of positive degree are unbounded on the hyperplane");
    }
    c.components.emplace_back(static_cast<std::size_t>(idx), std::move(p));
  }

  if (auto it = j.find("quadrature"); it != j.end()) {
    const json& q = *it;
    only_keys(q, "quadrature", {"sphere_degree", "panel_order", "angular_degree", "outer_scale", "radial_order", "guard"});
    auto& s = c.quadrature;
    if (q.contains("sphere_degree")) s.sphere_degree = integer(q["sphere_degree"], "quadrature.sphere_degree");
    if (q.contains("panel_order")) s.panel_order = integer(q["panel_order"], "quadrature.panel_order");
    if (q.contains("angular_degree")) s.angular_degree = integer(q["angular_degree"], "quadrature.angular_degree");
    if (q.contains("outer_scale")) s.outer_scale = number(q["outer_scale"], "quadrature.outer_scale");
    if (q.contains("radial_order")) s.radial_order = integer(q["radial_order"], "quadrature.radial_order");
    if (q.contains("guard")) s.guard = number(q["guard"], "quadrature.guard");
    if (s.sphere_degree < 0 || s.angular_degree < 0) throw ConfigError("quadrature degrees must be non-negative");
    positive(s.panel_order, "quadrature.panel_order");
    positive(s.radial_order, "quadrature.radial_order");
    if (!(s.outer_scale > 0.0)) throw ConfigError("quadrature.outer_scale must be positive");
    if (!(s.guard > 0.0 && s.guard < 0.5)) throw ConfigError("quadrature.guard must lie in (0, 0.5)");
  }

  if (auto it = j.find("outputs"); it != j.end()) {
    const json& o = *it;
    only_keys(o, "outputs", {"points", "nu", "random_points", "tolerance_scale"});
    if (o.contains("points")) {
      if (!o["points"].is_array()) throw ConfigError("outputs.points must be an array");
      for (std::size_t i = 0; i < o["points"].size(); ++i) {
        Vec p = vector_of(o["points"][i], "outputs.points[" + std::to_string(i) + "]");
        if (p.dim() != c.m) throw ConfigError("outputs.points[" + std::to_string(i) + "] must have m entries");
        c.points.push_back(p);
      }
    }
    if (o.contains("nu")) {
      if (!o["nu"].is_array()) throw ConfigError("outputs.nu must be an array");
      for (std::size_t i = 0; i < o["nu"].size(); ++i) {
        Vec v = vector_of(o["nu"][i], "outputs.nu[" + std::to_string(i) + "]");
        if (v.dim() != c.m) throw ConfigError("outputs.nu[" + std::to_string(i) + "] must have m entries");
        if (norm(v) > 1.0 + 1e-12) throw ConfigError("outputs.nu[" + std::to_string(i) + "] must lie in the closed unit ball");
        c.nus.push_back(v);
      }
    }
    if (o.contains("random_points")) {
      const json& r = o["random_points"];
      only_keys(r, "outputs.random_points", {"count", "seed"});
      c.random_count = integer(need(r, "count", "outputs.random_points"), "outputs.random_points.count");
      if (c.random_count < 0 || c.random_count > 100000) throw ConfigError("outputs.random_points.count must lie in [0, 100000]");
      if (r.contains("seed")) {
        if (!r["seed"].is_number_unsigned()) throw ConfigError("outputs.random_points.seed must be a non-negative integer");
        c.random_seed = r["seed"].get<std::uint64_t>();
      }
    }
    if (o.contains("tolerance_scale")) {
      c.tolerance_scale = number(o["tolerance_scale"], "outputs.tolerance_scale");
      if (!(c.tolerance_scale > 0.0)) throw ConfigError("outputs.tolerance_scale must be positive");
    }
  }
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

BoundaryDatum ProblemConfig::datum() const { return BoundaryDatum::separable(shared_basis(m, k), boundary(), components); }

std::vector<Vec> ProblemConfig::sample_points() const {
  std::vector<Vec> out = points;
  std::mt19937_64 gen(random_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), height(0.1, 1.5);
  for (int n = 0; n < random_count; ++n) {
    Vec p(m);
    if (domain == ProblemDomain::Ball) {
      do {
        for (int i = 0; i < m; ++i) p[i] = 0.9 * unit(gen);
      } while (norm(p) >= 0.9);
    } else {
      for (int i = 0; i < m - 1; ++i) p[i] = unit(gen);
      p[m - 1] = height(gen);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Vec> ProblemConfig::sample_nus() const {
  if (!nus.empty()) return nus;
  return {Vec::unit(m, 0)};
}

}  // namespace bosonic::cli
