#include "hmlab/lab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hmlab/analysis/fit.hpp"
#include "hmlab/target/space.hpp"

namespace hmlab::lab {

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out += "; ";
    out += issues[i].field + ": " + issues[i].message;
  }
  return out;
}

using Json = nlohmann::json;

// Typed field access that records problems instead of throwing, so one pass
// reports every violation.
class Reader {
 public:
  std::vector<Issue> issues;

  void fail(const std::string& field, const std::string& message) { issues.push_back({field, message}); }

  const Json* child(const Json& doc, const std::string& key, const std::string& path, bool required) {
    if (!doc.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) fail(path.empty() ? key : path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  template <typename T>
  void read(const Json& doc, const std::string& key, const std::string& path, T& out, bool required = false) {
    const std::string field = path.empty() ? key : path + "." + key;
    const Json* v = child(doc, key, path, required);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        if (!v->is_string()) throw std::runtime_error("expected a string");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw std::runtime_error("expected a boolean");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v->is_number()) throw std::runtime_error("expected a number");
        if constexpr (std::is_integral_v<T>) {
          if (!v->is_number_integer()) throw std::runtime_error("expected an integer");
        }
      }
      out = v->get<T>();
    } catch (const std::exception& e) {
      fail(field, e.what());
    }
  }

  void positive(const std::string& field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) fail(field, "must be positive");
  }
};

MapSpec read_map(Reader& r, const Json& doc) {
  MapSpec map;
  r.read(doc, "kind", "map", map.kind, true);
  std::string bc = "dirichlet";
  r.read(doc, "boundary_condition", "map", bc);
  try {
    map.condition = solver::boundary_condition_from_string(bc);
  } catch (const Error& e) {
    r.fail("map.boundary_condition", e.what());
  }
  r.read(doc, "peak", "map", map.peak);
  r.read(doc, "contraction", "map", map.contraction);
  r.read(doc, "scale", "map", map.scale);
  if (const Json* a = r.child(doc, "A", "map", map.kind == "linear" || map.kind == "affine_lift")) {
    try {
      auto rows = a->get<std::vector<std::vector<double>>>();
      if (rows.empty()) throw std::runtime_error("empty matrix");
      map.A.resize(static_cast<int>(rows.size()), 2);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 2) throw std::runtime_error("rows need two entries");
        map.A(i, 0) = rows[i][0];
        map.A(i, 1) = rows[i][1];
      }
    } catch (const std::exception& e) {
      r.fail("map.A", e.what());
    }
  }
  map.b = Eigen::VectorXd::Zero(map.A.rows());
  if (const Json* b = r.child(doc, "b", "map", false)) {
    try {
      auto v = b->get<std::vector<double>>();
      if (static_cast<int>(v.size()) != map.A.rows()) throw std::runtime_error("length must match A");
      map.b = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
    } catch (const std::exception& e) {
      r.fail("map.b", e.what());
    }
  }
  static const std::vector<std::string> kinds{"linear", "affine_lift", "tripod_boundary",
                                              "hyperbolic_inclusion", "random"};
  if (!map.kind.empty() && std::find(kinds.begin(), kinds.end(), map.kind) == kinds.end())
    r.fail("map.kind", "unknown map kind '" + map.kind + "'");
  r.positive("map.scale", map.scale);
  r.positive("map.contraction", map.contraction);
  return map;
}

void read_solver(Reader& r, const Json& doc, Scenario& s) {
  r.read(doc, "run", "solver", s.solve);
  r.read(doc, "max_sweeps", "solver", s.solver.max_sweeps);
  r.read(doc, "energy_tol", "solver", s.solver.energy_tol);
  r.read(doc, "move_tol", "solver", s.solver.move_tol);
  r.read(doc, "damping", "solver", s.solver.damping);
  r.read(doc, "frechet_tol", "solver", s.solver.frechet.tol);
  std::string mode = "gauss_seidel";
  r.read(doc, "mode", "solver", mode);
  if (mode == "gauss_seidel") s.solver.mode = solver::SweepMode::GaussSeidel;
  else if (mode == "jacobi") s.solver.mode = solver::SweepMode::Jacobi;
  else r.fail("solver.mode", "expected gauss_seidel or jacobi");
  if (s.solver.max_sweeps < 1) r.fail("solver.max_sweeps", "must be at least 1");
  r.positive("solver.energy_tol", s.solver.energy_tol);
  r.positive("solver.move_tol", s.solver.move_tol);
  r.positive("solver.frechet_tol", s.solver.frechet.tol);
  if (!(s.solver.damping > 0.0 && s.solver.damping <= 1.0)) r.fail("solver.damping", "must lie in (0, 1]");
}

void read_analysis(Reader& r, const Json& doc, AnalysisSpec& a) {
  const std::string p = "analysis";
  if (const Json* checks = r.child(doc, "checks", p, false)) {
    try {
      a.checks = checks->get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      r.fail("analysis.checks", e.what());
    }
  }
  for (const auto& c : a.checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      r.fail("analysis.checks", "unknown check '" + c + "'");
  r.read(doc, "epsilon_factor", p, a.epsilon_factor);
  r.read(doc, "sigma_max_factor", p, a.sigma_max_factor);
  r.read(doc, "sigma_count", p, a.sigma_count);
  if (const Json* s = r.child(doc, "sigmas", p, false)) {
    try {
      a.sigmas = s->get<std::vector<double>>();
    } catch (const std::exception& e) {
      r.fail("analysis.sigmas", e.what());
    }
  }
  r.read(doc, "basepoint_count", p, a.basepoint_count);
  if (const Json* b = r.child(doc, "basepoints", p, false)) {
    try {
      a.basepoints = b->get<std::vector<int>>();
    } catch (const std::exception& e) {
      r.fail("analysis.basepoints", e.what());
    }
  }
  r.read(doc, "bochner_sigma_factor", p, a.bochner_sigma_factor);
  r.read(doc, "bump_count", p, a.bump_count);
  r.read(doc, "bump_min_factor", p, a.bump_min_factor);
  r.read(doc, "bump_max_radius", p, a.bump_max_radius);
  r.read(doc, "geodesic_count", p, a.geodesic_count);
  r.read(doc, "geodesic_min_length", p, a.geodesic_min_length);
  r.read(doc, "lipschitz_depth", p, a.lipschitz_depth);
  r.read(doc, "required_pass_fraction", p, a.required_pass_fraction);

  r.positive("analysis.epsilon_factor", a.epsilon_factor);
  if (a.epsilon_factor < 3.0) r.fail("analysis.epsilon_factor", "density scale needs at least three mesh layers");
  r.positive("analysis.sigma_max_factor", a.sigma_max_factor);
  if (a.sigma_count < 1) r.fail("analysis.sigma_count", "must be at least 1");
  if (a.basepoint_count < 1) r.fail("analysis.basepoint_count", "must be at least 1");
  r.positive("analysis.bochner_sigma_factor", a.bochner_sigma_factor);
  if (a.bump_count < 0) r.fail("analysis.bump_count", "must be nonnegative");
  r.positive("analysis.bump_min_factor", a.bump_min_factor);
  r.positive("analysis.bump_max_radius", a.bump_max_radius);
  if (a.geodesic_count < 0) r.fail("analysis.geodesic_count", "must be nonnegative");
  r.positive("analysis.geodesic_min_length", a.geodesic_min_length);
  r.positive("analysis.lipschitz_depth", a.lipschitz_depth);
  if (!(a.required_pass_fraction > 0.0 && a.required_pass_fraction <= 1.0))
    r.fail("analysis.required_pass_fraction", "must lie in (0, 1]");

  if (const Json* t = r.child(doc, "tolerances", p, false)) {
    const std::string tp = "analysis.tolerances";
    auto& tol = a.tol;
    std::vector<std::pair<const char*, double*>> fields{
        {"domain_variation", &tol.domain_variation}, {"energy_bound", &tol.energy_bound},
        {"flux_energy", &tol.flux_energy},           {"order", &tol.order},
        {"target_variation", &tol.target_variation}, {"mean_value", &tol.mean_value},
        {"bochner", &tol.bochner},                   {"conformal", &tol.conformal},
        {"conformality", &tol.conformality},         {"totally_geodesic", &tol.totally_geodesic},
        {"geometry", &tol.geometry}};
    for (auto& [key, ptr] : fields) {
      r.read(*t, key, tp, *ptr);
      // Zero is the documented "derive from h" default for the midpoint test.
      if (std::string(key) == "totally_geodesic" ? *ptr < 0.0 : !(*ptr > 0.0))
        r.fail(tp + "." + key, "must be positive");
    }
    if (t->is_object())
      for (const auto& [key, _] : t->items())
        if (std::none_of(fields.begin(), fields.end(), [&](const auto& f) { return key == f.first; }))
          r.fail(tp + "." + key, "unknown tolerance");
  }
}

}  // namespace

bool AnalysisSpec::enabled(const std::string& check) const {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "quadrature",     "geometry",         "profiles",   "domain_variation", "energy_bound",
      "flux_energy",    "order",            "cauchy_schwarz", "target_variation", "mean_value",
      "bochner",        "conformal",        "totally_geodesic", "lipschitz"};
  return names;
}

ScenarioInvalid::ScenarioInvalid(std::vector<Issue> issues)
    : ConfigError(issues.empty() ? std::string("scenario") : issues.front().field, join_issues(issues)),
      issues_(std::move(issues)) {}

std::vector<double> resolved_sigmas(const Scenario& scenario, double mesh_size) {
  std::vector<double> out = scenario.analysis.sigmas;
  if (out.empty())
    out = analysis::sigma_ladder(scenario.analysis.sigma_max_factor * mesh_size, scenario.analysis.sigma_count);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Scenario parse_scenario_json(const nlohmann::json& doc) {
  Reader r;
  Scenario s;
  if (!doc.is_object()) throw ScenarioInvalid(std::vector<Issue>{{"scenario", "expected a JSON object"}});

  r.read(doc, "name", "", s.name, true);
  r.read(doc, "seed", "", s.seed);
  std::string output;
  r.read(doc, "output", "", output);
  s.output = output.empty() ? std::filesystem::path("out") / (s.name.empty() ? "scenario" : s.name) : std::filesystem::path(output);

  bool domain_ok = false;
  if (const Json* d = r.child(doc, "domain", "", true)) {
    std::string kind;
    r.read(*d, "kind", "domain", kind, true);
    if (!kind.empty()) {
      try {
        s.domain.kind = domain::domain_kind_from_string(kind);
        domain_ok = true;
      } catch (const Error& e) {
        r.fail("domain.kind", e.what());
      }
    }
    r.read(*d, "resolution", "domain", s.domain.resolution);
    r.read(*d, "radius", "domain", s.domain.radius);
    if (const Json* size = r.child(*d, "size", "domain", false)) {
      try {
        auto v = size->get<std::vector<double>>();
        if (v.size() != 2) throw std::runtime_error("expected [x, y]");
        s.domain.size_x = v[0];
        s.domain.size_y = v[1];
      } catch (const std::exception& e) {
        r.fail("domain.size", e.what());
      }
    }
    if (domain_ok && s.domain.resolution < domain::minimal_resolution(s.domain.kind)) {
      r.fail("domain.resolution",
             "below the minimum of " + std::to_string(domain::minimal_resolution(s.domain.kind)));
      domain_ok = false;
    }
    r.positive("domain.radius", s.domain.radius);
    r.positive("domain.size", std::min(s.domain.size_x, s.domain.size_y));
  }

  bool target_ok = false;
  std::optional<target::TargetSpace> space;
  if (const Json* t = r.child(doc, "target", "", true)) {
    s.target = *t;
    std::string kind;
    r.read(*t, "kind", "target", kind, true);
    if (!kind.empty()) {
      try {
        space = target::TargetSpace::from_json(*t);
        target_ok = true;
      } catch (const Error& e) {
        r.fail("target", e.what());
      }
    }
  }

  if (const Json* m = r.child(doc, "map", "", true)) s.map = read_map(r, *m);
  if (const Json* sv = r.child(doc, "solver", "", false)) read_solver(r, *sv, s);
  if (const Json* a = r.child(doc, "analysis", "", false)) read_analysis(r, *a, s.analysis);

  // Cross-field consistency.
  using domain::DomainKind;
  if (domain_ok && target_ok) {
    const bool closed = s.domain.kind == DomainKind::FlatTorus || s.domain.kind == DomainKind::RoundSphere;
    if (s.map.condition == solver::BoundaryCondition::Periodic && !closed)
      r.fail("map.boundary_condition", "periodic maps need a closed domain");
    if (s.map.condition == solver::BoundaryCondition::Dirichlet && closed)
      r.fail("map.boundary_condition", "closed domains take periodic maps");
    if (s.map.kind == "tripod_boundary" &&
        (s.domain.kind != DomainKind::FlatSquare || space->kind() != target::SpaceKind::MetricTree))
      r.fail("map.kind", "tripod_boundary needs a flat_square domain and a tree target");
    if (s.map.kind == "hyperbolic_inclusion" &&
        (s.domain.kind != DomainKind::HyperbolicPatch || space->kind() != target::SpaceKind::HyperbolicPlane))
      r.fail("map.kind", "hyperbolic_inclusion needs a hyperbolic_patch and a hyperbolic_plane target");
    if ((s.map.kind == "linear" || s.map.kind == "affine_lift") &&
        (space->kind() != target::SpaceKind::Euclidean || s.map.A.rows() != space->euclidean_dimension()))
      r.fail("map.A", "rows must match the euclidean target dimension");
    if (s.map.kind == "affine_lift" && s.domain.kind != DomainKind::FlatTorus)
      r.fail("map.kind", "affine_lift needs a flat_torus domain");
    if (s.map.kind == "affine_lift" && s.solve)
      r.fail("solver.run", "an affine lift is not periodic and cannot be relaxed");
    if (s.map.kind == "linear" && s.domain.kind != DomainKind::FlatSquare)
      r.fail("map.kind", "linear maps need a flat_square domain");
  }

  // Radii against the mesh of the configured domain.
  if (domain_ok && r.issues.empty()) {
    try {
      domain::MeshDomain mesh = domain::build_mesh(s.domain);
      const double h = mesh.mesh_size();
      double clearance = 0.0;
      for (int v = 0; v < mesh.vertex_count(); ++v) clearance = std::max(clearance, mesh.clearance(v));
      static const std::vector<std::string> radial{"profiles", "domain_variation", "energy_bound", "flux_energy",
                                                   "order",    "cauchy_schwarz",   "mean_value"};
      const bool uses_sigmas =
          std::any_of(radial.begin(), radial.end(), [&](const std::string& c) { return s.analysis.enabled(c); });
      for (double sigma : uses_sigmas ? resolved_sigmas(s, h) : std::vector<double>{}) {
        if (sigma < 3.0 * h * (1.0 - 1e-12))
          r.fail("analysis.sigmas", "radius " + std::to_string(sigma) + " below three mesh sizes (3h = " +
                                        std::to_string(3.0 * h) + ")");
        if (!(sigma < clearance))
          r.fail("analysis.sigmas", "radius " + std::to_string(sigma) + " exceeds the domain clearance " +
                                        std::to_string(clearance));
      }
      double bochner_sigma = s.analysis.bochner_sigma_factor * h;
      if (s.analysis.enabled("bochner") && bochner_sigma < 3.0 * h * (1.0 - 1e-12))
        r.fail("analysis.bochner_sigma_factor", "averaging radius below three mesh sizes");
    } catch (const Error& e) {
      r.fail("domain", e.what());
    }
  }

  if (!r.issues.empty()) throw ScenarioInvalid(std::move(r.issues));
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioInvalid(std::vector<Issue>{{"scenario", "cannot open " + path.string()}});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioInvalid(std::vector<Issue>{{"scenario", std::string("not valid JSON: ") + e.what()}});
  }
  return parse_scenario_json(doc);
}

}  // namespace hmlab::lab
