#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "hmlab/domain/mesh.hpp"
#include "hmlab/error.hpp"
#include "hmlab/solver/harmonic.hpp"

namespace hmlab::lab {

// Initial (or fixed) map. Kinds:
//   linear                u = A p + b into R^k, p the planar coordinates
//   affine_lift           same on a flat torus, read on the fundamental domain
//   tripod_boundary       square boundary split into three arcs over a star tree
//   hyperbolic_inclusion  patch into the hyperbolic plane, optional contraction
//   random                random values with the given scale
struct MapSpec {
  std::string kind;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double peak = 1.0;
  double contraction = 1.0;
  double scale = 1.0;
  solver::BoundaryCondition condition = solver::BoundaryCondition::Dirichlet;
};

struct Tolerances {
  double domain_variation = 0.05;  // relative to sigma * int_{dB}|grad u|^2
  double energy_bound = 0.02;      // relative to E
  double flux_energy = 0.02;       // relative to E
  double order = 0.02;             // absolute on sigma E / I
  double target_variation = 1e-3;  // times the L1 norm of the bump
  double mean_value = 0.01;        // times the mean density
  double bochner = 0.01;           // see BochnerOptions::rel_tol
  double conformal = 0.05;         // absolute on lambda
  double conformality = 0.05;      // anisotropy allowed before the bound is checked
  double totally_geodesic = 0.0;   // 0 selects two mesh sizes
  double geometry = 0.3;           // relative, on fitted next-order coefficients
};

struct AnalysisSpec {
  std::vector<std::string> checks;
  double epsilon_factor = 4.0;       // eps = factor * h
  double sigma_max_factor = 10.0;    // largest ladder radius in mesh sizes
  int sigma_count = 4;               // ladder sigma0, sigma0/sqrt2, ...
  std::vector<double> sigmas;        // explicit radii, override the ladder
  int basepoint_count = 5;
  std::vector<int> basepoints;       // explicit vertices, override the count
  double bochner_sigma_factor = 6.0;
  int bump_count = 50;
  double bump_min_factor = 3.0;      // in mesh sizes
  double bump_max_radius = 0.15;
  int geodesic_count = 100;
  double geodesic_min_length = 0.2;
  double lipschitz_depth = 0.1;
  double required_pass_fraction = 0.95;
  Tolerances tol;

  bool enabled(const std::string& check) const;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  domain::DomainSpec domain;
  nlohmann::json target;
  MapSpec map;
  bool solve = true;
  solver::SolverConfig solver;
  AnalysisSpec analysis;
  std::filesystem::path output;
};

// Every known check name, in report order.
const std::vector<std::string>& known_checks();

struct Issue {
  std::string field;
  std::string message;
};

// All schema violations found in one pass. field() names the first.
class ScenarioInvalid : public ConfigError {
 public:
  explicit ScenarioInvalid(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

// Parses and validates, including the radii against the mesh size of the
// configured domain. A relative output path is resolved against the current
// directory by the runner.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_json(const nlohmann::json& doc);

// Radii used for radial checks, increasing.
std::vector<double> resolved_sigmas(const Scenario& scenario, double mesh_size);

}  // namespace hmlab::lab
