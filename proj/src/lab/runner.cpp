#include "hmlab/lab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "hmlab/analysis/fit.hpp"
#include "hmlab/format.hpp"
#include "hmlab/solver/initial_maps.hpp"
#include "hmlab/solver/pullback.hpp"

namespace hmlab::lab {

namespace {

using analysis::InequalityMargin;
using domain::MeshDomain;
using solver::MapState;
using target::TargetSpace;

MapState initial_map(const Scenario& s, const MeshDomain& mesh, const TargetSpace& space) {
  const MapSpec& m = s.map;
  if (m.kind == "linear" || m.kind == "affine_lift") {
    if (m.condition == solver::BoundaryCondition::Dirichlet && s.solve) {
      // Affine boundary data; the interior is left to the solver.
      return solver::dirichlet_problem(mesh, space,
                                       [&](int v) { return space.from_vector(m.A * mesh.planar(v) + m.b); });
    }
    return solver::linear_map(mesh, space, m.A, m.b, m.condition);
  }
  if (m.kind == "tripod_boundary")
    return solver::dirichlet_problem(
        mesh, space, [&](int v) { return solver::tripod_boundary_value(mesh, space, v, m.peak); });
  if (m.kind == "hyperbolic_inclusion") {
    if (s.solve)
      return solver::dirichlet_problem(
          mesh, space, [&](int v) { return solver::hyperbolic_inclusion(mesh, space, v, m.contraction); });
    return solver::map_from_function(
        mesh, space, [&](int v) { return solver::hyperbolic_inclusion(mesh, space, v, m.contraction); },
        m.condition);
  }
  if (m.kind == "random") return solver::random_map(mesh, space, s.seed, m.scale, m.condition);
  throw InvalidArgument("unknown map kind '" + m.kind + "'");
}

// Distance from each vertex to where the analysis stops being meaningful:
// the boundary, or for an affine lift on a torus the identification seams.
std::vector<double> analysis_depth(const Scenario& s, const MeshDomain& mesh) {
  std::vector<double> depth(mesh.vertex_count());
  const bool lift = s.map.kind == "affine_lift";
  const double cell_x = mesh.spec().size_x / mesh.spec().resolution;
  const double cell_y = mesh.spec().size_y / mesh.spec().resolution;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (lift) {
      Eigen::Vector2d p = mesh.planar(v);
      depth[v] = std::min({p[0], p[1], mesh.spec().size_x - cell_x - p[0], mesh.spec().size_y - cell_y - p[1]});
    } else {
      depth[v] = mesh.boundary_distance(mesh.vertex(v).position);
    }
  }
  return depth;
}

std::vector<int> choose_basepoints(const Scenario& s, const MeshDomain& mesh, const std::vector<double>& depth,
                                   double sigma_max, double epsilon, std::vector<std::string>& warnings) {
  const double h = mesh.mesh_size();
  const double delta = h / 8.0;
  auto eligible = [&](int v) {
    return !mesh.vertex(v).boundary && depth[v] > sigma_max + epsilon + h && mesh.clearance(v) > sigma_max + delta;
  };
  std::vector<int> out;
  if (!s.analysis.basepoints.empty()) {
    for (int v : s.analysis.basepoints) {
      if (v < 0 || v >= mesh.vertex_count()) {
        warnings.push_back("basepoint " + std::to_string(v) + " out of range");
      } else if (!eligible(v)) {
        warnings.push_back("basepoint " + std::to_string(v) + " excluded: balls do not fit");
      } else {
        out.push_back(v);
      }
    }
    return out;
  }
  std::vector<int> pool;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (eligible(v)) pool.push_back(v);
  if (pool.empty()) {
    warnings.push_back("no vertex admits the requested radii");
    return out;
  }
  // Deepest vertex first, then evenly spaced picks through the eligible set.
  int deepest = *std::max_element(pool.begin(), pool.end(), [&](int a, int b) { return depth[a] < depth[b]; });
  if (!std::isfinite(depth[deepest])) {
    Eigen::Vector3d centre(0.5 * mesh.spec().size_x, 0.5 * mesh.spec().size_y, 0.0);
    deepest = mesh.kind() == domain::DomainKind::FlatTorus ? mesh.nearest_vertex(centre) : pool.front();
    if (!eligible(deepest)) deepest = pool.front();
  }
  out.push_back(deepest);
  const int want = std::min<int>(s.analysis.basepoint_count, static_cast<int>(pool.size()));
  for (int k = 1; static_cast<int>(out.size()) < want && k < 4 * want; ++k) {
    int v = pool[(static_cast<std::size_t>(k) * pool.size()) / want % pool.size()];
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin() + 1, out.end());
  return out;
}

template <typename F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::max(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int worker) {
    try {
      for (int i = worker; i < count; i += threads) body(i);
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

CheckSummary summarize(const std::string& name, const std::vector<InequalityMargin>& margins,
                       double required_fraction) {
  CheckSummary c;
  c.name = name;
  for (const auto& m : margins)
    if (m.check == name) ++c.total, c.passed += m.pass;
  c.pass = c.total == 0 || c.fraction() >= required_fraction;
  if (c.total == 0) c.note = "no admissible samples";
  return c;
}

nlohmann::json real_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

bool RunResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckSummary& c) { return c.pass; });
}

int RunResult::exit_code() const {
  if (solved && !converged) return 3;
  return all_pass() ? 0 : 2;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Scenario s = scenario;
  if (options.checks) s.analysis.checks = *options.checks;
  const AnalysisSpec& a = s.analysis;
  const auto& tol = a.tol;
  const int threads = std::max(1, options.threads);

  RunResult result;
  result.name = s.name;
  RunArtifacts& art = result.artifacts;
  nlohmann::json& summary = art.summary;

  MeshDomain mesh = domain::build_mesh(s.domain);
  TargetSpace space = TargetSpace::from_json(s.target);
  const double h = mesh.mesh_size();
  summary["name"] = s.name;
  summary["seed"] = s.seed;
  summary["domain"] = domain::domain_spec_to_json(s.domain);
  summary["domain"]["mesh_size"] = h;
  summary["domain"]["vertices"] = mesh.vertex_count();
  summary["domain"]["total_measure"] = mesh.total_measure();
  summary["target"] = space.describe();
  summary["curvature_class"] = target::to_string(space.curvature_class());

  // Map.
  MapState map = initial_map(s, mesh, space);
  result.solved = s.solve;
  if (s.solve) {
    solver::SolverConfig config = s.solver;
    config.threads = threads;
    solver::SolveResult solved = solver::solve_harmonic(mesh, std::move(map), config);
    map = std::move(solved.map);
    result.converged = solved.converged;
    result.sweeps = static_cast<int>(solved.log.size()) - 1;
    art.convergence = std::move(solved.log);
    if (!solved.monotone) result.warnings.push_back("energy increased during a sweep");
    if (solved.frechet_failures > 0)
      result.warnings.push_back(std::to_string(solved.frechet_failures) + " Frechet solves hit max_iters");
    summary["solver"]["monotone"] = solved.monotone;
  } else {
    result.converged = true;
    art.convergence.push_back({0, solver::dirichlet_energy(mesh, map), 0.0});
  }
  result.energy = art.convergence.back().energy;
  summary["solver"]["run"] = s.solve;
  summary["solver"]["converged"] = result.converged;
  summary["solver"]["sweeps"] = result.sweeps;
  summary["solver"]["energy"] = result.energy;
  if (art.convergence.size() >= 2) {
    const auto& last = art.convergence.back();
    const auto& prev = art.convergence[art.convergence.size() - 2];
    summary["solver"]["final_relative_decrease"] = prev.energy > 0.0 ? (prev.energy - last.energy) / prev.energy : 0.0;
    summary["solver"]["final_max_move"] = last.max_move;
  }

  if (s.map.kind == "affine_lift") result.warnings.push_back("energy includes the identification seams");
  const target::CurvatureClass cls = space.curvature_class();
  const double epsilon = a.epsilon_factor * h;
  const std::vector<double> sigmas = resolved_sigmas(s, h);
  const std::vector<double> depth = analysis_depth(s, mesh);
  summary["epsilon"] = epsilon;
  summary["sigmas"] = sigmas;

  // Quadrature self-test.
  if (a.enabled("quadrature")) {
    art.quadrature = domain::quadrature_selftest(100, s.seed);
    CheckSummary c{"quadrature", 0, 0, false, {}};
    double worst = 0.0;
    for (const auto& q : art.quadrature) {
      ++c.total;
      c.passed += q.rel_err <= 1e-6;
      worst = std::max(worst, q.rel_err);
    }
    c.pass = c.passed == c.total;
    summary["quadrature"]["max_rel_err"] = worst;
    result.checks.push_back(c);
  }

  // Chart geometry of the domain model.
  if (a.enabled("geometry")) {
    const domain::ExactModel model = mesh.model();
    const double K = model.curvature();
    const double R = model.kind == domain::ModelKind::Flat ? 1.0 : model.radius;
    domain::NormalChart chart = domain::model_chart(0, 2, model, 0.5 * std::min(R, model.injectivity_radius()));
    std::vector<double> ladder;
    for (int i = 0; i < 11; ++i) ladder.push_back(R * (0.05 + 0.025 * i));
    auto bg = domain::bishop_gromov_profile(chart, ladder);
    std::vector<double> xs, ys;
    for (const auto& sample : bg)
      if (sample.residual) xs.push_back(sample.sigma), ys.push_back(*sample.residual);
    analysis::PowerFit fit = analysis::fit_power(xs, ys, 3.0);
    const double predicted = -K * K / 360.0;
    const double scale = std::max(std::abs(predicted), 1e-12);
    art.margins.push_back(analysis::make_margin("bishop_gromov", 0, std::numeric_limits<double>::quiet_NaN(),
                                                tol.geometry * scale, std::abs(fit.coefficient - predicted), 0.0));
    double worst = 0.0;
    for (int i = 1; i <= 30; ++i) {
      double t = 0.3 * R * i / 30.0;
      Eigen::VectorXd x(2);
      x << t, 0.0;
      auto d = domain::evaluate_volume_density(chart, x);
      if (d.exact) worst = std::max(worst, std::abs(*d.exact - d.expansion) / std::pow(t, 4));
    }
    // The fourth-order coefficient of the density is K^2/120 for n = 2.
    art.margins.push_back(analysis::make_margin("expansion", 0, std::numeric_limits<double>::quiet_NaN(),
                                                K * K / 100.0 + 1e-15, worst, 0.0));
    summary["geometry"]["bishop_gromov_coefficient"] = fit.coefficient;
    summary["geometry"]["bishop_gromov_predicted"] = predicted;
    summary["geometry"]["density_fourth_order_ratio"] = worst;
    CheckSummary c = summarize("bishop_gromov", art.margins, 1.0);
    CheckSummary e = summarize("expansion", art.margins, 1.0);
    c.name = "geometry";
    c.total += e.total;
    c.passed += e.passed;
    c.pass = c.passed == c.total;
    c.note.clear();
    result.checks.push_back(c);
  }

  // Density field, needed by the pointwise checks.
  const bool need_field = a.enabled("mean_value") || a.enabled("bochner") || a.enabled("conformal");
  std::optional<solver::EnergyDensityField> field;
  if (need_field) field = solver::energy_density_field(mesh, map, epsilon, threads);

  // Radial profiles at the basepoints.
  static const std::vector<std::string> radial{"profiles", "domain_variation", "energy_bound", "flux_energy",
                                               "order",    "cauchy_schwarz",   "mean_value"};
  const bool need_profiles =
      std::any_of(radial.begin(), radial.end(), [&](const std::string& c) { return a.enabled(c); });
  std::vector<int> basepoints;
  if (need_profiles) {
    basepoints = choose_basepoints(s, mesh, depth, sigmas.back(), epsilon, result.warnings);
    summary["basepoints"] = basepoints;
    const std::vector<double> face_density = solver::face_densities(mesh, map);
    analysis::ProfileOptions popt;
    popt.epsilon = epsilon;
    art.profiles.resize(basepoints.size());
    parallel_for(static_cast<int>(basepoints.size()), threads, [&](int k) {
      art.profiles[k] = analysis::radial_profiles(mesh, map, basepoints[k], sigmas, face_density, popt);
    });
    for (const auto& p : art.profiles)
      for (const auto& msg : p.skipped) result.warnings.push_back("vertex " + std::to_string(p.basepoint) + " " + msg);

    std::vector<double> order_coefficients, dv_slopes;
    int monotone_violations = 0;
    for (const auto& p : art.profiles) {
      auto append = [&](std::vector<InequalityMargin> rows) {
        art.margins.insert(art.margins.end(), rows.begin(), rows.end());
      };
      if (a.enabled("domain_variation")) append(analysis::domain_variation_residual(p, tol.domain_variation));
      if (a.enabled("energy_bound")) append(analysis::energy_bound_check(p, cls, tol.energy_bound));
      if (a.enabled("flux_energy")) append(analysis::flux_energy_check(p, cls, tol.flux_energy));
      if (a.enabled("order")) append(analysis::order_bound_check(p, cls, tol.order));
      if (a.enabled("cauchy_schwarz")) append(analysis::cauchy_schwarz_check(p));
      if (a.enabled("mean_value") && field) {
        double mean = 0.0;
        int count = 0;
        for (int v = 0; v < mesh.vertex_count(); ++v)
          if (field->valid[v]) mean += field->density[v], ++count;
        mean = count ? mean / count : 0.0;
        append(analysis::mean_value_check(mesh, *field, p.basepoint, p.sigmas, cls, tol.mean_value * mean + 1e-14));
      }
      for (std::size_t i = 1; i < p.E.size(); ++i) monotone_violations += p.E[i] < p.E[i - 1];
      std::vector<double> xs, ys, dv;
      for (const auto& o : analysis::order_function(p))
        if (o.value) xs.push_back(o.sigma), ys.push_back(*o.value - 1.0);
      if (!xs.empty()) order_coefficients.push_back(analysis::fit_power(xs, ys, 2.0).coefficient);
      if (p.sigmas.size() >= 2) {
        for (const auto& m : analysis::domain_variation_residual(p, tol.domain_variation)) dv.push_back(m.margin);
        auto nonzero = std::count_if(dv.begin(), dv.end(), [](double x) { return x != 0.0; });
        if (nonzero >= 2) dv_slopes.push_back(analysis::fit_loglog(p.sigmas, dv).slope);
      }
    }
    auto mean_of = [](const std::vector<double>& v) {
      return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    summary["fits"]["order_sigma2_coefficient_mean"] = real_or_null(mean_of(order_coefficients));
    summary["fits"]["order_sigma2_coefficient_min"] =
        real_or_null(order_coefficients.empty() ? NAN : *std::min_element(order_coefficients.begin(), order_coefficients.end()));
    summary["fits"]["domain_variation_loglog_slope_mean"] = real_or_null(mean_of(dv_slopes));

    if (a.enabled("profiles")) {
      CheckSummary c{"profiles", 0, 0, false, {}};
      for (const auto& p : art.profiles) c.total += static_cast<int>(p.sigmas.size());
      c.passed = c.total - monotone_violations;
      c.pass = monotone_violations == 0 && c.total > 0;
      if (c.total == 0) c.note = "no admissible basepoints";
      result.checks.push_back(c);
    }
    for (const char* name : {"domain_variation", "energy_bound", "flux_energy", "order", "mean_value"})
      if (a.enabled(name)) result.checks.push_back(summarize(name, art.margins, a.required_pass_fraction));
    if (a.enabled("cauchy_schwarz")) result.checks.push_back(summarize("cauchy_schwarz", art.margins, 1.0));
  }

  // Weak target variation on random bumps.
  if (a.enabled("target_variation")) {
    CheckSummary c{"target_variation", 0, 0, false, {}};
    try {
      auto bumps = analysis::random_bumps(mesh, a.bump_count, a.bump_min_factor * h, a.bump_max_radius, s.seed);
      for (const auto& bump : bumps) {
        art.margins.push_back(analysis::target_variation_check(mesh, map, bump, tol.target_variation));
        if (space.kind() == target::SpaceKind::HyperbolicPlane)
          art.margins.push_back(analysis::cat1_target_variation_check(mesh, map, bump, tol.target_variation));
      }
      for (const auto& m : art.margins)
        if (m.check == "target_variation" || m.check == "cat1_target_variation") ++c.total, c.passed += m.pass;
      c.pass = c.passed == c.total;
    } catch (const Error& e) {
      c.pass = true;
      c.note = std::string("skipped: ") + e.what();
      result.warnings.push_back("target_variation " + c.note);
    }
    result.checks.push_back(c);
  }

  // Bochner residuals over the whole mesh.
  if (a.enabled("bochner") && field) {
    analysis::BochnerOptions bopt;
    bopt.sigma = a.bochner_sigma_factor * h;
    bopt.rel_tol = tol.bochner;
    bopt.threads = threads;
    analysis::BochnerReport report = analysis::bochner_residual(mesh, map, *field, bopt);
    CheckSummary c{"bochner", 0, 0, false, {}};
    c.total = static_cast<int>(report.rows.size());
    c.passed = report.passed();
    c.pass = c.total == 0 || c.fraction() >= a.required_pass_fraction;
    if (c.total == 0) c.note = "no eligible vertices";
    auto& js = summary["bochner"];
    js["sigma"] = report.sigma;
    js["tolerance"] = report.tolerance;
    js["candidates"] = report.candidates;
    js["eligible"] = c.total;
    js["excluded_low_density"] = report.excluded_low_density;
    js["excluded_clearance"] = report.excluded_clearance;
    js["pass_fraction"] = c.fraction();
    int near = 0;
    for (const auto& f : report.failures)
      near += f.boundary_distance <= 2.0 * epsilon + bopt.sigma || f.singular_distance <= 2.0 * epsilon;
    js["failures"] = report.failures.size();
    js["failures_near_boundary_or_singular_set"] = near;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& f : report.failures)
      list.push_back({{"vertex", f.vertex},
                      {"residual", f.residual},
                      {"boundary_distance", real_or_null(f.boundary_distance)},
                      {"singular_distance", real_or_null(f.singular_distance)}});
    js["failure_list"] = list;
    art.bochner = report;
    result.checks.push_back(c);

    if (a.enabled("conformal")) {
      std::vector<int> vertices;
      for (const auto& row : report.rows) vertices.push_back(row.vertex);
      auto conformal = analysis::conformal_bound_check(mesh, *field, vertices, tol.conformality, tol.conformal);
      CheckSummary cc{"conformal", 0, 0, false, {}};
      cc.note = conformal.note;
      if (conformal.margin) {
        art.margins.push_back(*conformal.margin);
        cc.total = 1;
        cc.passed = conformal.margin->pass;
      }
      cc.pass = cc.passed == cc.total;
      auto& jc = summary["conformal"];
      jc["conformal"] = conformal.conformal;
      jc["max_anisotropy"] = conformal.max_anisotropy;
      jc["min_lambda"] = real_or_null(conformal.min_lambda);
      jc["max_lambda"] = real_or_null(conformal.max_lambda);
      jc["mean_lambda"] = conformal.mean_lambda;
      jc["bound"] = 1.0 / (mesh.dimension() - 1);
      result.checks.push_back(cc);
    }
  } else if (a.enabled("conformal")) {
    result.checks.push_back({"conformal", 0, 0, false, "needs the bochner check for its vertex set"});
  }

  if (a.enabled("totally_geodesic")) {
    CheckSummary c{"totally_geodesic", 0, 0, false, {}};
    if (mesh.kind() != domain::DomainKind::FlatTorus) {
      c.pass = false;
      c.note = "needs a flat torus";
    } else {
      auto samples = analysis::torus_geodesic_samples(mesh, a.geodesic_count, a.geodesic_min_length, s.seed);
      double t = tol.totally_geodesic > 0.0 ? tol.totally_geodesic : 2.0 * h;
      auto report = analysis::totally_geodesic_check(mesh, map, samples, t);
      art.margins.push_back(report.margin);
      c.total = 1;
      c.passed = report.margin.pass;
      c.pass = report.margin.pass;
      summary["totally_geodesic"] = {{"samples", report.samples}, {"max_defect", report.max_defect}, {"tolerance", t}};
    }
    result.checks.push_back(c);
  }

  if (a.enabled("lipschitz")) {
    CheckSummary c{"lipschitz", 0, 0, false, {}};
    try {
      auto est = analysis::lipschitz_constant_estimate(mesh, map, a.lipschitz_depth);
      summary["lipschitz"] = {{"depth", est.depth}, {"constant", est.constant}, {"energy", est.energy},
                              {"ratio", est.ratio}, {"edges", est.edges}};
      c.total = c.passed = 1;
      c.note = "reported, not asserted";
    } catch (const Error& e) {
      c.note = std::string("skipped: ") + e.what();
    }
    c.pass = true;
    result.checks.push_back(c);
  }

  for (auto& c : result.checks) {
    auto& js = summary["checks"][c.name];
    js["total"] = c.total;
    js["passed"] = c.passed;
    js["fraction"] = c.fraction();
    js["pass"] = c.pass;
    if (!c.note.empty()) js["note"] = c.note;
  }
  summary["warnings"] = result.warnings;
  summary["all_pass"] = result.all_pass();
  summary["exit_code"] = result.exit_code();

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.write) {
    std::filesystem::path dir = options.output ? *options.output : s.output;
    result.manifest = emit_report(result, dir);
  }
  return result;
}

std::vector<std::filesystem::path> emit_report(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto open = [&](const char* name) {
    std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    written.push_back(path);
    return out;
  };
  const RunArtifacts& art = result.artifacts;
  // An empty check set yields the summary alone.
  if (!result.checks.empty()) {
    {
      auto out = open("margins.csv");
      analysis::write_margins_csv(out, art.margins);
    }
    {
      auto out = open("bochner.csv");
      if (art.bochner) {
        analysis::write_bochner_csv(out, *art.bochner);
      } else {
        analysis::BochnerReport empty;
        analysis::write_bochner_csv(out, empty);
      }
    }
    {
      auto out = open("convergence.csv");
      solver::write_convergence_csv(out, art.convergence);
    }
    {
      auto out = open("profiles.csv");
      out << "vertex,sigma,E,I,flux,boundary_energy,radial_d2,order,npc_bound,cat1_bound\n";
      for (const auto& p : art.profiles) {
        auto order = analysis::order_function(p);
        for (std::size_t i = 0; i < p.sigmas.size(); ++i)
          out << csv_line({std::to_string(p.basepoint), format_real(p.sigmas[i]), format_real(p.E[i]),
                           format_real(p.I[i]), format_real(p.flux[i]), format_real(p.boundary_energy[i]),
                           format_real(p.radial_d2[i]),
                           format_real(order[i].value ? *order[i].value : std::numeric_limits<double>::quiet_NaN()),
                           format_real(order[i].npc_bound), format_real(order[i].cat1_bound)});
      }
    }
    if (!art.quadrature.empty()) {
      auto out = open("quadrature.csv");
      domain::write_quadrature_csv(out, art.quadrature);
    }
  }
  nlohmann::json summary = art.summary;
  std::vector<std::string> files;
  for (const auto& p : written) files.push_back(p.filename().string());
  files.push_back("summary.json");
  files.push_back("summary.txt");
  summary["files"] = files;
  {
    auto out = open("summary.json");
    out << summary.dump(2) << "\n";
  }
  {
    auto out = open("summary.txt");
    out << "scenario " << result.name << "\n";
    if (result.solved)
      out << "solver: " << (result.converged ? "converged" : "NOT converged") << " after " << result.sweeps
          << " sweeps, energy " << format_real(result.energy) << "\n";
    else
      out << "solver: not run, energy " << format_real(result.energy) << "\n";
    for (const auto& c : result.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << " " << c.passed << "/" << c.total;
      if (!c.note.empty()) out << " (" << c.note << ")";
      out << "\n";
    }
    for (const auto& w : result.warnings) out << "warning: " << w << "\n";
  }
  return written;
}

}  // namespace hmlab::lab
