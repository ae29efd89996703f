#include "hmlab/analysis/margins.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "hmlab/domain/quadrature.hpp"
#include "hmlab/error.hpp"
#include "hmlab/format.hpp"

namespace hmlab::analysis {

InequalityMargin make_margin(std::string check, int vertex, double sigma, double lhs, double rhs,
                             double tolerance, bool two_sided) {
  InequalityMargin m;
  m.check = std::move(check);
  m.vertex = vertex;
  m.sigma = sigma;
  m.lhs = lhs;
  m.rhs = rhs;
  m.margin = lhs - rhs;
  m.tolerance = tolerance;
  m.two_sided = two_sided;
  m.pass = two_sided ? std::abs(m.margin) <= tolerance : m.margin >= -tolerance;
  return m;
}

double domain_variation_rhs(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi,
                            double sigma) {
  const int n = curvature.dimension();
  TensorContractions c = contract_tensors(curvature, pi);
  return domain::unit_ball_volume(n) * (2.0 * c.ric_pi - curvature.scalar() * pi.trace()) *
         std::pow(sigma, n + 2) / (3.0 * (n + 2));
}

std::vector<InequalityMargin> domain_variation_residual(const RadialProfile& profile, double rel_tol) {
  const int n = profile.dimension;
  std::vector<InequalityMargin> out;
  for (std::size_t i = 0; i < profile.sigmas.size(); ++i) {
    double s = profile.sigmas[i];
    double lhs = (2 - n) * profile.E[i] + s * (profile.boundary_energy[i] - 2.0 * profile.flux[i]);
    double rhs = domain_variation_rhs(profile.curvature, profile.pullback.pi, s);
    double tol = rel_tol * s * profile.boundary_energy[i] + 1e-14;
    out.push_back(make_margin("domain_variation", profile.basepoint, s, lhs, rhs, tol, true));
  }
  return out;
}

std::vector<InequalityMargin> energy_bound_check(const RadialProfile& profile, CurvatureClass cls,
                                                 double rel_tol) {
  const int n = profile.dimension;
  TensorContractions c = contract_tensors(profile.curvature, profile.pullback.pi);
  double density = profile.density();
  std::vector<InequalityMargin> out;
  for (std::size_t i = 0; i < profile.sigmas.size(); ++i) {
    double s = profile.sigmas[i];
    double factor = 1.0;
    if (cls == CurvatureClass::CAT_MINUS_1 && density > 0.0)
      factor += (c.pi_pi - c.density_sq) * s * s / (3.0 * (n + 2) * density);
    double lhs = factor * std::sqrt(profile.I[i] * profile.flux[i]);
    out.push_back(make_margin("energy_bound", profile.basepoint, s, lhs, profile.E[i],
                              rel_tol * profile.E[i] + 1e-14));
  }
  return out;
}

double flux_constant(const RadialProfile& profile, CurvatureClass cls) {
  const int n = profile.dimension;
  double density = profile.density();
  if (!(density > 0.0)) return 0.0;
  TensorContractions c = contract_tensors(profile.curvature, profile.pullback.pi);
  double num = 2.0 * c.ric_pi;
  if (cls == CurvatureClass::CAT_MINUS_1) num += 3.0 * c.density_sq - 3.0 * c.pi_pi;
  return num / (3.0 * (n + 2) * density);
}

std::vector<InequalityMargin> flux_energy_check(const RadialProfile& profile, CurvatureClass cls,
                                                double rel_tol) {
  double A = flux_constant(profile, cls);
  std::vector<InequalityMargin> out;
  for (std::size_t i = 0; i < profile.sigmas.size(); ++i) {
    double s = profile.sigmas[i];
    out.push_back(make_margin("flux_energy", profile.basepoint, s, s * profile.flux[i],
                              (1.0 + A * s * s) * profile.E[i], rel_tol * profile.E[i] + 1e-14));
  }
  return out;
}

std::vector<InequalityMargin> order_bound_check(const RadialProfile& profile, CurvatureClass cls,
                                                double tol) {
  std::vector<InequalityMargin> out;
  for (const OrderPoint& p : order_function(profile)) {
    if (!p.value) continue;
    double bound = cls == CurvatureClass::NPC ? p.npc_bound : p.cat1_bound;
    out.push_back(make_margin("order", profile.basepoint, p.sigma, *p.value, bound, tol));
  }
  return out;
}

std::vector<InequalityMargin> cauchy_schwarz_check(const RadialProfile& profile) {
  std::vector<InequalityMargin> out;
  for (std::size_t i = 0; i < profile.sigmas.size(); ++i) {
    double lhs = 2.0 * std::sqrt(profile.I[i] * profile.flux[i]);
    double rhs = std::abs(profile.radial_d2[i]);
    out.push_back(make_margin("cauchy_schwarz", profile.basepoint, profile.sigmas[i], lhs, rhs,
                              1e-12 * (lhs + rhs) + 1e-300));
  }
  return out;
}

TestBump make_bump(const domain::MeshDomain& mesh, int center, double radius) {
  if (!(radius > mesh.mesh_size()))
    throw UnderResolved("bump radius below one mesh size", radius, mesh.mesh_size());
  if (!(radius + mesh.mesh_size() < mesh.boundary_distance(mesh.vertex(center).position)))
    throw OutOfDomain("bump support touches the boundary");
  if (!(radius < mesh.clearance(center))) throw OutOfDomain("bump wider than the domain clearance");
  TestBump bump;
  bump.center = center;
  bump.radius = radius;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double d = mesh.distance(center, v);
    if (d >= radius) continue;
    double t = 1.0 - (d / radius) * (d / radius);
    bump.values.emplace_back(v, t * t);
    bump.norm += mesh.vertex(v).measure * t * t;
  }
  return bump;
}

std::vector<TestBump> random_bumps(const domain::MeshDomain& mesh, int count, double min_radius,
                                   double max_radius, std::uint64_t seed) {
  if (!(min_radius > 0.0 && max_radius >= min_radius)) throw InvalidArgument("bad bump radii");
  std::vector<int> centers;
  const double need = max_radius + mesh.mesh_size();
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.boundary_distance(mesh.vertex(v).position) > need && mesh.clearance(v) > max_radius)
      centers.push_back(v);
  if (centers.empty()) throw OutOfDomain("no admissible bump centers");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
  std::uniform_real_distribution<double> radius(min_radius, max_radius);
  std::vector<TestBump> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    int c = centers[pick(rng)];
    out.push_back(make_bump(mesh, c, radius(rng)));
  }
  return out;
}

namespace {

InequalityMargin weak_target_variation(const domain::MeshDomain& mesh, const MapState& map,
                                       const TestBump& bump, double abs_tol, bool cat1) {
  const TargetPoint& Q = map.values[bump.center];
  double lhs = 0.0, rhs = 0.0;
  for (const auto& [i, eta] : bump.values) {
    double psi_i = map.space.distance(map.values[i], Q);
    double kappa = 0.0;
    if (cat1) kappa = psi_i > 1e-8 ? psi_i / std::tanh(psi_i) - 1.0 : psi_i * psi_i / 3.0;
    double lap = 0.0, energy = 0.0, extra = 0.0;
    for (const auto& nb : mesh.neighbors(i)) {
      double psi_j = map.space.distance(map.values[nb.vertex], Q);
      double dij = map.space.distance(map.values[i], map.values[nb.vertex]);
      lap += nb.weight * (psi_j * psi_j - psi_i * psi_i);
      energy += nb.weight * dij * dij;
      if (cat1) extra += nb.weight * (dij * dij - (psi_j - psi_i) * (psi_j - psi_i));
    }
    lhs += eta * lap;
    rhs += eta * (energy + kappa * extra);
  }
  return make_margin(cat1 ? "cat1_target_variation" : "target_variation", bump.center, bump.radius, lhs,
                     rhs, abs_tol * bump.norm);
}

}  // namespace

InequalityMargin target_variation_check(const domain::MeshDomain& mesh, const MapState& map,
                                        const TestBump& bump, double abs_tol) {
  return weak_target_variation(mesh, map, bump, abs_tol, false);
}

InequalityMargin cat1_target_variation_check(const domain::MeshDomain& mesh, const MapState& map,
                                             const TestBump& bump, double abs_tol) {
  if (map.space.kind() != target::SpaceKind::HyperbolicPlane)
    throw InvalidArgument("CAT(-1) target variation needs the hyperbolic plane");
  return weak_target_variation(mesh, map, bump, abs_tol, true);
}

double ball_average(const domain::BallRegion& region, const std::vector<double>& field) {
  double num = 0.0, den = 0.0;
  for (const auto& [v, w] : region.interior_weights) num += w * field[v], den += w;
  if (!(den > 0.0)) throw InvalidArgument("empty ball");
  return num / den;
}

double mean_value_phi(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi,
                      CurvatureClass cls) {
  const int n = curvature.dimension();
  TensorContractions c = contract_tensors(curvature, pi);
  double num = c.ric_pi;
  if (cls == CurvatureClass::CAT_MINUS_1) num += c.density_sq - c.pi_pi;
  return num / (n + 2);
}

std::vector<InequalityMargin> mean_value_check(const domain::MeshDomain& mesh,
                                               const solver::EnergyDensityField& field, int basepoint,
                                               const std::vector<double>& sigmas, CurvatureClass cls,
                                               double abs_tol) {
  double phi = mean_value_phi(mesh.curvature(basepoint), field.tensors[basepoint].pi, cls);
  std::vector<InequalityMargin> out;
  for (double s : sigmas) {
    domain::BallRegion region = domain::geodesic_ball_region(mesh, basepoint, s);
    double avg = ball_average(region, field.density);
    out.push_back(make_margin("mean_value", basepoint, s, avg, field.density[basepoint] + phi * s * s,
                              abs_tol));
  }
  return out;
}

void write_margins_csv(std::ostream& out, const std::vector<InequalityMargin>& rows) {
  out << "check,vertex,sigma,lhs,rhs,margin,tolerance,pass\n";
  for (const auto& m : rows)
    out << csv_line({m.check, std::to_string(m.vertex), format_real(m.sigma), format_real(m.lhs),
                     format_real(m.rhs), format_real(m.margin), format_real(m.tolerance),
                     m.pass ? "1" : "0"});
}

}  // namespace hmlab::analysis
