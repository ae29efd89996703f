#include "hmlab/analysis/profiles.hpp"

#include <cmath>

#include "hmlab/error.hpp"

namespace hmlab::analysis {

namespace {

double sq(double x) { return x * x; }

}  // namespace

RadialProfile radial_profiles(const domain::MeshDomain& mesh, const MapState& map, int basepoint,
                              const std::vector<double>& sigmas, const ProfileOptions& options) {
  return radial_profiles(mesh, map, basepoint, sigmas, solver::face_densities(mesh, map), options);
}

RadialProfile radial_profiles(const domain::MeshDomain& mesh, const MapState& map, int basepoint,
                              const std::vector<double>& sigmas,
                              const std::vector<double>& face_density,
                              const ProfileOptions& options) {
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] > sigmas[i - 1])) throw InvalidArgument("radii must be increasing");
  const double h = mesh.mesh_size();
  const double delta = options.delta_fraction * h;
  const double epsilon = options.epsilon > 0.0 ? options.epsilon : solver::default_epsilon(mesh);
  const domain::ExactModel model = mesh.model();

  RadialProfile profile;
  profile.basepoint = basepoint;
  profile.Q = map.values[basepoint];
  profile.curvature = mesh.curvature(basepoint);
  profile.dimension = mesh.dimension();
  profile.pullback = solver::pullback_tensor_estimate(mesh, map, basepoint, epsilon);

  for (double sigma : sigmas) {
    if (!(sigma + delta < mesh.clearance(basepoint))) {
      profile.skipped.push_back("sigma=" + std::to_string(sigma) + ": ball leaves the domain");
      continue;
    }
    domain::BallRegion region;
    try {
      region = domain::geodesic_ball_region(mesh, basepoint, sigma, options.ball);
    } catch (const Error& e) {
      profile.skipped.push_back("sigma=" + std::to_string(sigma) + ": " + e.what());
      continue;
    }
    double E = 0.0;
    for (const auto& s : region.interior) E += s.weight * face_density[s.location.face];

    double I = 0.0, flux = 0.0, boundary_energy = 0.0, radial = 0.0;
    const double dtheta_chart = delta * sigma / model.warp(sigma);
    int hint = region.boundary.front().location.face;
    auto value_at = [&](const Eigen::Vector2d& x) {
      Eigen::Vector3d p = mesh.exp(basepoint, x);
      auto loc = mesh.locate(p, hint);
      if (!loc) throw OutOfDomain("difference quotient point outside the mesh");
      hint = loc->face;
      return solver::evaluate_map(mesh, map, *loc);
    };
    for (const auto& s : region.boundary) {
      Eigen::Vector2d radial_dir = s.chart / sigma;
      Eigen::Vector2d angular_dir(-radial_dir[1], radial_dir[0]);
      TargetPoint u0 = solver::evaluate_map(mesh, map, s.location);
      TargetPoint out = value_at((sigma + delta) * radial_dir);
      TargetPoint in = value_at((sigma - delta) * radial_dir);
      TargetPoint left = value_at(s.chart + dtheta_chart * angular_dir);
      TargetPoint right = value_at(s.chart - dtheta_chart * angular_dir);
      double d0 = map.space.distance(u0, profile.Q);
      double g_r = map.space.distance(out, in) / (2.0 * delta);
      double g_t = map.space.distance(left, right) / (2.0 * delta);
      // |D| <= g_r by the triangle inequality, so Cauchy-Schwarz holds as computed.
      double D = (map.space.distance(out, profile.Q) - map.space.distance(in, profile.Q)) / (2.0 * delta);
      I += s.weight * d0 * d0;
      flux += s.weight * g_r * g_r;
      boundary_energy += s.weight * (sq(g_r) + sq(g_t));
      radial += s.weight * 2.0 * d0 * D;
    }
    profile.sigmas.push_back(sigma);
    profile.E.push_back(E);
    profile.I.push_back(I);
    profile.flux.push_back(flux);
    profile.boundary_energy.push_back(boundary_energy);
    profile.radial_d2.push_back(radial);
    profile.volume.push_back(region.volume());
    profile.area.push_back(region.area());
  }
  return profile;
}

TensorContractions contract_tensors(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi) {
  if (pi.rows() != curvature.dimension() || pi.cols() != curvature.dimension())
    throw InvalidArgument("dimension mismatch");
  TensorContractions out;
  out.ric_pi = (curvature.ricci().array() * pi.array()).sum();
  out.pi_pi = (pi.array() * pi.array()).sum();
  out.density_sq = sq(pi.trace());
  return out;
}

std::vector<OrderPoint> order_function(const RadialProfile& profile) {
  const int n = profile.dimension;
  TensorContractions c = contract_tensors(profile.curvature, profile.pullback.pi);
  double density = profile.density();
  std::vector<OrderPoint> out;
  for (std::size_t i = 0; i < profile.sigmas.size(); ++i) {
    OrderPoint p;
    double s = profile.sigmas[i];
    p.sigma = s;
    if (profile.I[i] > 0.0) p.value = s * profile.E[i] / profile.I[i];
    if (density > 0.0) {
      double scale = s * s / (3.0 * (n + 2) * density);
      p.npc_bound = 1.0 + 2.0 * c.ric_pi * scale;
      p.cat1_bound = 1.0 + (2.0 * c.ric_pi + c.density_sq - c.pi_pi) * scale;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace hmlab::analysis
