#include "hmlab/domain/ball.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "hmlab/error.hpp"

namespace hmlab::domain {

namespace {

std::vector<std::pair<int, double>> hat_weights(const MeshDomain& mesh,
                                                const std::vector<BallSample>& samples) {
  std::map<int, double> acc;
  for (const auto& s : samples)
    for (int c = 0; c < 3; ++c) acc[mesh.faces()[s.location.face][c]] += s.weight * s.location.bary[c];
  return {acc.begin(), acc.end()};
}

}  // namespace

double BallRegion::volume() const {
  double total = 0.0;
  for (const auto& s : interior) total += s.weight;
  return total;
}

double BallRegion::area() const {
  double total = 0.0;
  for (const auto& s : boundary) total += s.weight;
  return total;
}

double minimal_ball_radius(const MeshDomain& mesh) { return 3.0 * mesh.mesh_size(); }

BallRegion geodesic_ball_region(const MeshDomain& mesh, int center, double sigma,
                                const BallOptions& options) {
  if (center < 0 || center >= mesh.vertex_count()) throw InvalidArgument("center out of range");
  const double h = mesh.mesh_size();
  if (sigma < minimal_ball_radius(mesh) * (1.0 - 1e-12))
    throw UnderResolved("ball radius below three mesh layers", sigma, minimal_ball_radius(mesh));
  if (!(sigma < mesh.clearance(center)))
    throw OutOfDomain("ball of radius " + std::to_string(sigma) + " about vertex " +
                      std::to_string(center) + " leaves the domain");
  const ExactModel model = mesh.model();
  const double dr = options.radial_step * h;
  const int rings = std::max(1, static_cast<int>(std::ceil(sigma / dr)));
  const double step = sigma / rings;

  BallRegion region;
  region.center = center;
  region.radius = sigma;
  int hint = mesh.incident_faces(center).front();
  auto place = [&](const Eigen::Vector2d& x, double weight) {
    BallSample s;
    s.chart = x;
    s.point = mesh.exp(center, x);
    auto loc = mesh.locate(s.point, hint);
    if (!loc) throw OutOfDomain("ball sample could not be located in the mesh");
    hint = loc->face;
    s.location = *loc;
    s.weight = weight;
    return s;
  };
  // Midpoint rule in r, uniform in theta; dmu = f(r) dr dtheta.
  for (int ring = 0; ring < rings; ++ring) {
    double r = (ring + 0.5) * step;
    int count = std::max(options.min_angular,
                         static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / step)));
    double dtheta = 2.0 * std::numbers::pi / count;
    double weight = model.warp(r) * step * dtheta;
    for (int k = 0; k < count; ++k) {
      double theta = (k + 0.5 * (ring % 2)) * dtheta;
      region.interior.push_back(place(r * Eigen::Vector2d(std::cos(theta), std::sin(theta)), weight));
    }
  }
  int count = std::max(options.min_boundary,
                       static_cast<int>(std::ceil(2.0 * std::numbers::pi * sigma / step)));
  double dtheta = 2.0 * std::numbers::pi / count;
  double weight = model.warp(sigma) * dtheta;
  for (int k = 0; k < count; ++k) {
    double theta = k * dtheta;
    region.boundary.push_back(place(sigma * Eigen::Vector2d(std::cos(theta), std::sin(theta)), weight));
  }
  region.interior_weights = hat_weights(mesh, region.interior);
  region.boundary_weights = hat_weights(mesh, region.boundary);
  return region;
}

}  // namespace hmlab::domain
