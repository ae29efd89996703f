#include "hmlab/analysis/corollaries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hmlab/error.hpp"
#include "hmlab/solver/harmonic.hpp"

namespace hmlab::analysis {

ConformalReport conformal_bound_check(const domain::MeshDomain& mesh,
                                      const solver::EnergyDensityField& field,
                                      const std::vector<int>& vertices, double conformal_tol,
                                      double tol) {
  const int n = mesh.dimension();
  ConformalReport report;
  if (vertices.empty()) {
    report.note = "no vertices";
    return report;
  }
  report.min_lambda = std::numeric_limits<double>::infinity();
  report.max_lambda = -report.min_lambda;
  int worst = vertices.front();
  double scale = 0.0;
  for (int v : vertices) scale = std::max(scale, field.tensors[v].trace());
  for (int v : vertices) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(field.tensors[v].pi);
    double lo = eig.eigenvalues()[0], hi = eig.eigenvalues()[1];
    // Tensors that vanish up to rounding have no shape to measure.
    double gap = hi + lo > 1e-12 * scale ? (hi - lo) / (hi + lo) : 0.0;
    report.max_anisotropy = std::max(report.max_anisotropy, gap);
    double lambda = field.tensors[v].trace() / n;
    report.min_lambda = std::min(report.min_lambda, lambda);
    if (lambda > report.max_lambda) report.max_lambda = lambda, worst = v;
    report.mean_lambda += lambda;
  }
  report.vertices = static_cast<int>(vertices.size());
  report.mean_lambda /= report.vertices;
  report.conformal = report.max_anisotropy <= conformal_tol;
  if (!report.conformal) {
    report.note = "map is not conformal: anisotropy " + std::to_string(report.max_anisotropy);
    return report;
  }
  report.margin = make_margin("conformal_bound", worst, std::numeric_limits<double>::quiet_NaN(),
                              1.0 / (n - 1), report.max_lambda, tol);
  return report;
}

std::vector<GeodesicSample> torus_geodesic_samples(const domain::MeshDomain& mesh, int count,
                                                   double min_length, std::uint64_t seed) {
  if (mesh.kind() != domain::DomainKind::FlatTorus)
    throw InvalidArgument("geodesic samples need a flat torus");
  const double Lx = mesh.spec().size_x, Ly = mesh.spec().size_y;
  const double margin = mesh.mesh_size();
  const double lo = 1e-9, hx = Lx - margin - 1e-9, hy = Ly - margin - 1e-9;
  if (!(min_length < std::min(hx, hy))) throw InvalidArgument("segments longer than the fundamental domain");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo, hx), uy(lo, hy);
  std::vector<GeodesicSample> out;
  while (static_cast<int>(out.size()) < count) {
    Eigen::Vector2d a(ux(rng), uy(rng)), b(ux(rng), uy(rng));
    if ((b - a).norm() >= min_length) out.push_back({a, b});
  }
  return out;
}

TotallyGeodesicReport totally_geodesic_check(const domain::MeshDomain& mesh, const MapState& map,
                                             const std::vector<GeodesicSample>& samples, double tol) {
  auto value = [&](const Eigen::Vector2d& p) {
    auto loc = mesh.locate(Eigen::Vector3d(p[0], p[1], 0.0));
    if (!loc) throw OutOfDomain("geodesic sample outside the mesh");
    return solver::evaluate_map(mesh, map, *loc);
  };
  TotallyGeodesicReport report;
  report.samples = static_cast<int>(samples.size());
  for (const auto& s : samples) {
    TargetPoint u0 = value(s.start), u1 = value(s.end), um = value(0.5 * (s.start + s.end));
    double D = map.space.distance(u0, u1);
    double defect = std::max(std::abs(D - 2.0 * map.space.distance(u0, um)),
                             std::abs(D - 2.0 * map.space.distance(um, u1)));
    if (D > 0.0) defect /= D;
    report.max_defect = std::max(report.max_defect, defect);
  }
  report.margin = make_margin("totally_geodesic", -1, std::numeric_limits<double>::quiet_NaN(), tol,
                              report.max_defect, 0.0);
  return report;
}

LipschitzEstimate lipschitz_constant_estimate(const domain::MeshDomain& mesh, const MapState& map,
                                              double depth) {
  if (!(depth > 0.0)) throw InvalidArgument("depth must be positive");
  LipschitzEstimate out;
  out.depth = depth;
  for (const auto& e : mesh.edges()) {
    if (mesh.boundary_distance(mesh.vertex(e.i).position) < depth ||
        mesh.boundary_distance(mesh.vertex(e.j).position) < depth)
      continue;
    ++out.edges;
    out.constant = std::max(out.constant, map.space.distance(map.values[e.i], map.values[e.j]) / e.length);
  }
  if (out.edges == 0) throw OutOfDomain("no edges at the requested depth");
  out.energy = solver::dirichlet_energy(mesh, map);
  out.ratio = out.energy > 0.0 ? out.constant / std::sqrt(out.energy) : 0.0;
  return out;
}

}  // namespace hmlab::analysis
