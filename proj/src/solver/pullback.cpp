#include "hmlab/solver/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "hmlab/error.hpp"
#include "hmlab/target/frechet.hpp"

namespace hmlab::solver {

namespace {

struct FaceGeometry {
  std::array<double, 3> cot{};  // at each corner
  double area = 0.0;
};

FaceGeometry face_geometry(const domain::MeshDomain& mesh, const domain::Face& f) {
  std::array<double, 3> len{};
  for (int c = 0; c < 3; ++c) len[c] = mesh.distance(f[(c + 1) % 3], f[(c + 2) % 3]);
  double s = 0.5 * (len[0] + len[1] + len[2]);
  FaceGeometry g;
  g.area = std::sqrt(std::max(0.0, s * (s - len[0]) * (s - len[1]) * (s - len[2])));
  for (int c = 0; c < 3; ++c) {
    double a = len[(c + 1) % 3], b = len[(c + 2) % 3], e = len[c];
    g.cot[c] = (a * a + b * b - e * e) / (4.0 * g.area);
  }
  return g;
}

}  // namespace

TargetPoint evaluate_map(const domain::MeshDomain& mesh, const MapState& map,
                         const domain::Location& location) {
  const auto& face = mesh.faces()[location.face];
  const auto& b = location.bary;
  if (map.space.kind() == target::SpaceKind::Euclidean) {
    // Written relative to the first corner so equal corners reproduce it exactly.
    const TargetPoint& p0 = map.values[face[0]];
    const TargetPoint& p1 = map.values[face[1]];
    const TargetPoint& p2 = map.values[face[2]];
    TargetPoint out = p0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p0[i] + b[1] * (p1[i] - p0[i]) + b[2] * (p2[i] - p0[i]);
    return out;
  }
  std::array<TargetPoint, 3> corners{map.values[face[0]], map.values[face[1]], map.values[face[2]]};
  if (corners[0] == corners[1] && corners[0] == corners[2]) return corners[0];
  int dominant = static_cast<int>(std::max_element(b.begin(), b.end()) - b.begin());
  if (b[dominant] >= 1.0) return corners[dominant];
  return target::frechet_mean(map.space, corners, b, {}, &corners[dominant]).point;
}

std::optional<TargetPoint> evaluate_at(const domain::MeshDomain& mesh, const MapState& map,
                                       const Eigen::Vector3d& point, int hint_face) {
  auto loc = mesh.locate(point, hint_face);
  if (!loc) return std::nullopt;
  return evaluate_map(mesh, map, *loc);
}

double default_epsilon(const domain::MeshDomain& mesh) { return 4.0 * mesh.mesh_size(); }

PullbackTensor pullback_tensor_estimate(const domain::MeshDomain& mesh, const MapState& map, int v,
                                        double epsilon, const PullbackOptions& options) {
  if (v < 0 || v >= mesh.vertex_count()) throw InvalidArgument("vertex out of range");
  if (epsilon < 3.0 * mesh.mesh_size() * (1.0 - 1e-12))
    throw UnderResolved("density scale below three mesh layers", epsilon, 3.0 * mesh.mesh_size());
  if (!(mesh.boundary_distance(mesh.vertex(v).position) > epsilon))
    throw OutOfDomain("density circle leaves the domain at vertex " + std::to_string(v));
  const int k = std::max(3, options.directions);
  const TargetPoint& center = map.values[v];
  int hint = mesh.incident_faces(v).front();
  // Least squares for m(theta) = a cos^2 + 2b cos sin + c sin^2.
  Eigen::MatrixXd design(k, 3);
  Eigen::VectorXd m(k);
  for (int i = 0; i < k; ++i) {
    double theta = 2.0 * std::numbers::pi * i / k;
    double c = std::cos(theta), s = std::sin(theta);
    Eigen::Vector3d point = mesh.exp(v, epsilon * Eigen::Vector2d(c, s));
    auto loc = mesh.locate(point, hint);
    if (!loc) throw OutOfDomain("density circle point not found in the mesh");
    hint = loc->face;
    double d = map.space.distance(evaluate_map(mesh, map, *loc), center);
    design.row(i) << c * c, 2.0 * c * s, s * s;
    m[i] = d * d / (epsilon * epsilon);
  }
  Eigen::Vector3d coef = design.colPivHouseholderQr().solve(m);
  PullbackTensor out;
  out.vertex = v;
  out.epsilon = epsilon;
  out.fit_residual = std::sqrt((design * coef - m).squaredNorm() / k);
  Eigen::Matrix2d pi;
  pi << coef[0], coef[1], coef[1], coef[2];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(pi);
  Eigen::Vector2d lambda = eig.eigenvalues();
  for (int i = 0; i < 2; ++i)
    if (lambda[i] < 0.0) out.clipped += -lambda[i], lambda[i] = 0.0;
  out.pi = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  out.pi = 0.5 * (out.pi + out.pi.transpose()).eval();
  return out;
}

double energy_density(const domain::MeshDomain& mesh, const MapState& map, int v, double epsilon,
                      const PullbackOptions& options) {
  if (epsilon < 3.0 * mesh.mesh_size() * (1.0 - 1e-12))
    throw UnderResolved("density scale below three mesh layers", epsilon, 3.0 * mesh.mesh_size());
  if (!(mesh.boundary_distance(mesh.vertex(v).position) > epsilon))
    throw OutOfDomain("density circle leaves the domain at vertex " + std::to_string(v));
  const int k = std::max(3, options.directions);
  const TargetPoint& center = map.values[v];
  int hint = mesh.incident_faces(v).front();
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double theta = 2.0 * std::numbers::pi * i / k;
    Eigen::Vector3d point = mesh.exp(v, epsilon * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    auto loc = mesh.locate(point, hint);
    if (!loc) throw OutOfDomain("density circle point not found in the mesh");
    hint = loc->face;
    double d = map.space.distance(evaluate_map(mesh, map, *loc), center);
    sum += d * d;
  }
  return mesh.dimension() * sum / k / (epsilon * epsilon);
}

std::vector<double> face_areas(const domain::MeshDomain& mesh) {
  std::vector<double> out;
  out.reserve(mesh.faces().size());
  for (const auto& f : mesh.faces()) out.push_back(face_geometry(mesh, f).area);
  return out;
}

std::vector<double> face_densities(const domain::MeshDomain& mesh, const MapState& map) {
  std::vector<double> out;
  out.reserve(mesh.faces().size());
  for (const auto& f : mesh.faces()) {
    FaceGeometry g = face_geometry(mesh, f);
    double energy = 0.0;
    for (int c = 0; c < 3; ++c) {
      double d = map.space.distance(map.values[f[(c + 1) % 3]], map.values[f[(c + 2) % 3]]);
      energy += 0.5 * g.cot[c] * d * d;
    }
    out.push_back(std::max(0.0, energy / g.area));
  }
  return out;
}

EnergyDensityField energy_density_field(const domain::MeshDomain& mesh, const MapState& map,
                                        double epsilon, int threads, const PullbackOptions& options) {
  const int nv = mesh.vertex_count();
  EnergyDensityField field;
  field.epsilon = epsilon;
  field.density.assign(nv, 0.0);
  field.residual.assign(nv, 0.0);
  field.valid.assign(nv, 0);
  field.tensors.assign(nv, PullbackTensor{});
  std::vector<double> faces = face_densities(mesh, map);
  std::vector<double> areas = face_areas(mesh);
  threads = std::max(1, threads);
  auto work = [&](int worker) {
    for (int v = worker; v < nv; v += threads) {
      if (mesh.boundary_distance(mesh.vertex(v).position) > epsilon) {
        PullbackTensor t = pullback_tensor_estimate(mesh, map, v, epsilon, options);
        field.density[v] = energy_density(mesh, map, v, epsilon, options);
        field.residual[v] = t.fit_residual;
        field.tensors[v] = t;
        field.valid[v] = 1;
      } else {
        // Boundary collar: area-weighted mean of the adjacent face densities.
        double num = 0.0, den = 0.0;
        for (int f : mesh.incident_faces(v)) num += areas[f] * faces[f], den += areas[f];
        field.density[v] = den > 0.0 ? num / den : 0.0;
        field.tensors[v].vertex = v;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
  return field;
}

}  // namespace hmlab::solver
