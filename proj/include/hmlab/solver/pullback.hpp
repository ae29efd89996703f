#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hmlab/domain/mesh.hpp"
#include "hmlab/solver/map_state.hpp"

namespace hmlab::solver {

// Value of the map at a point inside a face: the barycentric Frechet mean of
// the three corner values, which is the linear interpolant for euclidean
// targets.
TargetPoint evaluate_map(const domain::MeshDomain& mesh, const MapState& map,
                         const domain::Location& location);

// Evaluates at a surface point, returning nullopt outside the mesh.
std::optional<TargetPoint> evaluate_at(const domain::MeshDomain& mesh, const MapState& map,
                                       const Eigen::Vector3d& point, int hint_face = -1);

// Pull-back tensor at a vertex in the orthonormal frame of the vertex.
struct PullbackTensor {
  int vertex = -1;
  double epsilon = 0.0;
  Eigen::Matrix2d pi = Eigen::Matrix2d::Zero();
  double clipped = 0.0;      // mass of negative eigenvalues removed
  double fit_residual = 0.0; // rms misfit of the quadratic model on the circle

  double trace() const { return pi.trace(); }
};

struct PullbackOptions {
  int directions = 24;
};

// Default scale for density estimates: four mesh sizes.
double default_epsilon(const domain::MeshDomain& mesh);

PullbackTensor pullback_tensor_estimate(const domain::MeshDomain& mesh, const MapState& map, int v,
                                        double epsilon, const PullbackOptions& options = {});

// n times the mean of d^2(u(x), u(v)) / eps^2 over the geodesic eps-circle.
double energy_density(const domain::MeshDomain& mesh, const MapState& map, int v, double epsilon,
                      const PullbackOptions& options = {});

struct EnergyDensityField {
  double epsilon = 0.0;
  std::vector<double> density;    // |grad u|^2
  std::vector<double> residual;   // misfit of the quadratic model, scale e(x)/|x|^2
  std::vector<char> valid;        // eps-circle fits inside the domain
  std::vector<PullbackTensor> tensors;
};

EnergyDensityField energy_density_field(const domain::MeshDomain& mesh, const MapState& map,
                                        double epsilon, int threads = 1,
                                        const PullbackOptions& options = {});

// Per-face density of the piecewise-geodesic map: the cotangent energy of the
// face divided by its area. Summing density times area recovers the energy.
std::vector<double> face_densities(const domain::MeshDomain& mesh, const MapState& map);

// Area of each face (flat triangle with the geodesic side lengths).
std::vector<double> face_areas(const domain::MeshDomain& mesh);

}  // namespace hmlab::solver
