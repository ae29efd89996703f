#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hmlab/domain/mesh.hpp"

namespace hmlab::domain {

// A quadrature point of a geodesic ball, placed through the exponential map at
// the center and located in the mesh.
struct BallSample {
  Eigen::Vector2d chart;  // normal coordinates at the center
  Eigen::Vector3d point;
  Location location;
  double weight = 0.0;  // dmu inside, dSigma on the boundary
};

struct BallRegion {
  int center = -1;
  double radius = 0.0;
  std::vector<BallSample> interior;
  std::vector<BallSample> boundary;
  // Vertex weights obtained by integrating the hat functions, sorted by vertex.
  std::vector<std::pair<int, double>> interior_weights;
  std::vector<std::pair<int, double>> boundary_weights;

  double volume() const;
  double area() const;
};

struct BallOptions {
  // Radial step as a fraction of the mesh size.
  double radial_step = 0.25;
  int min_angular = 8;
  int min_boundary = 32;
};

// Minimum admissible radius: three mesh layers.
double minimal_ball_radius(const MeshDomain& mesh);

BallRegion geodesic_ball_region(const MeshDomain& mesh, int center, double sigma,
                                const BallOptions& options = {});

}  // namespace hmlab::domain
