#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "hmlab/domain/mesh.hpp"
#include "hmlab/solver/initial_maps.hpp"

namespace hmlab::testing {

inline domain::MeshDomain flat_mesh(domain::DomainKind kind, int resolution, double size = 1.0) {
  domain::DomainSpec spec;
  spec.kind = kind;
  spec.resolution = resolution;
  spec.size_x = spec.size_y = size;
  return domain::build_mesh(spec);
}

inline domain::MeshDomain curved_mesh(domain::DomainKind kind, int resolution, double radius) {
  domain::DomainSpec spec;
  spec.kind = kind;
  spec.resolution = resolution;
  spec.radius = radius;
  return domain::build_mesh(spec);
}

inline int vertex_near(const domain::MeshDomain& mesh, double x, double y) {
  return mesh.nearest_vertex(Eigen::Vector3d(x, y, 0.0));
}

// u(p) = A p + b read on the planar coordinates, without relaxation.
inline solver::MapState affine(const domain::MeshDomain& mesh, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  auto space = target::TargetSpace::euclidean(static_cast<int>(A.rows()));
  auto bc = mesh.closed() ? solver::BoundaryCondition::Periodic : solver::BoundaryCondition::Dirichlet;
  return solver::linear_map(mesh, space, A, b, bc);
}

inline solver::MapState coordinate_x(const domain::MeshDomain& mesh) {
  Eigen::MatrixXd A(1, 2);
  A << 1.0, 0.0;
  return affine(mesh, A, Eigen::VectorXd::Zero(1));
}

}  // namespace hmlab::testing
