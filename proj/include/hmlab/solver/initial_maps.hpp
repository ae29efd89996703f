#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "hmlab/solver/map_state.hpp"

namespace hmlab::solver {

// Dirichlet problem: boundary vertices take the given values, interior
// vertices start at the Frechet mean of all boundary values.
MapState dirichlet_problem(const domain::MeshDomain& mesh, const TargetSpace& space,
                           const std::function<TargetPoint(int)>& boundary_value);

// u(v) = A p(v) + b into R^k, with p the planar coordinates of the vertex.
MapState linear_map(const domain::MeshDomain& mesh, const TargetSpace& space,
                    const Eigen::MatrixXd& A, const Eigen::VectorXd& b, BoundaryCondition condition);

// Square boundary split by arc length into three arcs; arc k runs out along
// tree edge k to distance `peak` and back, so arc endpoints map to node 0.
TargetPoint tripod_boundary_value(const domain::MeshDomain& mesh, const TargetSpace& space, int v,
                                  double peak);

// The inclusion of a hyperbolic patch into the hyperbolic plane, optionally
// composed with the radial contraction exp(c log) about the origin.
TargetPoint hyperbolic_inclusion(const domain::MeshDomain& mesh, const TargetSpace& space, int v,
                                 double contraction = 1.0);

MapState random_map(const domain::MeshDomain& mesh, const TargetSpace& space, std::uint64_t seed,
                    double scale, BoundaryCondition condition);

}  // namespace hmlab::solver
