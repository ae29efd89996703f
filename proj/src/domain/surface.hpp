#pragma once

// Intrinsic geometry of the smooth surfaces underlying each mesh kind.

#include <Eigen/Dense>
#include <array>

#include "hmlab/domain/mesh.hpp"

namespace hmlab::domain::detail {

double surface_distance(const DomainSpec& spec, const Eigen::Vector3d& p, const Eigen::Vector3d& q);

// Area of the geodesic triangle with the given side lengths.
double geodesic_triangle_area(const DomainSpec& spec, double a, double b, double c);

// Area of the Euclidean triangle with the given side lengths (0 if degenerate).
double heron_area(double a, double b, double c);

// Number of vertices on the outer ring of a hyperbolic patch.
int hyperbolic_ring_size(const DomainSpec& spec, int ring);

// Geodesic radius of the largest disk inscribed in the outer polygon.
double hyperbolic_inner_radius(const DomainSpec& spec);

}  // namespace hmlab::domain::detail
