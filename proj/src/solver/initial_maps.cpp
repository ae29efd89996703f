#include "hmlab/solver/initial_maps.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hmlab/error.hpp"
#include "hmlab/target/frechet.hpp"
#include "hmlab/target/random.hpp"

namespace hmlab::solver {

MapState dirichlet_problem(const domain::MeshDomain& mesh, const TargetSpace& space,
                           const std::function<TargetPoint(int)>& boundary_value) {
  std::vector<TargetPoint> values(mesh.vertex_count());
  std::vector<TargetPoint> boundary;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mesh.vertex(v).boundary) {
      values[v] = space.canonicalize(boundary_value(v));
      boundary.push_back(values[v]);
    }
  if (boundary.empty()) throw InvalidArgument("Dirichlet problem on a domain without boundary");
  std::vector<double> weights(boundary.size(), 1.0);
  TargetPoint start = target::frechet_mean(space, boundary, weights).point;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (!mesh.vertex(v).boundary) values[v] = start;
  return make_map(mesh, space, std::move(values), BoundaryCondition::Dirichlet);
}

MapState linear_map(const domain::MeshDomain& mesh, const TargetSpace& space,
                    const Eigen::MatrixXd& A, const Eigen::VectorXd& b, BoundaryCondition condition) {
  if (A.cols() != 2 || A.rows() != space.euclidean_dimension() || b.size() != A.rows())
    throw InvalidArgument("linear map shape does not match the target");
  return map_from_function(
      mesh, space, [&](int v) { return space.from_vector(A * mesh.planar(v) + b); }, condition);
}

TargetPoint tripod_boundary_value(const domain::MeshDomain& mesh, const TargetSpace& space, int v,
                                  double peak) {
  if (mesh.kind() != domain::DomainKind::FlatSquare)
    throw InvalidArgument("tripod boundary data needs a square domain");
  const auto& tree = space.metric_tree();
  if (tree.node_count() < 4) throw InvalidArgument("tripod data needs three edges at node 0");
  const double L = mesh.spec().size_x;
  const double eps = 1e-12 * L;
  Eigen::Vector2d p = mesh.planar(v);
  double s;
  if (std::abs(p[1]) < eps) s = p[0];
  else if (std::abs(p[0] - L) < eps) s = L + p[1];
  else if (std::abs(p[1] - L) < eps) s = 2.0 * L + (L - p[0]);
  else if (std::abs(p[0]) < eps) s = 3.0 * L + (L - p[1]);
  else throw InvalidArgument("vertex is not on the square boundary");
  double u = 3.0 * s / (4.0 * L);
  int arc = std::min(2, static_cast<int>(std::floor(u)));
  double local = u - arc;
  double offset = peak * std::sin(std::numbers::pi * local);
  // Edge `arc` is the one joining node 0 to node arc+1 in a star.
  int edge = tree.next_edge(0, arc + 1);
  const auto& e = tree.edge(edge);
  if (!(offset <= e.length)) throw InvalidArgument("tripod peak exceeds the arm length");
  return space.tree_point(edge, e.a == 0 ? offset : e.length - offset);
}

TargetPoint hyperbolic_inclusion(const domain::MeshDomain& mesh, const TargetSpace& space, int v,
                                 double contraction) {
  if (mesh.kind() != domain::DomainKind::HyperbolicPatch || space.kind() != target::SpaceKind::HyperbolicPlane)
    throw InvalidArgument("inclusion needs a hyperbolic patch and the hyperbolic plane");
  Eigen::Vector2d x = mesh.planar(v);
  return space.hyperbolic_polar(contraction * x.norm(), std::atan2(x[1], x[0]));
}

MapState random_map(const domain::MeshDomain& mesh, const TargetSpace& space, std::uint64_t seed,
                    double scale, BoundaryCondition condition) {
  std::mt19937_64 rng(seed);
  return map_from_function(
      mesh, space, [&](int) { return target::random_point(space, rng, scale); }, condition);
}

}  // namespace hmlab::solver
