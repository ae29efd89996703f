#pragma once

#include <Eigen/Dense>
#include <array>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmlab/domain/curvature.hpp"

namespace hmlab::domain {

enum class DomainKind { FlatTorus, FlatSquare, RoundSphere, HyperbolicPatch };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

// resolution: cells per side for grids, icosahedral frequency for the sphere,
// number of rings for the hyperbolic patch. For the patch `radius` is the
// geodesic radius of the disk (curvature is -1); for the sphere it is the
// sphere radius.
struct DomainSpec {
  DomainKind kind = DomainKind::FlatTorus;
  int resolution = 16;
  double size_x = 1.0;
  double size_y = 1.0;
  double radius = 1.0;
};

struct MeshVertex {
  // Embedding coordinates: (x, y, 0) for flat domains, a point on the sphere
  // of the given radius, or a point on the unit hyperboloid.
  Eigen::Vector3d position;
  double measure = 0.0;
  bool boundary = false;
};

struct MeshEdge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
  double length = 0.0;
};

using Face = std::array<int, 3>;

struct Location {
  int face = -1;
  std::array<double, 3> bary{};
};

struct Neighbor {
  int vertex;
  int edge;
  double weight;
};

class MeshDomain {
 public:
  MeshDomain(DomainSpec spec, std::vector<MeshVertex> vertices, std::vector<MeshEdge> edges,
             std::vector<Face> faces);

  const DomainSpec& spec() const { return spec_; }
  DomainKind kind() const { return spec_.kind; }
  int dimension() const { return 2; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  std::span<const MeshVertex> vertices() const { return vertices_; }
  std::span<const MeshEdge> edges() const { return edges_; }
  std::span<const Face> faces() const { return faces_; }
  std::span<const Neighbor> neighbors(int v) const;
  std::span<const int> incident_faces(int v) const;
  const MeshVertex& vertex(int v) const { return vertices_[v]; }
  double mesh_size() const { return mesh_size_; }
  double total_measure() const;
  bool closed() const;

  ExactModel model() const;
  const CurvatureData& curvature(int v) const;
  NormalChart chart(int v, double validity_radius) const;

  // Geometry of the underlying smooth surface.
  double distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q) const;
  double distance(int a, int b) const;
  // Orthonormal tangent frame at a vertex, in ambient coordinates.
  std::pair<Eigen::Vector3d, Eigen::Vector3d> frame(int v) const;
  Eigen::Vector3d exp(int center, const Eigen::Vector2d& v) const;
  Eigen::Vector2d log(int center, const Eigen::Vector3d& p) const;
  // Largest radius for which geodesic balls about v stay in the domain.
  double clearance(int v) const;
  // Distance to the domain boundary (infinite for closed domains).
  double boundary_distance(const Eigen::Vector3d& p) const;

  std::optional<Location> locate(const Eigen::Vector3d& p, int hint_face = -1) const;
  int nearest_vertex(const Eigen::Vector3d& p) const;
  // Planar chart coordinates (x, y) for flat domains, polar projection for the
  // curved models; used for boundary data and initial maps.
  Eigen::Vector2d planar(int v) const;

 private:
  std::optional<Location> locate_grid(const Eigen::Vector3d& p) const;
  std::optional<Location> locate_walk(const Eigen::Vector3d& p, int hint_face) const;
  bool barycentric(int face, const Eigen::Vector3d& p, std::array<double, 3>& bary) const;

  DomainSpec spec_;
  std::vector<MeshVertex> vertices_;
  std::vector<MeshEdge> edges_;
  std::vector<Face> faces_;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::array<int, 3>> face_adjacency_;  // across the edge opposite each corner
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> frames_;
  CurvatureData curvature_ = CurvatureData::flat(2);
  double mesh_size_ = 0.0;
};

// Minimal resolution per domain kind.
int minimal_resolution(DomainKind kind);

MeshDomain build_mesh(const DomainSpec& spec);

nlohmann::json mesh_to_json(const MeshDomain& mesh);
MeshDomain mesh_from_json(const nlohmann::json& doc);
nlohmann::json domain_spec_to_json(const DomainSpec& spec);

// Minkowski helpers shared with the hyperbolic target.
double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b);
double hyperboloid_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q);
Eigen::Vector3d hyperboloid_point(double r, double theta);
Eigen::Vector3d project_hyperboloid(const Eigen::Vector3d& p);

}  // namespace hmlab::domain
