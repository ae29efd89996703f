#pragma once

#include <functional>
#include <nlohmann/json.hpp>
#include <vector>

#include "hmlab/domain/mesh.hpp"
#include "hmlab/target/space.hpp"

namespace hmlab::solver {

using target::TargetPoint;
using target::TargetSpace;

enum class BoundaryCondition { Dirichlet, Periodic };

std::string to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(std::string_view name);

// Vertex values of a map into a target. Dirichlet maps keep mesh-boundary
// vertices fixed; periodic maps live on closed meshes and fix nothing.
struct MapState {
  TargetSpace space;
  std::vector<TargetPoint> values;
  std::vector<char> fixed;
  BoundaryCondition condition = BoundaryCondition::Dirichlet;

  bool is_free(int v) const { return !fixed[v]; }
};

MapState make_map(const domain::MeshDomain& mesh, const TargetSpace& space,
                  std::vector<TargetPoint> values, BoundaryCondition condition);

MapState map_from_function(const domain::MeshDomain& mesh, const TargetSpace& space,
                           const std::function<TargetPoint(int)>& value,
                           BoundaryCondition condition);

nlohmann::json map_to_json(const MapState& map);
MapState map_from_json(const domain::MeshDomain& mesh, const nlohmann::json& doc);

}  // namespace hmlab::solver
