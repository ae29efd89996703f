#include "hmlab/solver/map_state.hpp"

#include "hmlab/error.hpp"

namespace hmlab::solver {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "periodic";
}

BoundaryCondition boundary_condition_from_string(std::string_view name) {
  if (name == "dirichlet") return BoundaryCondition::Dirichlet;
  if (name == "periodic") return BoundaryCondition::Periodic;
  throw InvalidArgument("unknown boundary condition '" + std::string(name) + "'");
}

MapState make_map(const domain::MeshDomain& mesh, const TargetSpace& space,
                  std::vector<TargetPoint> values, BoundaryCondition condition) {
  if (static_cast<int>(values.size()) != mesh.vertex_count())
    throw InvalidArgument("map needs one value per vertex");
  if (condition == BoundaryCondition::Periodic && !mesh.closed())
    throw InvalidArgument("periodic maps need a closed domain");
  std::vector<char> fixed(values.size(), 0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    values[v] = space.canonicalize(values[v]);
    if (condition == BoundaryCondition::Dirichlet && mesh.vertex(v).boundary) fixed[v] = 1;
  }
  return MapState{space, std::move(values), std::move(fixed), condition};
}

MapState map_from_function(const domain::MeshDomain& mesh, const TargetSpace& space,
                           const std::function<TargetPoint(int)>& value,
                           BoundaryCondition condition) {
  std::vector<TargetPoint> values(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) values[v] = value(v);
  return make_map(mesh, space, std::move(values), condition);
}

nlohmann::json map_to_json(const MapState& map) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& p : map.values) values.push_back(map.space.point_to_json(p));
  return {{"target", map.space.to_json()},
          {"boundary_condition", to_string(map.condition)},
          {"values", values}};
}

MapState map_from_json(const domain::MeshDomain& mesh, const nlohmann::json& doc) {
  try {
    TargetSpace space = TargetSpace::from_json(doc.at("target"));
    std::vector<TargetPoint> values;
    for (const auto& p : doc.at("values")) values.push_back(space.point_from_json(p));
    return make_map(mesh, space, std::move(values),
                    boundary_condition_from_string(doc.at("boundary_condition").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed map document: ") + e.what());
  }
}

}  // namespace hmlab::solver
