#include "hmlab/analysis/bochner.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <thread>

#include "hmlab/error.hpp"
#include "hmlab/format.hpp"

namespace hmlab::analysis {

double weak_laplacian(const domain::MeshDomain& mesh, const std::vector<double>& field, int basepoint,
                      double sigma) {
  domain::BallRegion region = domain::geodesic_ball_region(mesh, basepoint, sigma);
  const int n = mesh.dimension();
  return 2.0 * (n + 2) / (sigma * sigma) * (ball_average(region, field) - field[basepoint]);
}

double BochnerReport::pass_fraction() const {
  return rows.empty() ? 0.0 : static_cast<double>(passed()) / static_cast<double>(rows.size());
}

bool bochner_eligible(const domain::MeshDomain& mesh, const solver::EnergyDensityField& field, int v,
                      double sigma) {
  if (mesh.vertex(v).boundary || !field.valid[v]) return false;
  double need = sigma + field.epsilon + mesh.mesh_size();
  return mesh.clearance(v) > sigma && mesh.boundary_distance(mesh.vertex(v).position) > need;
}

std::vector<double> singular_preimage_distance(const domain::MeshDomain& mesh, const MapState& map) {
  const int nv = mesh.vertex_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(nv, inf);
  if (map.space.kind() != target::SpaceKind::MetricTree) return dist;
  const auto& tree = map.space.metric_tree();
  std::vector<TargetPoint> branch;
  for (int node = 0; node < tree.node_count(); ++node)
    if (tree.incident(node).size() >= 3) branch.push_back(map.space.tree_node(node));
  if (branch.empty()) return dist;

  // Seeds: vertices whose star image reaches a branch point.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  for (int v = 0; v < nv; ++v) {
    double reach = 0.0;
    for (const auto& nb : mesh.neighbors(v))
      reach = std::max(reach, map.space.distance(map.values[v], map.values[nb.vertex]));
    for (const auto& b : branch)
      if (map.space.distance(map.values[v], b) <= reach) {
        dist[v] = 0.0;
        queue.emplace(0.0, v);
        break;
      }
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& nb : mesh.neighbors(v)) {
      double nd = d + mesh.edges()[nb.edge].length;
      if (nd < dist[nb.vertex]) {
        dist[nb.vertex] = nd;
        queue.emplace(nd, nb.vertex);
      }
    }
  }
  return dist;
}

BochnerReport bochner_residual(const domain::MeshDomain& mesh, const MapState& map,
                               const solver::EnergyDensityField& field, const BochnerOptions& options) {
  if (!(options.sigma > 0.0)) throw InvalidArgument("Bochner averaging radius must be positive");
  const int nv = mesh.vertex_count();
  const int n = mesh.dimension();
  BochnerReport report;
  report.sigma = options.sigma;
  report.epsilon = field.epsilon;
  report.cls = map.space.curvature_class();

  double max_density = 0.0;
  for (int v = 0; v < nv; ++v) max_density = std::max(max_density, field.density[v]);

  std::vector<int> eligible;
  for (int v = 0; v < nv; ++v) {
    if (mesh.vertex(v).boundary) continue;
    ++report.candidates;
    if (!bochner_eligible(mesh, field, v, options.sigma)) {
      ++report.excluded_clearance;
    } else if (!(field.density[v] >= options.min_density_ratio * max_density) || max_density == 0.0) {
      ++report.excluded_low_density;
    } else {
      eligible.push_back(v);
    }
  }

  report.rows.resize(eligible.size());
  const int threads = std::max(1, options.threads);
  std::vector<std::string> errors(threads);
  auto work = [&](int worker) {
    try {
      for (std::size_t k = worker; k < eligible.size(); k += threads) {
        int v = eligible[k];
        BochnerRow& row = report.rows[k];
        TensorContractions c = contract_tensors(mesh.curvature(v), field.tensors[v].pi);
        row.vertex = v;
        row.density = field.density[v];
        row.ric_pi = c.ric_pi;
        row.pi_pi = c.pi_pi;
        row.density_sq = c.density_sq;
        row.lap = 0.5 * weak_laplacian(mesh, field.density, v, options.sigma);
        row.residual_npc = row.lap - c.ric_pi;
        row.residual_cat1 = row.residual_npc - c.density_sq + c.pi_pi;
      }
    } catch (const std::exception& e) {
      errors[worker] = e.what();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw Error("Bochner residual: " + e);

  double mean = 0.0;
  for (const auto& row : report.rows) mean += row.density;
  if (!report.rows.empty()) mean /= static_cast<double>(report.rows.size());
  report.tolerance = options.rel_tol * mean * (n + 2) / (options.sigma * options.sigma);

  std::vector<double> singular = singular_preimage_distance(mesh, map);
  for (const auto& row : report.rows) {
    double r = report.cls == CurvatureClass::NPC ? row.residual_npc : row.residual_cat1;
    if (r >= -report.tolerance) continue;
    BochnerFailure f;
    f.vertex = row.vertex;
    f.residual = r;
    f.boundary_distance = mesh.boundary_distance(mesh.vertex(row.vertex).position);
    f.singular_distance = singular[row.vertex];
    report.failures.push_back(f);
  }
  return report;
}

void write_bochner_csv(std::ostream& out, const BochnerReport& report) {
  out << "vertex,density,ric_pi,pi_pi,lap,residual_npc,residual_cat1\n";
  for (const auto& r : report.rows)
    out << csv_line({std::to_string(r.vertex), format_real(r.density), format_real(r.ric_pi),
                     format_real(r.pi_pi), format_real(r.lap), format_real(r.residual_npc),
                     format_real(r.residual_cat1)});
}

}  // namespace hmlab::analysis
