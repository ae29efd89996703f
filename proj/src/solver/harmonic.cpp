#include "hmlab/solver/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "hmlab/error.hpp"
#include "hmlab/format.hpp"

namespace hmlab::solver {

namespace {

struct Relaxation {
  TargetPoint point;
  bool failed = false;
};

Relaxation relax(const domain::MeshDomain& mesh, const MapState& map, int v,
                 const target::FrechetConfig& config, std::vector<TargetPoint>& points,
                 std::vector<double>& weights) {
  points.clear();
  weights.clear();
  for (const auto& nb : mesh.neighbors(v)) {
    points.push_back(map.values[nb.vertex]);
    weights.push_back(nb.weight);
  }
  if (points.empty()) return {map.values[v], false};
  try {
    return {target::frechet_mean(map.space, points, weights, config, &map.values[v]).point, false};
  } catch (const target::Divergence& e) {
    return {e.best(), true};
  }
}

}  // namespace

double dirichlet_energy(const domain::MeshDomain& mesh, const MapState& map) {
  double energy = 0.0;
  for (const auto& e : mesh.edges()) {
    double d = map.space.distance(map.values[e.i], map.values[e.j]);
    energy += e.weight * d * d;
  }
  return energy;
}

TargetPoint relax_vertex(const domain::MeshDomain& mesh, const MapState& map, int v,
                         const target::FrechetConfig& config) {
  if (v < 0 || v >= mesh.vertex_count()) throw InvalidArgument("vertex out of range");
  if (!map.is_free(v)) throw InvalidArgument("cannot relax a fixed boundary vertex");
  std::vector<TargetPoint> points;
  std::vector<double> weights;
  return relax(mesh, map, v, config, points, weights).point;
}

SolveResult solve_harmonic(const domain::MeshDomain& mesh, MapState initial,
                           const SolverConfig& config) {
  if (static_cast<int>(initial.values.size()) != mesh.vertex_count())
    throw InvalidArgument("map does not match the mesh");
  if (config.max_sweeps < 1) throw InvalidArgument("max_sweeps must be positive");
  if (!(config.damping > 0.0 && config.damping <= 1.0)) throw InvalidArgument("damping must lie in (0,1]");

  SolveResult result{std::move(initial), {}, false, true, 0};
  MapState& map = result.map;
  const int nv = mesh.vertex_count();
  std::vector<int> free;
  for (int v = 0; v < nv; ++v)
    if (map.is_free(v)) free.push_back(v);

  double energy = dirichlet_energy(mesh, map);
  result.log.push_back({0, energy, 0.0});
  const double initial_energy = energy;
  std::vector<TargetPoint> points;
  std::vector<double> weights;
  const int threads = std::max(1, config.threads);

  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double max_move = 0.0;
    double next_energy = energy;
    if (config.mode == SweepMode::GaussSeidel) {
      for (int v : free) {
        Relaxation r = relax(mesh, map, v, config.frechet, points, weights);
        result.frechet_failures += r.failed;
        max_move = std::max(max_move, map.space.distance(map.values[v], r.point));
        map.values[v] = std::move(r.point);
      }
      next_energy = dirichlet_energy(mesh, map);
    } else {
      // Proposals depend only on the snapshot, so the outcome does not depend
      // on the thread count.
      std::vector<Relaxation> proposals(free.size());
      auto work = [&](int worker) {
        std::vector<TargetPoint> pts;
        std::vector<double> ws;
        for (std::size_t k = worker; k < free.size(); k += threads)
          proposals[k] = relax(mesh, map, free[k], config.frechet, pts, ws);
      };
      std::vector<std::thread> pool;
      for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
      work(0);
      for (auto& t : pool) t.join();
      for (const auto& p : proposals) result.frechet_failures += p.failed;

      std::vector<TargetPoint> snapshot = map.values;
      double damping = config.damping;
      for (int attempt = 0; attempt < 30; ++attempt) {
        max_move = 0.0;
        for (std::size_t k = 0; k < free.size(); ++k) {
          int v = free[k];
          map.values[v] = map.space.interpolate(snapshot[v], proposals[k].point, damping);
          max_move = std::max(max_move, map.space.distance(snapshot[v], map.values[v]));
        }
        next_energy = dirichlet_energy(mesh, map);
        if (next_energy <= energy) break;
        damping *= 0.5;
      }
      if (next_energy > energy) {
        map.values = snapshot;
        next_energy = energy;
        max_move = 0.0;
      }
    }
    if (next_energy > energy * (1.0 + 1e-12) + 1e-300) result.monotone = false;
    result.log.push_back({sweep, next_energy, max_move});
    double decrease = energy > 0.0 ? (energy - next_energy) / energy : 0.0;
    energy = next_energy;
    // A map collapsing to a constant keeps a fixed relative decrease, so an
    // energy negligible against the initial one also counts as settled.
    bool settled = decrease < config.energy_tol || next_energy <= config.energy_tol * initial_energy;
    if (settled && max_move < config.move_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

void write_convergence_csv(std::ostream& out, const std::vector<SweepRecord>& log) {
  out << "sweep,energy,max_move\n";
  for (const auto& r : log)
    out << csv_line({std::to_string(r.sweep), format_real(r.energy), format_real(r.max_move)});
}

}  // namespace hmlab::solver
