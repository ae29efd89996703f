#pragma once

#include <iosfwd>
#include <vector>

#include "hmlab/solver/map_state.hpp"
#include "hmlab/target/frechet.hpp"

namespace hmlab::solver {

enum class SweepMode { GaussSeidel, Jacobi };

struct SolverConfig {
  int max_sweeps = 20000;
  // Relative energy decrease per sweep; an energy below energy_tol times the
  // initial energy also counts as settled.
  double energy_tol = 1e-10;
  double move_tol = 1e-8;     // largest vertex displacement per sweep
  SweepMode mode = SweepMode::GaussSeidel;
  double damping = 1.0;       // Jacobi only
  int threads = 1;            // Jacobi only
  target::FrechetConfig frechet;
};

struct SweepRecord {
  int sweep = 0;
  double energy = 0.0;
  double max_move = 0.0;
};

struct SolveResult {
  MapState map;
  std::vector<SweepRecord> log;
  bool converged = false;
  bool monotone = true;
  int frechet_failures = 0;
};

// E(u) = sum_e w_e d^2(u_i, u_j); equals the integral of |grad u|^2 for
// piecewise linear maps into euclidean space.
double dirichlet_energy(const domain::MeshDomain& mesh, const MapState& map);

// Weighted Frechet mean of the neighbours of v.
TargetPoint relax_vertex(const domain::MeshDomain& mesh, const MapState& map, int v,
                         const target::FrechetConfig& config = {});

SolveResult solve_harmonic(const domain::MeshDomain& mesh, MapState initial,
                           const SolverConfig& config);

void write_convergence_csv(std::ostream& out, const std::vector<SweepRecord>& log);

}  // namespace hmlab::solver
