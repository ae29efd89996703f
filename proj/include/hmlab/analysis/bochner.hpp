#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "hmlab/analysis/margins.hpp"

namespace hmlab::analysis {

// (2(n+2)/sigma^2) (avg_{B_sigma} f - f(x0)).
double weak_laplacian(const domain::MeshDomain& mesh, const std::vector<double>& field, int basepoint,
                      double sigma);

struct BochnerOptions {
  double sigma = 0.0;            // averaging radius for the weak Laplacian
  // Residuals pass when >= -tolerance. The tolerance is rel_tol times the mean
  // density over eligible vertices, converted to Laplacian units by 2(n+2)/sigma^2,
  // so it bounds the mean-value deficit as a fraction of the typical density.
  double rel_tol = 0.01;
  double min_density_ratio = 1e-6;
  int threads = 1;
};

struct BochnerRow {
  int vertex = -1;
  double density = 0.0;
  double ric_pi = 0.0;
  double pi_pi = 0.0;
  double density_sq = 0.0;
  double lap = 0.0;            // 1/2 Delta |grad u|^2
  double residual_npc = 0.0;   // 1/2 Delta |grad u|^2 - Ric:pi
  double residual_cat1 = 0.0;  // residual_npc - |grad u|^4 + pi:pi
};

// A failing vertex with its distances to the two places where failures are
// expected: the boundary, and the preimage of the target's singular set.
struct BochnerFailure {
  int vertex = -1;
  double residual = 0.0;
  double boundary_distance = 0.0;
  double singular_distance = std::numeric_limits<double>::infinity();
};

struct BochnerReport {
  double sigma = 0.0;
  double epsilon = 0.0;
  double tolerance = 0.0;
  CurvatureClass cls = CurvatureClass::NPC;
  int candidates = 0;  // interior vertices considered
  std::vector<BochnerRow> rows;  // eligible vertices, in vertex order
  int excluded_low_density = 0;
  int excluded_clearance = 0;
  std::vector<BochnerFailure> failures;  // for the map's curvature class

  int passed() const { return static_cast<int>(rows.size() - failures.size()); }
  double pass_fraction() const;
};

// Vertices whose eps-density and averaging ball both fit: interior vertices
// with clearance above sigma + eps + h.
bool bochner_eligible(const domain::MeshDomain& mesh, const solver::EnergyDensityField& field, int v,
                      double sigma);

// Domain distance from each vertex to the preimage of the target's branch
// points (metric trees); infinite when there are none.
std::vector<double> singular_preimage_distance(const domain::MeshDomain& mesh, const MapState& map);

BochnerReport bochner_residual(const domain::MeshDomain& mesh, const MapState& map,
                               const solver::EnergyDensityField& field, const BochnerOptions& options);

void write_bochner_csv(std::ostream& out, const BochnerReport& report);

}  // namespace hmlab::analysis
