#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmlab/analysis/margins.hpp"

namespace hmlab::analysis {

struct ConformalReport {
  // Largest relative eigenvalue gap (l_max - l_min)/(l_max + l_min) of pi.
  double max_anisotropy = 0.0;
  bool conformal = false;
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  double mean_lambda = 0.0;
  int vertices = 0;
  // lhs = 1/(n-1), rhs = max lambda; present only when the map is conformal.
  std::optional<InequalityMargin> margin;
  std::string note;
};

// Conformal factor lambda = tr(pi)/n over the given vertices. The bound is
// checked only when every tensor has anisotropy below `conformal_tol`.
ConformalReport conformal_bound_check(const domain::MeshDomain& mesh,
                                      const solver::EnergyDensityField& field,
                                      const std::vector<int>& vertices, double conformal_tol,
                                      double tol);

struct GeodesicSample {
  Eigen::Vector2d start;
  Eigen::Vector2d end;
};

// Random straight segments of a flat torus lying inside [margin, L - margin]^2,
// i.e. away from the faces that wrap around the identification seams.
std::vector<GeodesicSample> torus_geodesic_samples(const domain::MeshDomain& mesh, int count,
                                                   double min_length, std::uint64_t seed);

struct TotallyGeodesicReport {
  int samples = 0;
  double max_defect = 0.0;  // relative midpoint defect
  InequalityMargin margin;  // lhs = tol, rhs = max defect
};

// Midpoint test along constant-speed domain geodesics: the defect of a sample
// is max(|D - 2 d(u0,um)|, |D - 2 d(um,u1)|) with D = d(u0,u1), divided by D
// when D > 0.
TotallyGeodesicReport totally_geodesic_check(const domain::MeshDomain& mesh, const MapState& map,
                                             const std::vector<GeodesicSample>& samples, double tol);

struct LipschitzEstimate {
  double constant = 0.0;  // max d(u_i,u_j)/l_e over deep edges
  double energy = 0.0;
  double ratio = 0.0;     // constant / sqrt(energy), the comparison constant C(r)
  int edges = 0;
  double depth = 0.0;
};

LipschitzEstimate lipschitz_constant_estimate(const domain::MeshDomain& mesh, const MapState& map,
                                              double depth);

}  // namespace hmlab::analysis
