#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hmlab/analysis/profiles.hpp"

namespace hmlab::analysis {

// One inequality evaluated at a vertex (and radius, for radial checks).
// Each check orients lhs and rhs so that the claim reads lhs >= rhs; then
// margin = lhs - rhs and pass <=> margin >= -tolerance. Two-sided checks are
// identities and pass <=> |margin| <= tolerance.
struct InequalityMargin {
  std::string check;
  int vertex = -1;
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool two_sided = false;
};

InequalityMargin make_margin(std::string check, int vertex, double sigma, double lhs, double rhs,
                             double tolerance, bool two_sided = false);

// Right side of the domain variation identity:
// omega_n (2 Ric:pi - S |grad u|^2) sigma^{n+2} / (3(n+2)). Vanishes when n = 2.
double domain_variation_rhs(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi,
                            double sigma);

// lhs = (2-n)E + sigma int_{dB} (|grad u|^2 - 2|du/dr|^2), rhs as above;
// two-sided with tolerance rel_tol * sigma * int_{dB}|grad u|^2.
std::vector<InequalityMargin> domain_variation_residual(const RadialProfile& profile, double rel_tol);

// NPC: sqrt(I flux) >= E. CAT(-1) multiplies the left side by
// 1 + (pi:pi - |grad u|^4) sigma^2 / (3(n+2)|grad u|^2). Tolerance rel_tol * E.
std::vector<InequalityMargin> energy_bound_check(const RadialProfile& profile, CurvatureClass cls,
                                                 double rel_tol);

// sigma flux >= (1 + A sigma^2) E. Tolerance rel_tol * E.
double flux_constant(const RadialProfile& profile, CurvatureClass cls);
std::vector<InequalityMargin> flux_energy_check(const RadialProfile& profile, CurvatureClass cls,
                                                double rel_tol);

// sigma E / I >= order lower bound; absolute tolerance on the ratio.
std::vector<InequalityMargin> order_bound_check(const RadialProfile& profile, CurvatureClass cls,
                                                double tol);

// 2 sqrt(I flux) >= |int_{dB} d/dr d^2(u,Q)|, exact up to rounding.
std::vector<InequalityMargin> cauchy_schwarz_check(const RadialProfile& profile);

// Nonnegative test function on vertices: eta = (1 - (d/rho)^2)^2 inside the
// geodesic disk of radius rho about `center`.
struct TestBump {
  int center = -1;
  double radius = 0.0;
  std::vector<std::pair<int, double>> values;  // sorted by vertex
  double norm = 0.0;                           // sum of mu_v eta_v
};

TestBump make_bump(const domain::MeshDomain& mesh, int center, double radius);

// Random bumps with centers and radii drawn so the support avoids the
// boundary; radii in [min_radius, max_radius].
std::vector<TestBump> random_bumps(const domain::MeshDomain& mesh, int count, double min_radius,
                                   double max_radius, std::uint64_t seed);

// Discrete weak form of 1/2 Delta d^2(u,Q) >= |grad u|^2 with Q = u(center):
// lhs = sum_i eta_i sum_j w_ij (f_j - f_i), rhs = sum_i eta_i sum_j w_ij d^2(u_i,u_j),
// f = d^2(u,Q). Tolerance abs_tol * norm(eta).
InequalityMargin target_variation_check(const domain::MeshDomain& mesh, const MapState& map,
                                        const TestBump& bump, double abs_tol);

// CAT(-1) version: rhs gains sum_i eta_i kappa_i sum_j w_ij (d_ij^2 - (psi_j - psi_i)^2)
// with psi = d(u,Q) and kappa = psi coth psi - 1.
InequalityMargin cat1_target_variation_check(const domain::MeshDomain& mesh, const MapState& map,
                                             const TestBump& bump, double abs_tol);

// Average of a vertex field over a ball, with the hat-function weights.
double ball_average(const domain::BallRegion& region, const std::vector<double>& field);

// avg_{B} f >= f(x0) + phi sigma^2 for f = |grad u|^2; tolerance abs_tol.
double mean_value_phi(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi,
                      CurvatureClass cls);
std::vector<InequalityMargin> mean_value_check(const domain::MeshDomain& mesh,
                                               const solver::EnergyDensityField& field, int basepoint,
                                               const std::vector<double>& sigmas, CurvatureClass cls,
                                               double abs_tol);

void write_margins_csv(std::ostream& out, const std::vector<InequalityMargin>& rows);

}  // namespace hmlab::analysis
