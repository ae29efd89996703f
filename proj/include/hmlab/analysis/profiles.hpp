#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmlab/domain/ball.hpp"
#include "hmlab/domain/curvature.hpp"
#include "hmlab/solver/map_state.hpp"
#include "hmlab/solver/pullback.hpp"

namespace hmlab::analysis {

using solver::MapState;
using target::CurvatureClass;
using target::TargetPoint;

struct ProfileOptions {
  double epsilon = 0.0;          // density scale, 0 selects four mesh sizes
  double delta_fraction = 0.125; // difference-quotient step in mesh sizes
  domain::BallOptions ball;
};

// Radial integrals about a basepoint with Q = u(basepoint). Entries of the
// per-sigma vectors line up with `sigmas`; radii whose ball does not fit are
// listed in `skipped` instead.
struct RadialProfile {
  int basepoint = -1;
  TargetPoint Q;
  std::vector<double> sigmas;
  std::vector<double> E;                // int_{B} |grad u|^2 dmu
  std::vector<double> I;                // int_{dB} d^2(u, Q) dSigma
  std::vector<double> flux;             // int_{dB} |du/dr|^2 dSigma
  std::vector<double> boundary_energy;  // int_{dB} |grad u|^2 dSigma
  std::vector<double> radial_d2;        // int_{dB} d/dr d^2(u, Q) dSigma
  std::vector<double> volume;
  std::vector<double> area;
  std::vector<std::string> skipped;

  solver::PullbackTensor pullback;  // at the basepoint
  domain::CurvatureData curvature = domain::CurvatureData::flat(2);
  int dimension = 2;

  double density() const { return pullback.trace(); }
};

RadialProfile radial_profiles(const domain::MeshDomain& mesh, const MapState& map, int basepoint,
                              const std::vector<double>& sigmas, const ProfileOptions& options = {});

// Same, reusing precomputed per-face densities.
RadialProfile radial_profiles(const domain::MeshDomain& mesh, const MapState& map, int basepoint,
                              const std::vector<double>& sigmas,
                              const std::vector<double>& face_density,
                              const ProfileOptions& options = {});

struct TensorContractions {
  double ric_pi = 0.0;     // Ric : pi
  double pi_pi = 0.0;      // pi : pi
  double density_sq = 0.0; // |grad u|^4 = (tr pi)^2
};

TensorContractions contract_tensors(const domain::CurvatureData& curvature, const Eigen::MatrixXd& pi);

struct OrderPoint {
  double sigma = 0.0;
  std::optional<double> value;  // sigma E / I, undefined when I = 0
  double npc_bound = 1.0;       // 1 + 2 Ric:pi sigma^2 / (3(n+2)|grad u|^2)
  double cat1_bound = 1.0;      // 1 + (2 Ric:pi + |grad u|^4 - pi:pi) sigma^2 / (...)
};

std::vector<OrderPoint> order_function(const RadialProfile& profile);

}  // namespace hmlab::analysis
