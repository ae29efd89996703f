#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hmlab::domain {

// Riemann tensor at a point in an orthonormal frame, with R_{ijkl} stored
// row-major. Sign convention: constant curvature K has
// R_{ijkl} = K (delta_jk delta_il - delta_ik delta_jl) and Ric_ij = sum_k R_{kijk}.
class CurvatureData {
 public:
  static CurvatureData flat(int n);
  static CurvatureData constant(int n, double sectional);
  // Validates the algebraic symmetries before accepting the tensor.
  static CurvatureData from_riemann(int n, std::vector<double> components, double tol = 1e-12);

  int dimension() const { return n_; }
  double riemann(int i, int j, int k, int l) const;
  const Eigen::MatrixXd& ricci() const { return ricci_; }
  double scalar() const { return scalar_; }
  // Q_ij = v^k v^l R_{iklj}, so that Q(x) = <R(x,v)v,x> and tr Q = Ric(v,v).
  Eigen::MatrixXd sectional_form(const Eigen::VectorXd& v) const;
  // Largest deviation from the pair symmetries and the first Bianchi identity.
  double symmetry_defect() const;

 private:
  CurvatureData(int n, std::vector<double> components);
  int n_ = 0;
  std::vector<double> r_;
  Eigen::MatrixXd ricci_;
  double scalar_ = 0.0;
};

enum class ModelKind { Flat, RoundSphere, Hyperbolic };

// Constant-curvature space form with curvature 0, 1/R^2 or -1/R^2.
struct ExactModel {
  ModelKind kind = ModelKind::Flat;
  double radius = 1.0;

  double curvature() const;
  // Warping function f with metric dr^2 + f(r)^2 dtheta^2.
  double warp(double r) const;
  double injectivity_radius() const;
  std::string name() const;
};

struct NormalChart {
  int basepoint = -1;
  int dimension = 0;
  CurvatureData curvature = CurvatureData::flat(1);
  double validity_radius = 0.0;
  std::optional<ExactModel> exact_model;
};

NormalChart model_chart(int basepoint, int n, const ExactModel& model, double validity_radius);

struct MetricEvaluation {
  Eigen::MatrixXd expansion;
  std::optional<Eigen::MatrixXd> exact;
};

struct DensityEvaluation {
  double expansion = 1.0;
  std::optional<double> exact;
};

MetricEvaluation evaluate_metric_expansion(const NormalChart& chart, const Eigen::VectorXd& x);
DensityEvaluation evaluate_volume_density(const NormalChart& chart, const Eigen::VectorXd& x);

struct BallCurvatureIntegrals {
  double ricci_integral = 0.0;      // int_{B_sigma} Ric(x,x) dx
  double sectional_integral = 0.0;  // int_{B_sigma} <R(x,v)v,x> dx
  bool normalized_input = false;
};

BallCurvatureIntegrals curvature_ball_integrals(const CurvatureData& curvature,
                                                Eigen::VectorXd v, double sigma);

struct BishopGromovSample {
  double sigma = 0.0;
  std::optional<double> measured;  // |dB| / |B| from the exact model
  double prediction = 0.0;         // n/sigma - S sigma / (3(n+2))
  std::optional<double> residual;  // measured - prediction
};

std::vector<BishopGromovSample> bishop_gromov_profile(const NormalChart& chart,
                                                      std::span<const double> sigmas);

}  // namespace hmlab::domain
