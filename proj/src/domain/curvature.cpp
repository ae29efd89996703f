#include "hmlab/domain/curvature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hmlab/domain/quadrature.hpp"
#include "hmlab/error.hpp"

namespace hmlab::domain {

namespace {

std::size_t flat_index(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

}  // namespace

CurvatureData::CurvatureData(int n, std::vector<double> components)
    : n_(n), r_(std::move(components)), ricci_(Eigen::MatrixXd::Zero(n, n)) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ricci_(i, j) += riemann(k, i, j, k);
  scalar_ = ricci_.trace();
}

CurvatureData CurvatureData::flat(int n) { return constant(n, 0.0); }

CurvatureData CurvatureData::constant(int n, double sectional) {
  if (n < 1) throw InvalidArgument("dimension must be at least 1");
  std::vector<double> r(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          r[flat_index(n, i, j, k, l)] =
              sectional * ((j == k && i == l ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0));
  return CurvatureData(n, std::move(r));
}

CurvatureData CurvatureData::from_riemann(int n, std::vector<double> components, double tol) {
  if (n < 1) throw InvalidArgument("dimension must be at least 1");
  if (components.size() != static_cast<std::size_t>(n) * n * n * n)
    throw InvalidArgument("Riemann tensor needs n^4 components");
  CurvatureData raw(n, components);
  double scale = 1.0;
  for (double c : components) scale = std::max(scale, std::abs(c));
  if (raw.symmetry_defect() > tol * scale)
    throw InvalidArgument("Riemann tensor violates its algebraic symmetries");

  // Average each orbit of the pair symmetries once and write it back with
  // signs, so the symmetries hold exactly afterwards.
  std::vector<double> clean(components.size(), 0.0);
  std::vector<char> done(components.size(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (done[flat_index(n, i, j, k, l)]) continue;
          const std::array<std::array<int, 5>, 8> orbit{{{i, j, k, l, 1},
                                                         {j, i, k, l, -1},
                                                         {i, j, l, k, -1},
                                                         {j, i, l, k, 1},
                                                         {k, l, i, j, 1},
                                                         {l, k, i, j, -1},
                                                         {k, l, j, i, -1},
                                                         {l, k, j, i, 1}}};
          double sum = 0.0;
          for (const auto& o : orbit) sum += o[4] * components[flat_index(n, o[0], o[1], o[2], o[3])];
          double value = sum / 8.0;
          for (const auto& o : orbit) {
            std::size_t idx = flat_index(n, o[0], o[1], o[2], o[3]);
            done[idx] = 1;
            clean[idx] = o[4] * value;
          }
          // Entries forced to vanish by antisymmetry (i == j or k == l).
          if (i == j || k == l) {
            for (const auto& o : orbit) clean[flat_index(n, o[0], o[1], o[2], o[3])] = 0.0;
          }
        }
  return CurvatureData(n, std::move(clean));
}

double CurvatureData::riemann(int i, int j, int k, int l) const {
  return r_[flat_index(n_, i, j, k, l)];
}

Eigen::MatrixXd CurvatureData::sectional_form(const Eigen::VectorXd& v) const {
  if (v.size() != n_) throw InvalidArgument("dimension mismatch");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) q(i, j) += v[k] * v[l] * riemann(i, k, l, j);
  return 0.5 * (q + q.transpose());
}

double CurvatureData::symmetry_defect() const {
  double defect = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double r = riemann(i, j, k, l);
          defect = std::max(defect, std::abs(r + riemann(j, i, k, l)));
          defect = std::max(defect, std::abs(r + riemann(i, j, l, k)));
          defect = std::max(defect, std::abs(r - riemann(k, l, i, j)));
          defect = std::max(defect, std::abs(r + riemann(j, k, i, l) + riemann(k, i, j, l)));
        }
  return defect;
}

double ExactModel::curvature() const {
  switch (kind) {
    case ModelKind::Flat: return 0.0;
    case ModelKind::RoundSphere: return 1.0 / (radius * radius);
    case ModelKind::Hyperbolic: return -1.0 / (radius * radius);
  }
  return 0.0;
}

double ExactModel::warp(double r) const {
  switch (kind) {
    case ModelKind::Flat: return r;
    case ModelKind::RoundSphere: return radius * std::sin(r / radius);
    case ModelKind::Hyperbolic: return radius * std::sinh(r / radius);
  }
  return r;
}

double ExactModel::injectivity_radius() const {
  if (kind == ModelKind::RoundSphere) return std::numbers::pi * radius;
  return std::numeric_limits<double>::infinity();
}

std::string ExactModel::name() const {
  switch (kind) {
    case ModelKind::Flat: return "flat";
    case ModelKind::RoundSphere: return "round_sphere";
    case ModelKind::Hyperbolic: return "hyperbolic";
  }
  return "flat";
}

NormalChart model_chart(int basepoint, int n, const ExactModel& model, double validity_radius) {
  if (!(model.radius > 0.0)) throw InvalidArgument("model radius must be positive");
  if (!(validity_radius > 0.0) || validity_radius >= model.injectivity_radius())
    throw InvalidArgument("chart validity radius must lie below the injectivity radius");
  NormalChart chart;
  chart.basepoint = basepoint;
  chart.dimension = n;
  chart.curvature = CurvatureData::constant(n, model.curvature());
  chart.validity_radius = validity_radius;
  chart.exact_model = model;
  return chart;
}

namespace {

void require_in_chart(const NormalChart& chart, const Eigen::VectorXd& x) {
  if (x.size() != chart.dimension) throw InvalidArgument("dimension mismatch");
  if (x.norm() > chart.validity_radius)
    throw OutOfChart("point at radius " + std::to_string(x.norm()) +
                     " exceeds chart validity radius " + std::to_string(chart.validity_radius));
}

}  // namespace

MetricEvaluation evaluate_metric_expansion(const NormalChart& chart, const Eigen::VectorXd& x) {
  require_in_chart(chart, x);
  const int n = chart.dimension;
  MetricEvaluation out;
  out.expansion = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double correction = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) correction += chart.curvature.riemann(k, i, j, l) * x[k] * x[l];
      out.expansion(i, j) -= correction / 3.0;
    }
  if (chart.exact_model) {
    double r = x.norm();
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    if (r > 0.0) {
      Eigen::VectorXd u = x / r;
      double ratio = chart.exact_model->warp(r) / r;
      Eigen::MatrixXd radial = u * u.transpose();
      g = radial + ratio * ratio * (Eigen::MatrixXd::Identity(n, n) - radial);
    }
    out.exact = g;
  }
  return out;
}

DensityEvaluation evaluate_volume_density(const NormalChart& chart, const Eigen::VectorXd& x) {
  require_in_chart(chart, x);
  DensityEvaluation out;
  out.expansion = 1.0 - x.dot(chart.curvature.ricci() * x) / 6.0;
  if (chart.exact_model) {
    double r = x.norm();
    out.exact = r > 0.0 ? std::pow(chart.exact_model->warp(r) / r, chart.dimension - 1) : 1.0;
  }
  return out;
}

BallCurvatureIntegrals curvature_ball_integrals(const CurvatureData& curvature,
                                                Eigen::VectorXd v, double sigma) {
  const int n = curvature.dimension();
  if (v.size() != n) throw InvalidArgument("dimension mismatch");
  if (!(sigma > 0.0)) throw InvalidArgument("radius must be positive");
  BallCurvatureIntegrals out;
  double norm = v.norm();
  if (norm == 0.0) throw InvalidArgument("direction must be nonzero");
  if (std::abs(norm - 1.0) > 1e-12) {
    v /= norm;
    out.normalized_input = true;
  }
  double factor = unit_ball_volume(n) / (n + 2) * std::pow(sigma, n + 2);
  out.ricci_integral = factor * curvature.scalar();
  out.sectional_integral = factor * v.dot(curvature.ricci() * v);
  return out;
}

std::vector<BishopGromovSample> bishop_gromov_profile(const NormalChart& chart,
                                                      std::span<const double> sigmas) {
  const int n = chart.dimension;
  const double scalar = chart.curvature.scalar();
  GaussLegendreRule rule = gauss_legendre(32);
  std::vector<BishopGromovSample> out;
  for (double sigma : sigmas) {
    if (!(sigma > 0.0)) throw InvalidArgument("radius must be positive");
    if (sigma > chart.validity_radius)
      throw OutOfChart("ball radius exceeds chart validity radius");
    BishopGromovSample sample;
    sample.sigma = sigma;
    sample.prediction = n / sigma - scalar * sigma / (3.0 * (n + 2));
    if (chart.exact_model) {
      double volume = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        double r = 0.5 * sigma * (rule.nodes[j] + 1.0);
        volume += 0.5 * sigma * rule.weights[j] * std::pow(chart.exact_model->warp(r), n - 1);
      }
      sample.measured = std::pow(chart.exact_model->warp(sigma), n - 1) / volume;
      sample.residual = *sample.measured - sample.prediction;
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace hmlab::domain
