#include "hmlab/domain/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "hmlab/error.hpp"
#include "hmlab/format.hpp"

namespace hmlab::domain {

namespace {

void require_dimension(int n) {
  if (n < 1) throw InvalidArgument("dimension must be at least 1, got " + std::to_string(n));
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("radius must be positive");
}

double sphere_area(int n, double sigma) {
  return n * unit_ball_volume(n) * std::pow(sigma, n - 1);
}

// Uniform direction on S^{n-1} from Gaussian samples.
Eigen::VectorXd random_direction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

NumericIntegral grid_sphere(const Integrand& f, double sigma, int n,
                            const NumericOptions& options) {
  NumericIntegral result;
  result.method = QuadratureMethod::ProductGrid;
  if (n == 1) {
    Eigen::VectorXd x(1);
    x[0] = sigma;
    result.value = f(x);
    x[0] = -sigma;
    result.value += f(x);
    return result;
  }
  const int na = options.angular_nodes;
  const double dphi = 2.0 * std::numbers::pi / na;
  if (n == 2) {
    Eigen::VectorXd x(2);
    for (int k = 0; k < na; ++k) {
      double phi = (k + 0.5) * dphi;
      x << sigma * std::cos(phi), sigma * std::sin(phi);
      result.value += f(x);
    }
    result.value *= sigma * dphi;
    return result;
  }
  // n == 3: Gauss-Legendre in the height, uniform in longitude.
  GaussLegendreRule rule = gauss_legendre(options.radial_nodes);
  Eigen::VectorXd x(3);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    double z = rule.nodes[j];
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double ring = 0.0;
    for (int k = 0; k < na; ++k) {
      double phi = (k + 0.5) * dphi;
      x << sigma * rho * std::cos(phi), sigma * rho * std::sin(phi), sigma * z;
      ring += f(x);
    }
    result.value += rule.weights[j] * ring * dphi;
  }
  result.value *= sigma * sigma;
  return result;
}

NumericIntegral monte_carlo_sphere(const Integrand& f, double sigma, int n,
                                   const NumericOptions& options) {
  std::mt19937_64 rng(options.seed);
  const int count = options.monte_carlo_samples;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < count; ++s) {
    double value = f(sigma * random_direction(n, rng));
    sum += value;
    sum_sq += value * value;
  }
  double mean = sum / count;
  double variance = std::max(0.0, sum_sq / count - mean * mean);
  double area = sphere_area(n, sigma);
  return {area * mean, area * std::sqrt(variance / count), QuadratureMethod::MonteCarlo};
}

double relative_error(double numeric, double analytic, double scale) {
  double denom = std::max(std::abs(analytic), scale);
  if (denom == 0.0) return std::abs(numeric);
  return std::abs(numeric - analytic) / denom;
}

// Operator norm of a symmetric matrix, used to scale relative errors when the
// analytic value happens to be close to zero.
double spectral_norm(const QuadraticForm& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double unit_ball_volume(int n) {
  require_dimension(n);
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

GaussLegendreRule gauss_legendre(int count) {
  if (count < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0, p1 = x;
      derivative = count * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

QuadraticForm::QuadraticForm(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols())
    throw InvalidArgument("quadratic form needs a square matrix");
  double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("quadratic form matrix is not symmetric");
}

double QuadraticForm::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != matrix_.rows()) throw InvalidArgument("dimension mismatch");
  return x.dot(matrix_ * x);
}

double QuadraticForm::contract(const QuadraticForm& other) const {
  if (other.dimension() != dimension()) throw InvalidArgument("dimension mismatch");
  return (matrix_ * other.matrix_).trace();
}

double integrate_quadratic_sphere(const QuadraticForm& q, double sigma, int n) {
  require_dimension(n);
  require_sigma(sigma);
  if (q.dimension() != n) throw InvalidArgument("dimension mismatch");
  return unit_ball_volume(n) * q.trace() * std::pow(sigma, n + 1);
}

double integrate_quadratic_ball(const QuadraticForm& q, double sigma, int n) {
  require_dimension(n);
  require_sigma(sigma);
  if (q.dimension() != n) throw InvalidArgument("dimension mismatch");
  return unit_ball_volume(n) / (n + 2) * q.trace() * std::pow(sigma, n + 2);
}

double integrate_quadratic_product_sphere(const QuadraticForm& q, const QuadraticForm& qt,
                                          double sigma, int n) {
  require_dimension(n);
  require_sigma(sigma);
  if (q.dimension() != n || qt.dimension() != n) throw InvalidArgument("dimension mismatch");
  return unit_ball_volume(n) / (n + 2) * (2.0 * q.contract(qt) + q.trace() * qt.trace()) *
         std::pow(sigma, n + 3);
}

NumericIntegral numeric_sphere_integral(const Integrand& f, double sigma, int n,
                                        const NumericOptions& options) {
  require_dimension(n);
  require_sigma(sigma);
  if (n <= 3) return grid_sphere(f, sigma, n, options);
  return monte_carlo_sphere(f, sigma, n, options);
}

NumericIntegral numeric_ball_integral(const Integrand& f, double sigma, int n,
                                      const NumericOptions& options) {
  require_dimension(n);
  require_sigma(sigma);
  if (n <= 3) {
    GaussLegendreRule rule = gauss_legendre(options.radial_nodes);
    NumericIntegral result;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      double r = 0.5 * sigma * (rule.nodes[j] + 1.0);
      result.value += 0.5 * sigma * rule.weights[j] * grid_sphere(f, r, n, options).value;
    }
    return result;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform;
  const int count = options.monte_carlo_samples;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < count; ++s) {
    double r = sigma * std::pow(uniform(rng), 1.0 / n);
    double value = f(r * random_direction(n, rng));
    sum += value;
    sum_sq += value * value;
  }
  double mean = sum / count;
  double variance = std::max(0.0, sum_sq / count - mean * mean);
  double volume = unit_ball_volume(n) * std::pow(sigma, n);
  return {volume * mean, volume * std::sqrt(variance / count), QuadratureMethod::MonteCarlo};
}

QuadratureCheck check_sphere_form(const QuadraticForm& q, double sigma,
                                  const NumericOptions& options) {
  int n = q.dimension();
  QuadratureCheck row{"sphere", n, sigma, integrate_quadratic_sphere(q, sigma, n), 0.0, 0.0};
  row.numeric = numeric_sphere_integral([&](const Eigen::VectorXd& x) { return q(x); }, sigma,
                                        n, options)
                    .value;
  double scale = sphere_area(n, sigma) * sigma * sigma * spectral_norm(q);
  row.rel_err = relative_error(row.numeric, row.analytic, scale);
  return row;
}

QuadratureCheck check_ball_form(const QuadraticForm& q, double sigma,
                                const NumericOptions& options) {
  int n = q.dimension();
  QuadratureCheck row{"ball", n, sigma, integrate_quadratic_ball(q, sigma, n), 0.0, 0.0};
  row.numeric = numeric_ball_integral([&](const Eigen::VectorXd& x) { return q(x); }, sigma, n,
                                      options)
                    .value;
  double scale = unit_ball_volume(n) * std::pow(sigma, n + 2) * spectral_norm(q);
  row.rel_err = relative_error(row.numeric, row.analytic, scale);
  return row;
}

QuadratureCheck check_product_form(const QuadraticForm& q, const QuadraticForm& qt, double sigma,
                                   const NumericOptions& options) {
  int n = q.dimension();
  QuadratureCheck row{"product", n, sigma, integrate_quadratic_product_sphere(q, qt, sigma, n),
                      0.0, 0.0};
  row.numeric = numeric_sphere_integral(
                    [&](const Eigen::VectorXd& x) { return q(x) * qt(x); }, sigma, n, options)
                    .value;
  double scale = sphere_area(n, sigma) * std::pow(sigma, 3) * spectral_norm(q) * spectral_norm(qt);
  row.rel_err = relative_error(row.numeric, row.analytic, scale);
  return row;
}

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(rng);
  return m;
}

std::vector<QuadratureCheck> quadrature_selftest(int count, std::uint64_t seed) {
  std::vector<QuadratureCheck> rows;
  std::uint64_t stream = seed;
  for (int n : {2, 3}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      for (int k = 0; k < count; ++k) {
        QuadraticForm q(random_symmetric(n, stream++));
        QuadraticForm qt(random_symmetric(n, stream++));
        rows.push_back(check_sphere_form(q, sigma));
        rows.push_back(check_ball_form(q, sigma));
        rows.push_back(check_product_form(q, qt, sigma));
      }
    }
  }
  return rows;
}

void write_quadrature_csv(std::ostream& out, const std::vector<QuadratureCheck>& rows) {
  out << "form_id,n,sigma,analytic,numeric,rel_err\n";
  for (const auto& row : rows)
    out << csv_line({row.form_id, std::to_string(row.n), format_real(row.sigma),
                     format_real(row.analytic), format_real(row.numeric),
                     format_real(row.rel_err)});
}

}  // namespace hmlab::domain
