#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hmlab::domain {

// Volume of the Euclidean unit n-ball.
double unit_ball_volume(int n);

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on [-1, 1], exact for polynomials of degree 2*count - 1.
GaussLegendreRule gauss_legendre(int count);

// Symmetric bilinear form on R^n.
class QuadraticForm {
 public:
  explicit QuadraticForm(Eigen::MatrixXd matrix);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace(); }
  double operator()(const Eigen::VectorXd& x) const;
  // Q:Q~, the trace of the product.
  double contract(const QuadraticForm& other) const;

 private:
  Eigen::MatrixXd matrix_;
};

double integrate_quadratic_sphere(const QuadraticForm& q, double sigma, int n);
double integrate_quadratic_ball(const QuadraticForm& q, double sigma, int n);
double integrate_quadratic_product_sphere(const QuadraticForm& q, const QuadraticForm& qt,
                                          double sigma, int n);

enum class QuadratureMethod { ProductGrid, MonteCarlo };

struct NumericOptions {
  int angular_nodes = 48;
  int radial_nodes = 24;
  int monte_carlo_samples = 400000;
  std::uint64_t seed = 1;
};

struct NumericIntegral {
  double value = 0.0;
  double standard_error = 0.0;
  QuadratureMethod method = QuadratureMethod::ProductGrid;
};

using Integrand = std::function<double(const Eigen::VectorXd&)>;

// Product-angle grids for n <= 3, Monte-Carlo otherwise.
NumericIntegral numeric_sphere_integral(const Integrand& f, double sigma, int n,
                                        const NumericOptions& options = {});
NumericIntegral numeric_ball_integral(const Integrand& f, double sigma, int n,
                                      const NumericOptions& options = {});

struct QuadratureCheck {
  std::string form_id;
  int n = 0;
  double sigma = 0.0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

QuadratureCheck check_sphere_form(const QuadraticForm& q, double sigma,
                                  const NumericOptions& options = {});
QuadratureCheck check_ball_form(const QuadraticForm& q, double sigma,
                                const NumericOptions& options = {});
QuadratureCheck check_product_form(const QuadraticForm& q, const QuadraticForm& qt, double sigma,
                                   const NumericOptions& options = {});

// Random symmetric matrix with entries in [-1, 1].
Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed);

// Runs all three forms for `count` random pairs per (n, sigma) with n in {2,3}
// and sigma in {0.5, 1, 2}.
std::vector<QuadratureCheck> quadrature_selftest(int count, std::uint64_t seed);

void write_quadrature_csv(std::ostream& out, const std::vector<QuadratureCheck>& rows);

}  // namespace hmlab::domain
