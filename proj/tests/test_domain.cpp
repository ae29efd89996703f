#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hmlab/domain/ball.hpp"
#include "hmlab/domain/curvature.hpp"
#include "hmlab/domain/mesh.hpp"
#include "hmlab/domain/quadrature.hpp"
#include "hmlab/error.hpp"
#include "support.hpp"

using namespace hmlab;
using namespace hmlab::domain;
using std::numbers::pi;

namespace {

QuadraticForm diag(std::initializer_list<double> entries) {
  Eigen::VectorXd d(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) d[i++] = e;
  return QuadraticForm(d.asDiagonal().toDenseMatrix());
}

ExactModel unit_sphere() { return {ModelKind::RoundSphere, 1.0}; }
ExactModel unit_hyperbolic() { return {ModelKind::Hyperbolic, 1.0}; }

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials up to degree 2m-1") {
  auto rule = gauss_legendre(6);
  for (int p = 0; p <= 11; ++p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], p);
    double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("quadratic forms over spheres") {
  CHECK(integrate_quadratic_sphere(diag({0, 0}), 1.3, 2) == 0.0);
  CHECK(integrate_quadratic_sphere(diag({1, 1}), 1.0, 2) == doctest::Approx(2 * pi));
  // x1^2 on the radius-2 circle, against the product-grid integral.
  double closed = integrate_quadratic_sphere(diag({1, 0}), 2.0, 2);
  CHECK(closed == doctest::Approx(8 * pi));
  auto numeric = numeric_sphere_integral([](const Eigen::VectorXd& x) { return x[0] * x[0]; }, 2.0, 2);
  CHECK(numeric.value == doctest::Approx(8 * pi).epsilon(1e-10));
}

TEST_CASE("quadratic forms over balls") {
  CHECK(integrate_quadratic_ball(diag({0, 0, 0}), 1.0, 3) == 0.0);
  CHECK(integrate_quadratic_ball(diag({1, 1, 1}), 1.0, 3) == doctest::Approx(4 * pi / 5));
  CHECK(integrate_quadratic_ball(diag({2, 0}), 1.0, 2) == doctest::Approx(pi / 2));

  // Independent Monte-Carlo estimate of int_{B_1} 2 x1^2 by rejection sampling.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int samples = 400000;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = u(rng), y = u(rng);
    if (x * x + y * y <= 1.0) sum += 2.0 * x * x;
  }
  double mc = 4.0 * sum / samples;
  CHECK(mc == doctest::Approx(pi / 2).epsilon(0.01));
}

TEST_CASE("product of quadratic forms over spheres") {
  CHECK(integrate_quadratic_product_sphere(diag({1, 2}), diag({0, 0}), 1.0, 2) == 0.0);
  CHECK(integrate_quadratic_product_sphere(diag({1, 1}), diag({1, 1}), 1.0, 2) == doctest::Approx(2 * pi));
  auto q = diag({1, 0, 0}), qt = diag({0, 1, 0});
  double closed = integrate_quadratic_product_sphere(q, qt, 1.0, 3);
  CHECK(closed == doctest::Approx(4 * pi / 15));
  auto check = check_product_form(q, qt, 1.0);
  CHECK(check.rel_err <= 1e-6);
}

TEST_CASE("quadrature homogeneity in sigma") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (int n : {2, 3}) {
      QuadraticForm q(random_symmetric(n, seed)), qt(random_symmetric(n, seed + 100));
      double s1 = integrate_quadratic_sphere(q, 0.7, n), s2 = integrate_quadratic_sphere(q, 1.4, n);
      CHECK(s2 == doctest::Approx(std::pow(2.0, n + 1) * s1));
      double b1 = integrate_quadratic_ball(q, 0.7, n), b2 = integrate_quadratic_ball(q, 1.4, n);
      CHECK(b2 == doctest::Approx(std::pow(2.0, n + 2) * b1));
      double p1 = integrate_quadratic_product_sphere(q, qt, 0.7, n);
      double p2 = integrate_quadratic_product_sphere(q, qt, 1.4, n);
      CHECK(p2 == doctest::Approx(std::pow(2.0, n + 3) * p1));
    }
  }
}

TEST_CASE("curvature tensors") {
  auto flat = CurvatureData::flat(3);
  CHECK(flat.ricci().norm() == 0.0);
  CHECK(flat.scalar() == 0.0);

  auto sphere = CurvatureData::constant(2, 1.0);
  CHECK(sphere.scalar() == doctest::Approx(2.0));
  CHECK((sphere.ricci() - Eigen::Matrix2d::Identity()).norm() < 1e-15);

  auto h3 = CurvatureData::constant(3, -1.0);
  CHECK(h3.scalar() == doctest::Approx(-6.0));
  CHECK(h3.symmetry_defect() < 1e-15);

  std::vector<double> broken(16, 0.0);
  broken[0 * 8 + 1 * 4 + 0 * 2 + 1] = 1.0;  // R_0101 without its partners
  CHECK_THROWS_AS(CurvatureData::from_riemann(2, broken), InvalidArgument);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(3);
    v << g(rng), g(rng), g(rng);
    Eigen::MatrixXd Q = h3.sectional_form(v);
    CHECK(Q.trace() == doctest::Approx(v.dot(h3.ricci() * v)));
    CHECK((Q - Q.transpose()).norm() < 1e-14);
  }
}

TEST_CASE("metric expansion in normal coordinates") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  auto flat = model_chart(0, 2, ExactModel{}, 1.0);
  Eigen::VectorXd x(2);
  x << 0.3, -0.2;
  CHECK((evaluate_metric_expansion(flat, x).expansion - Eigen::Matrix2d::Identity()).norm() == 0.0);
  CHECK(evaluate_volume_density(flat, x).expansion == 1.0);

  auto chart = model_chart(0, 2, unit_sphere(), 1.0);
  CHECK((evaluate_metric_expansion(chart, zero).expansion - Eigen::Matrix2d::Identity()).norm() == 0.0);
  CHECK(evaluate_volume_density(chart, zero).expansion == 1.0);

  for (double t = 0.05; t <= 0.5 + 1e-12; t += 0.05) {
    Eigen::VectorXd p(2);
    p << t, 0.0;
    auto m = evaluate_metric_expansion(chart, p);
    REQUIRE(m.exact.has_value());
    double oracle = std::pow(std::sin(t) / t, 2);
    CHECK(m.expansion(1, 1) == doctest::Approx(1.0 - t * t / 3.0));
    CHECK((*m.exact)(1, 1) == doctest::Approx(oracle));
    CHECK(std::abs(m.expansion(1, 1) - oracle) <= 2.0 * std::pow(t, 4) / 45.0);

    auto d = evaluate_volume_density(chart, p);
    CHECK(d.expansion == doctest::Approx(1.0 - t * t / 6.0));
    CHECK(*d.exact == doctest::Approx(std::sin(t) / t));
    CHECK(std::abs(d.expansion - std::sin(t) / t) <= std::pow(t, 4) / 120.0);
  }
}

TEST_CASE("curvature integrals over balls") {
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  auto flat = curvature_ball_integrals(CurvatureData::flat(2), v, 0.5);
  CHECK(flat.ricci_integral == 0.0);
  CHECK(flat.sectional_integral == 0.0);

  auto sphere = CurvatureData::constant(2, 1.0);
  auto r = curvature_ball_integrals(sphere, v, 0.5);
  CHECK(r.ricci_integral == doctest::Approx(pi / 32));
  CHECK(r.sectional_integral == doctest::Approx(pi / 64));
  // Direct quadrature of Ric(x, x) over the disk.
  auto direct = numeric_ball_integral(
      [&](const Eigen::VectorXd& x) { return x.dot(sphere.ricci() * x); }, 0.5, 2);
  CHECK(direct.value == doctest::Approx(r.ricci_integral).epsilon(1e-10));

  auto doubled = curvature_ball_integrals(sphere, v, 1.0);
  CHECK(doubled.ricci_integral == doctest::Approx(16.0 * r.ricci_integral));
  CHECK(doubled.sectional_integral == doctest::Approx(16.0 * r.sectional_integral));
}

TEST_CASE("Bishop-Gromov profiles") {
  std::vector<double> sigmas{0.05, 0.1, 0.2, 0.3};
  for (const auto& s : bishop_gromov_profile(model_chart(0, 2, ExactModel{}, 1.0), sigmas)) {
    REQUIRE(s.measured.has_value());
    CHECK(*s.measured == doctest::Approx(2.0 / s.sigma));
    CHECK(std::abs(*s.residual) < 1e-12);
  }
  for (const auto& s : bishop_gromov_profile(model_chart(0, 2, unit_sphere(), 1.0), sigmas)) {
    CHECK(*s.measured == doctest::Approx(1.0 / std::tan(s.sigma / 2)));
    CHECK(s.prediction == doctest::Approx(2.0 / s.sigma - s.sigma / 6.0));
    // cot(s/2) = 2/s - s/6 - s^3/360 - s^5/15120 - ...
    double next = -std::pow(s.sigma, 3) / 360.0 - std::pow(s.sigma, 5) / 15120.0;
    CHECK(*s.residual == doctest::Approx(next).epsilon(1e-3));
  }
  for (const auto& s : bishop_gromov_profile(model_chart(0, 2, unit_hyperbolic(), 1.0), sigmas)) {
    CHECK(*s.measured == doctest::Approx(1.0 / std::tanh(s.sigma / 2)));
    CHECK(s.prediction == doctest::Approx(2.0 / s.sigma + s.sigma / 6.0));
    CHECK(*s.residual / std::pow(s.sigma, 3) == doctest::Approx(-1.0 / 360).epsilon(0.02));
  }
}

TEST_CASE("flat torus and square meshes") {
  for (int k : {8, 16, 32}) {
    auto torus = testing::flat_mesh(DomainKind::FlatTorus, k);
    CHECK(torus.vertex_count() == k * k);
    CHECK(torus.total_measure() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(torus.closed());
  }
  const int k = 10;
  auto square = testing::flat_mesh(DomainKind::FlatSquare, k);
  CHECK(square.vertex_count() == (k + 1) * (k + 1));
  for (int v = 0; v < square.vertex_count(); ++v) {
    Eigen::Vector2d p = square.planar(v);
    bool side = p[0] < 1e-12 || p[1] < 1e-12 || p[0] > 1 - 1e-12 || p[1] > 1 - 1e-12;
    CHECK(square.vertex(v).boundary == side);
  }
}

TEST_CASE("hyperbolic patch area") {
  auto patch = testing::curved_mesh(DomainKind::HyperbolicPatch, 16, 1.0);
  double exact = 2 * pi * (std::cosh(1.0) - 1.0);
  CHECK(patch.total_measure() == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("exp and log are inverse on the curved models") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (auto mesh : {testing::curved_mesh(DomainKind::RoundSphere, 6, 1.0),
                    testing::curved_mesh(DomainKind::HyperbolicPatch, 8, 1.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      int c = static_cast<int>(rng() % mesh.vertex_count());
      Eigen::Vector2d w(u(rng), u(rng));
      Eigen::Vector3d p = mesh.exp(c, w);
      CHECK((mesh.log(c, p) - w).norm() < 1e-10);
      CHECK(mesh.distance(mesh.vertex(c).position, p) == doctest::Approx(w.norm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("mesh serialization round trip") {
  auto mesh = testing::flat_mesh(DomainKind::FlatSquare, 8);
  auto copy = mesh_from_json(mesh_to_json(mesh));
  REQUIRE(copy.vertex_count() == mesh.vertex_count());
  CHECK(copy.edges().size() == mesh.edges().size());
  for (std::size_t e = 0; e < mesh.edges().size(); ++e)
    CHECK(copy.edges()[e].weight == doctest::Approx(mesh.edges()[e].weight));
}

TEST_CASE("geodesic ball weights") {
  auto torus = testing::flat_mesh(DomainKind::FlatTorus, 70);
  REQUIRE(torus.mesh_size() < 0.021);
  int c = testing::vertex_near(torus, 0.5, 0.5);
  auto ball = geodesic_ball_region(torus, c, 0.2);
  double sum = 0.0;
  for (const auto& [v, w] : ball.interior_weights) sum += w;
  CHECK(sum == doctest::Approx(pi * 0.04).epsilon(0.05));
  CHECK(ball.area() == doctest::Approx(2 * pi * 0.2).epsilon(0.05));

  CHECK_THROWS_AS(geodesic_ball_region(torus, c, 2.0 * torus.mesh_size()), UnderResolved);

  auto sphere = testing::curved_mesh(DomainKind::RoundSphere, 16, 1.0);
  REQUIRE(3.0 * sphere.mesh_size() <= 0.3);
  auto cap = geodesic_ball_region(sphere, 0, 0.3);
  double cap_sum = 0.0;
  for (const auto& [v, w] : cap.interior_weights) cap_sum += w;
  CHECK(cap_sum == doctest::Approx(2 * pi * (1 - std::cos(0.3))).epsilon(0.05));
}
