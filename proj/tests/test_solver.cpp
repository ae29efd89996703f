#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hmlab/solver/harmonic.hpp"
#include "hmlab/solver/initial_maps.hpp"
#include "hmlab/solver/map_state.hpp"
#include "hmlab/solver/pullback.hpp"
#include "hmlab/target/frechet.hpp"
#include "support.hpp"

using namespace hmlab;
using namespace hmlab::solver;
using domain::DomainKind;

namespace {

target::TargetSpace tripod() { return target::TargetSpace::tree(target::MetricTree::star(3, 2.0)); }

MapState square_tripod(int resolution, const domain::MeshDomain& mesh) {
  (void)resolution;
  auto space = tripod();
  return dirichlet_problem(mesh, space, [&](int v) { return tripod_boundary_value(mesh, space, v, 1.0); });
}

double max_deviation_from(const domain::MeshDomain& mesh, const MapState& map,
                          const std::function<double(const Eigen::Vector2d&)>& f) {
  double worst = 0.0;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    worst = std::max(worst, std::abs(map.space.as_vector(map.values[v])[0] - f(mesh.planar(v))));
  return worst;
}

}  // namespace

TEST_CASE("discrete Dirichlet energy") {
  auto square = testing::flat_mesh(DomainKind::FlatSquare, 16);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  Eigen::VectorXd c(1);
  c << 0.7;
  CHECK(dirichlet_energy(square, testing::affine(square, zero, c)) == 0.0);
  // Cotangent weights reproduce int |grad x|^2 = 1 on the unit square exactly.
  CHECK(dirichlet_energy(square, testing::coordinate_x(square)) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.5, -0.3, 2.0;
  double e1 = dirichlet_energy(square, testing::affine(square, A, Eigen::VectorXd::Zero(2)));
  double e3 = dirichlet_energy(square, testing::affine(square, 3.0 * A, Eigen::VectorXd::Zero(2)));
  CHECK(e1 == doctest::Approx(A.squaredNorm()));
  CHECK(e3 == doctest::Approx(9.0 * e1));
}

TEST_CASE("vertex relaxation") {
  auto mesh = testing::flat_mesh(DomainKind::FlatTorus, 8);
  auto space = target::TargetSpace::euclidean(2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  auto map = map_from_function(
      mesh, space, [&](int) { return space.from_vector(Eigen::Vector2d(g(rng), g(rng))); },
      BoundaryCondition::Periodic);
  const int v = 10;
  Eigen::Vector2d avg = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (const auto& nb : mesh.neighbors(v)) avg += nb.weight * space.as_vector(map.values[nb.vertex]), total += nb.weight;
  avg /= total;
  CHECK((space.as_vector(relax_vertex(mesh, map, v)) - avg).norm() < 1e-10);

  auto flat = map;
  for (auto& p : flat.values) p = space.from_vector(Eigen::Vector2d(0.2, -0.1));
  CHECK(space.distance(relax_vertex(mesh, flat, v), flat.values[0]) < 1e-12);

  // Neighbours straddling the tripod centre: compare with a scan of the tree.
  auto t = tripod();
  std::uniform_real_distribution<double> off(0.0, 1.0);
  std::vector<target::TargetPoint> values;
  for (int i = 0; i < mesh.vertex_count(); ++i) values.push_back(t.tree_point(static_cast<int>(i % 3), off(rng)));
  auto tree_map = make_map(mesh, t, values, BoundaryCondition::Periodic);
  auto relaxed = relax_vertex(mesh, tree_map, v);
  std::vector<target::TargetPoint> nbrs;
  std::vector<double> w;
  for (const auto& nb : mesh.neighbors(v)) nbrs.push_back(tree_map.values[nb.vertex]), w.push_back(nb.weight);
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e)
    for (int k = 0; k <= 2000; ++k) best = std::min(best, target::frechet_objective(t, nbrs, w, t.tree_point(e, k * 1e-3)));
  CHECK(target::frechet_objective(t, nbrs, w, relaxed) <= best + 1e-9);

  double before = dirichlet_energy(mesh, tree_map);
  tree_map.values[v] = relaxed;
  CHECK(dirichlet_energy(mesh, tree_map) < before);
}

TEST_CASE("affine Dirichlet data relaxes to the affine map") {
  auto square = testing::flat_mesh(DomainKind::FlatSquare, 16);
  auto space = target::TargetSpace::euclidean(1);
  auto problem = dirichlet_problem(square, space, [&](int v) {
    Eigen::VectorXd x(1);
    x << square.planar(v)[0];
    return space.from_vector(x);
  });
  SolverConfig config;
  config.energy_tol = 1e-15;
  config.move_tol = 1e-12;
  auto result = solve_harmonic(square, problem, config);
  CHECK(result.converged);
  CHECK(result.monotone);
  CHECK(max_deviation_from(square, result.map, [](const Eigen::Vector2d& p) { return p[0]; }) <= 1e-8);

  // A harmonic start does not move.
  auto again = solve_harmonic(square, result.map, config);
  CHECK(again.converged);
  CHECK(again.log.back().max_move < 1e-11);
  CHECK(again.log.size() <= 3);
}

TEST_CASE("energy decreases monotonically") {
  auto torus = testing::flat_mesh(DomainKind::FlatTorus, 12);
  for (auto space : {tripod(), target::TargetSpace::hyperbolic_plane(), target::TargetSpace::euclidean(2)}) {
    CAPTURE(space.describe());
    auto map = random_map(torus, space, 5, 0.8, BoundaryCondition::Periodic);
    SolverConfig config;
    config.max_sweeps = 200;
    auto result = solve_harmonic(torus, map, config);
    CHECK(result.monotone);
    for (std::size_t i = 1; i < result.log.size(); ++i)
      CHECK(result.log[i].energy <= result.log[i - 1].energy * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("Jacobi and Gauss-Seidel share the fixed point") {
  auto square = testing::flat_mesh(DomainKind::FlatSquare, 10);
  auto problem = square_tripod(10, square);
  SolverConfig gs;
  gs.energy_tol = 1e-13;
  gs.move_tol = 1e-10;
  SolverConfig jacobi = gs;
  jacobi.mode = SweepMode::Jacobi;
  jacobi.damping = 0.8;
  jacobi.threads = 2;
  jacobi.max_sweeps = 100000;
  auto a = solve_harmonic(square, problem, gs), b = solve_harmonic(square, problem, jacobi);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  double worst = 0.0;
  for (int v = 0; v < square.vertex_count(); ++v) worst = std::max(worst, a.map.space.distance(a.map.values[v], b.map.values[v]));
  CHECK(worst < 1e-6);
}

TEST_CASE("tripod energy is stable under refinement") {
  SolverConfig config;
  config.energy_tol = 1e-10;
  config.move_tol = 1e-7;
  auto coarse_mesh = testing::flat_mesh(DomainKind::FlatSquare, 16);
  auto fine_mesh = testing::flat_mesh(DomainKind::FlatSquare, 64);
  auto coarse = solve_harmonic(coarse_mesh, square_tripod(16, coarse_mesh), config);
  auto fine = solve_harmonic(fine_mesh, square_tripod(64, fine_mesh), config);
  REQUIRE(coarse.converged);
  REQUIRE(fine.converged);
  double ec = coarse.log.back().energy, ef = fine.log.back().energy;
  CHECK(std::abs(ec - ef) <= 0.02 * ef);
}

TEST_CASE("pull-back tensors") {
  auto torus = testing::flat_mesh(DomainKind::FlatTorus, 64);
  const int v = testing::vertex_near(torus, 0.5, 0.5);
  const double eps = default_epsilon(torus);
  CHECK(eps == doctest::Approx(4.0 * torus.mesh_size()));

  auto identity = testing::affine(torus, Eigen::Matrix2d::Identity(), Eigen::VectorXd::Zero(2));
  auto id = pullback_tensor_estimate(torus, identity, v, eps);
  CHECK((id.pi - Eigen::Matrix2d::Identity()).norm() < 1e-8);
  CHECK(energy_density(torus, identity, v, eps) == doctest::Approx(2.0).epsilon(1e-8));

  Eigen::MatrixXd twice(1, 2);
  twice << 2.0, 0.0;
  auto stretched = pullback_tensor_estimate(torus, testing::affine(torus, twice, Eigen::VectorXd::Zero(1)), v, eps);
  Eigen::Matrix2d expected;
  expected << 4.0, 0.0, 0.0, 0.0;
  CHECK((stretched.pi - expected).norm() < 1e-8);

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  auto constant = testing::affine(torus, zero, Eigen::VectorXd::Ones(1));
  CHECK(pullback_tensor_estimate(torus, constant, v, eps).pi.norm() == 0.0);
  CHECK(energy_density(torus, constant, v, eps) == 0.0);
  CHECK(energy_density(torus, testing::coordinate_x(torus), v, eps) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pull-back of the hyperbolic identity and its contraction") {
  auto patch = testing::curved_mesh(DomainKind::HyperbolicPatch, 20, 1.0);
  auto space = target::TargetSpace::hyperbolic_plane();
  const double eps = default_epsilon(patch);
  for (double c : {1.0, 0.7}) {
    auto map = map_from_function(
        patch, space, [&](int v) { return hyperbolic_inclusion(patch, space, v, c); }, BoundaryCondition::Dirichlet);
    auto t = pullback_tensor_estimate(patch, map, 0, eps);
    CHECK(t.trace() / 2 == doctest::Approx(c * c).epsilon(0.01));
    CHECK(std::abs(t.pi(0, 1)) < 0.01);
  }
}

TEST_CASE("face densities integrate to the energy") {
  auto mesh = testing::curved_mesh(DomainKind::RoundSphere, 6, 1.0);
  auto map = random_map(mesh, tripod(), 3, 1.0, BoundaryCondition::Periodic);
  auto density = face_densities(mesh, map);
  auto area = face_areas(mesh);
  double total = 0.0;
  for (std::size_t f = 0; f < density.size(); ++f) {
    CHECK(density[f] >= 0.0);
    total += density[f] * area[f];
  }
  CHECK(total == doctest::Approx(dirichlet_energy(mesh, map)).epsilon(1e-10));
}

TEST_CASE("density field is positive semidefinite and thread independent") {
  auto mesh = testing::flat_mesh(DomainKind::FlatTorus, 24);
  auto map = random_map(mesh, target::TargetSpace::hyperbolic_plane(), 9, 0.5, BoundaryCondition::Periodic);
  auto one = energy_density_field(mesh, map, default_epsilon(mesh), 1);
  auto four = energy_density_field(mesh, map, default_epsilon(mesh), 4);
  REQUIRE(one.density.size() == four.density.size());
  for (std::size_t v = 0; v < one.density.size(); ++v) {
    CHECK(one.density[v] == four.density[v]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(one.tensors[v].pi);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("map serialization and convergence log") {
  auto mesh = testing::flat_mesh(DomainKind::FlatSquare, 8);
  auto map = square_tripod(8, mesh);
  auto copy = map_from_json(mesh, map_to_json(map));
  for (int v = 0; v < mesh.vertex_count(); ++v) CHECK(map.space.distance(map.values[v], copy.values[v]) < 1e-15);
  std::ostringstream out;
  write_convergence_csv(out, {{0, 2.0, 0.0}, {1, 1.5, 0.1}});
  CHECK(out.str().rfind("sweep,energy,max_move\n", 0) == 0);
  CHECK_THROWS(boundary_condition_from_string("neumann"));
}
