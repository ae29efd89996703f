#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hmlab/error.hpp"
#include "hmlab/target/comparison.hpp"
#include "hmlab/target/frechet.hpp"
#include "hmlab/target/random.hpp"
#include "hmlab/target/space.hpp"

using namespace hmlab;
using namespace hmlab::target;

namespace {

TargetSpace tripod() { return TargetSpace::tree(MetricTree::star(3, 2.0)); }

std::vector<TargetSpace> all_spaces() {
  return {TargetSpace::euclidean(1), TargetSpace::euclidean(3), tripod(),
          TargetSpace::tree(MetricTree(5, {{0, 1, 1.0}, {1, 2, 0.5}, {1, 3, 2.0}, {0, 4, 1.5}})),
          TargetSpace::hyperbolic_plane(), TargetSpace::product({TargetSpace::euclidean(1), tripod()})};
}

// Hyperbolic law of cosines, solved for the third side.
double hyperbolic_side(double b, double c, double angle) {
  return std::acosh(std::cosh(b) * std::cosh(c) - std::sinh(b) * std::sinh(c) * std::cos(angle));
}

}  // namespace

TEST_CASE("tree distances and geodesics") {
  auto t = tripod();
  CHECK(t.distance(t.tree_point(0, 0.7), t.tree_point(0, 0.7)) == 0.0);
  CHECK(t.distance(t.tree_point(0, 0.3), t.tree_point(1, 0.4)) == doctest::Approx(0.7));
  CHECK(t.distance(t.tree_point(2, 0.5), t.tree_point(2, 1.25)) == doctest::Approx(0.75));

  auto p = t.tree_point(0, 1.0), q = t.tree_point(1, 1.0);
  CHECK(t.interpolate(p, q, 0.0) == t.canonicalize(p));
  CHECK(t.interpolate(p, q, 1.0) == t.canonicalize(q));
  auto m = t.as_tree(t.interpolate(p, q, 0.25));
  CHECK(m.edge == 0);
  CHECK(m.offset == doctest::Approx(0.5));
  // Past the centre the path continues on the second ray.
  auto m2 = t.as_tree(t.interpolate(p, q, 0.75));
  CHECK(m2.edge == 1);
  CHECK(m2.offset == doctest::Approx(0.5));

  CHECK_THROWS(t.tree_point(0, 2.5));
  CHECK_THROWS(t.tree_point(5, 0.1));
}

TEST_CASE("hyperbolic distances") {
  auto h = TargetSpace::hyperbolic_plane();
  CHECK(h.distance(h.hyperbolic_polar(1.0, 0.4), h.hyperbolic_polar(2.0, 0.4)) == doctest::Approx(1.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.0, 3.0), theta(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    double r1 = r(rng), r2 = r(rng), t1 = theta(rng), t2 = theta(rng);
    double oracle = hyperbolic_side(r1, r2, t1 - t2);
    CHECK(h.distance(h.hyperbolic_polar(r1, t1), h.hyperbolic_polar(r2, t2)) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("euclidean and product geodesics") {
  auto e = TargetSpace::euclidean(2);
  Eigen::Vector2d a(1.0, -2.0), b(3.0, 0.5);
  for (double t : {0.0, 0.3, 1.0})
    CHECK((e.as_vector(e.interpolate(e.from_vector(a), e.from_vector(b), t)) - ((1 - t) * a + t * b)).norm() < 1e-15);

  auto prod = TargetSpace::product({TargetSpace::euclidean(1), tripod()});
  auto t = tripod();
  Eigen::VectorXd x(1), y(1);
  x << 0.0;
  y << 3.0;
  auto p = prod.join({TargetSpace::euclidean(1).from_vector(x), t.tree_point(0, 0.3)});
  auto q = prod.join({TargetSpace::euclidean(1).from_vector(y), t.tree_point(1, 0.1)});
  CHECK(prod.distance(p, q) == doctest::Approx(std::hypot(3.0, 0.4)));
}

TEST_CASE("metric axioms and constant-speed geodesics") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& space : all_spaces()) {
    CAPTURE(space.describe());
    for (int i = 0; i < 300; ++i) {
      auto p = random_point(space, rng), q = random_point(space, rng), r = random_point(space, rng);
      double pq = space.distance(p, q), qr = space.distance(q, r), pr = space.distance(p, r);
      CHECK(space.distance(p, p) <= 1e-7);
      CHECK(pq == doctest::Approx(space.distance(q, p)).epsilon(1e-12));
      CHECK(pr <= pq + qr + 1e-9);
      double s = unit(rng);
      auto m = space.interpolate(p, q, s);
      CHECK(space.contains(m));
      CHECK(space.distance(p, m) == doctest::Approx(s * pq).epsilon(1e-8).scale(1.0));
      CHECK(space.distance(m, q) == doctest::Approx((1 - s) * pq).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("NPC comparison") {
  auto e = TargetSpace::euclidean(2);
  auto P = [&](double x, double y) { return e.from_vector(Eigen::Vector2d(x, y)); };
  auto flat = check_npc_comparison(e, P(0, 0), P(2, 0), P(0.5, 1.7), 0.3);
  CHECK(flat.lhs == doctest::Approx(flat.rhs).epsilon(1e-12));
  CHECK(flat.pass);
  auto degenerate = check_npc_comparison(e, P(0, 0), P(1, 0), P(0.5, 0), 0.5);
  CHECK(degenerate.lhs == doctest::Approx(degenerate.rhs));

  // Three unit points on distinct rays: the side-2 equilateral comparison
  // triangle has median sqrt(3) while the tree midpoint is the centre.
  auto t = tripod();
  auto tri = check_npc_comparison(t, t.tree_point(0, 1.0), t.tree_point(1, 1.0), t.tree_point(2, 1.0), 0.5);
  CHECK(tri.lhs == doctest::Approx(1.0));
  CHECK(tri.rhs == doctest::Approx(std::sqrt(3.0)));
  CHECK(tri.pass);
  CHECK(euclidean_comparison_distance(2.0, 2.0, 2.0, 0.5) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("CAT(-1) comparison") {
  auto h = TargetSpace::hyperbolic_plane();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    auto A = random_point(h, rng, 2.0), B = random_point(h, rng, 2.0), C = random_point(h, rng, 2.0);
    auto res = check_cat1_comparison(h, A, B, C, unit(rng));
    CHECK(res.lhs == doctest::Approx(res.rhs).epsilon(1e-9).scale(1.0));
    CHECK(res.pass);
  }

  // Euclidean equilateral triangle of side 1: the flat median is sqrt(3)/2,
  // the hyperbolic median follows from two applications of the law of cosines.
  double angle = std::acos((std::cosh(1.0) * std::cosh(1.0) - std::cosh(1.0)) / (std::sinh(1.0) * std::sinh(1.0)));
  double oracle = hyperbolic_side(1.0, 0.5, angle);
  CHECK(oracle == doctest::Approx(0.83402).epsilon(1e-4));
  CHECK(hyperbolic_comparison_distance(1.0, 1.0, 1.0, 0.5) == doctest::Approx(oracle).epsilon(1e-12));

  auto e = TargetSpace::euclidean(2);
  auto res = check_cat1_comparison(e, e.from_vector(Eigen::Vector2d(0.5, std::sqrt(3.0) / 2)),
                                   e.from_vector(Eigen::Vector2d(0, 0)), e.from_vector(Eigen::Vector2d(1, 0)), 0.5);
  CHECK(res.lhs == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(res.rhs == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_FALSE(res.pass);
  auto witness = witness_json(e, e.from_vector(Eigen::Vector2d(0.5, std::sqrt(3.0) / 2)),
                              e.from_vector(Eigen::Vector2d(0, 0)), e.from_vector(Eigen::Vector2d(1, 0)), 0.5, res);
  CHECK(witness.contains("lhs"));
}

TEST_CASE("Frechet means") {
  auto e = TargetSpace::euclidean(2);
  std::vector<TargetPoint> one{e.from_vector(Eigen::Vector2d(0.3, 0.4))};
  std::vector<double> w1{1.0};
  CHECK(e.distance(frechet_mean(e, one, w1).point, one[0]) < 1e-12);

  for (const auto& space : all_spaces()) {
    CAPTURE(space.describe());
    std::mt19937_64 rng(21);
    auto p = random_point(space, rng), q = random_point(space, rng);
    std::vector<TargetPoint> two{p, q};
    std::vector<double> w2{1.0, 1.0};
    auto mean = frechet_mean(space, two, w2);
    double d = space.distance(p, q);
    CHECK(mean.objective == doctest::Approx(d * d / 2).epsilon(1e-8).scale(1.0));
    CHECK(space.distance(mean.point, space.interpolate(p, q, 0.5)) < 1e-5);
  }

  // Tripod: moving t along any ray gives (1 - t)^2 + 2 (1 + t)^2, minimised at
  // the centre; a brute-force scan over the tree confirms it.
  auto t = tripod();
  std::vector<TargetPoint> rays{t.tree_point(0, 1.0), t.tree_point(1, 1.0), t.tree_point(2, 1.0)};
  std::vector<double> w3{1.0, 1.0, 1.0};
  auto centre = frechet_mean(t, rays, w3);
  CHECK(t.distance(centre.point, t.tree_node(0)) < 1e-9);
  CHECK(centre.objective == doctest::Approx(3.0));
  double best = std::numeric_limits<double>::infinity();
  for (int edge = 0; edge < 3; ++edge)
    for (int k = 0; k <= 200; ++k) best = std::min(best, frechet_objective(t, rays, w3, t.tree_point(edge, k * 0.01)));
  CHECK(best == doctest::Approx(centre.objective));
}

TEST_CASE("Frechet mean minimises the objective") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (const auto& space : all_spaces()) {
    CAPTURE(space.describe());
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<TargetPoint> pts;
      std::vector<double> w;
      for (int i = 0; i < 5; ++i) pts.push_back(random_point(space, rng)), w.push_back(unit(rng));
      auto mean = frechet_mean(space, pts, w);
      for (int k = 0; k < 10; ++k) {
        auto other = space.interpolate(mean.point, random_point(space, rng), unit(rng) * 0.2);
        CHECK(frechet_objective(space, pts, w, other) >= mean.objective - 1e-9);
      }
      for (const auto& p : pts) CHECK(frechet_objective(space, pts, w, p) >= mean.objective - 1e-9);
    }
  }
}

TEST_CASE("target specs from json") {
  auto t = TargetSpace::from_json({{"kind", "tripod"}, {"arms", 3}, {"arm_length", 2.0}});
  CHECK(t.kind() == SpaceKind::MetricTree);
  CHECK(t.curvature_class() == CurvatureClass::NPC);
  CHECK(TargetSpace::from_json({{"kind", "hyperbolic_plane"}}).curvature_class() == CurvatureClass::CAT_MINUS_1);
  CHECK(TargetSpace::from_json({{"kind", "euclidean"}, {"dimension", 3}}).euclidean_dimension() == 3);
  CHECK_THROWS(TargetSpace::from_json({{"kind", "klein_bottle"}}));
  auto round = TargetSpace::from_json(t.to_json());
  CHECK(round.distance(round.tree_point(0, 0.3), round.tree_point(1, 0.4)) == doctest::Approx(0.7));
}
