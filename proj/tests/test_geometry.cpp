#include <doctest.h>

#include <cmath>
#include <random>

#include "eiglab/geometry.hpp"

using namespace eiglab;

namespace {
constexpr double kPi = 3.14159265358979323846;

Point random_sphere_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = std::acos(2.0 * u(rng) - 1.0);
  const double phi = 2.0 * kPi * u(rng);
  return Point::sphere(theta, phi);
}
}  // namespace

TEST_CASE("manifold models") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  CHECK(s2.volume == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(s2.inj == doctest::Approx(kPi));
  const ManifoldModel t2 = ManifoldModel::torus(2);
  CHECK(t2.volume == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
  CHECK(t2.inj == doctest::Approx(kPi));
  CHECK(sphere_surface_area(3) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("geodesic distance basics") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const Point np = Point::north_pole(2);
  CHECK(geodesic_distance(s2, np, Point::sphere(kPi / 2, 0.3)) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(geodesic_distance(s2, np, Point::sphere(kPi, 0.0)) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(geodesic_distance(s2, np, np) == doctest::Approx(0.0));

  const ManifoldModel t2 = ManifoldModel::torus(2);
  CHECK(geodesic_distance(t2, Point::torus({0.0, 0.0}),
                          Point::torus({3.0 * kPi / 2.0, 0.0})) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("distance symmetry and triangle inequality") {
  std::mt19937_64 rng(7);
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const ManifoldModel t2 = ManifoldModel::torus(2);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_sphere_point(rng), b = random_sphere_point(rng),
                c = random_sphere_point(rng);
    CHECK(geodesic_distance(s2, a, b) ==
          doctest::Approx(geodesic_distance(s2, b, a)).epsilon(1e-9));
    CHECK(geodesic_distance(s2, a, c) <=
          geodesic_distance(s2, a, b) + geodesic_distance(s2, b, c) + 1e-9);
    const Point x = Point::torus({u(rng), u(rng)}), y = Point::torus({u(rng), u(rng)}),
                z = Point::torus({u(rng), u(rng)});
    CHECK(geodesic_distance(t2, x, y) ==
          doctest::Approx(geodesic_distance(t2, y, x)).epsilon(1e-9));
    CHECK(geodesic_distance(t2, x, z) <=
          geodesic_distance(t2, x, y) + geodesic_distance(t2, y, z) + 1e-9);
  }
}

TEST_CASE("gauss-legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double total = 0, xx = 0, x4 = 0;
  for (int i = 0; i < 6; ++i) {
    total += w[i];
    xx += w[i] * x[i] * x[i];
    x4 += w[i] * std::pow(x[i], 10);
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(xx == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x4 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));  // degree 10 <= 2*6-1
}

TEST_CASE("sphere grid quadrature") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const QuadratureGrid grid = build_grid(s2, 64);
  CHECK(grid.total_weight() == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  CHECK(grid.exactness_degree >= 127);

  double x3sq = 0, deg5 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = std::cos(grid.nodes[i].theta());
    x3sq += grid.weights[i] * t * t;
    deg5 += grid.weights[i] * (63 * std::pow(t, 5) - 70 * std::pow(t, 3) + 15 * t) / 8.0;
  }
  CHECK(x3sq == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-9));
  CHECK(std::fabs(deg5) < 1e-9);
}

TEST_CASE("torus grid quadrature") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const QuadratureGrid grid = build_grid(t2, 32);
  CHECK(grid.total_weight() == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-10));
  // exact on low-frequency waves
  double re = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    re += grid.weights[i] * std::cos(3.0 * grid.nodes[i].angles[0]);
  CHECK(std::fabs(re) < 1e-9);
}

TEST_CASE("ball restriction") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const QuadratureGrid grid = build_grid(s2, 64);
  const Point np = Point::north_pole(2);

  const QuadratureGrid half = restrict_to_ball(grid, BallSpec{np, kPi / 2});
  CHECK(half.total_weight() == doctest::Approx(2.0 * kPi).epsilon(0.02));

  // monotone in r
  const QuadratureGrid small = restrict_to_ball(grid, BallSpec{np, 0.5});
  const QuadratureGrid big = restrict_to_ball(grid, BallSpec{np, 1.0});
  CHECK(small.size() <= big.size());
  for (const auto& node : small.nodes)
    CHECK(geodesic_distance(s2, np, node) <= 1.0);

  CHECK_THROWS_AS(restrict_to_ball(grid, BallSpec{np, 1e-5}), ResolutionError);

  // measure consistency across centers for r >= 10x spacing
  std::mt19937_64 rng(11);
  const double r = 12.0 * grid.spacing;
  const double cap = 2.0 * kPi * (1.0 - std::cos(r));
  for (int i = 0; i < 20; ++i) {
    const Point c = random_sphere_point(rng);
    const double mass = restrict_to_ball(grid, BallSpec{c, r}).total_weight();
    CHECK(mass / cap > 0.9);
    CHECK(mass / cap < 1.1);
  }
}

TEST_CASE("torus ball restriction") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const QuadratureGrid grid = build_grid(t2, 64);
  const Point o = Point::torus({0.0, 0.0});
  const double r = 1.0;
  const QuadratureGrid disk = restrict_to_ball(grid, BallSpec{o, r});
  CHECK(disk.total_weight() == doctest::Approx(kPi * r * r).epsilon(0.02));
  // radius = inj: geodesic disk of radius pi covers pi/4 of the flat torus
  const QuadratureGrid full = restrict_to_ball(grid, BallSpec{o, t2.inj});
  CHECK(full.total_weight() ==
        doctest::Approx(kPi * kPi * kPi).epsilon(0.02));
}

TEST_CASE("tube restriction") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const QuadratureGrid grid = build_grid(s2, 64);
  const QuadratureGrid wide = restrict_to_tube(grid, TubeSpec::equatorial(kPi / 2));
  CHECK(wide.total_weight() == doctest::Approx(4.0 * kPi).epsilon(1e-6));

  const double w = 0.1;
  const QuadratureGrid band = restrict_to_tube(grid, TubeSpec::equatorial(w));
  CHECK(band.total_weight() == doctest::Approx(4.0 * kPi * std::sin(w)).epsilon(0.1));

  CHECK_THROWS_AS(restrict_to_tube(grid, TubeSpec::equatorial(1e-6)), ResolutionError);
}

TEST_CASE("center generation") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto torus_centers = generate_centers(t2, 2.0 * kPi / 8.0);
  CHECK(torus_centers.size() == 64);

  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto c1 = generate_centers(s2, 0.4);
  const auto c2 = generate_centers(s2, 0.2);
  const double growth = static_cast<double>(c2.size()) / static_cast<double>(c1.size());
  CHECK(growth > 3.0);
  CHECK(growth < 5.0);

  CHECK(generate_centers(s2, s2.inj).size() >= 2);

  // coverage: every sampled point within spacing of some center
  std::mt19937_64 rng(3);
  const double spacing = 0.3;
  const auto centers = generate_centers(s2, spacing);
  for (int i = 0; i < 300; ++i) {
    const Point x = random_sphere_point(rng);
    double best = 1e9;
    for (const auto& c : centers)
      best = std::min(best, geodesic_distance(s2, x, c));
    CHECK(best <= spacing);
  }

  CHECK_THROWS(generate_centers(s2, 1e-6, 1000));  // cap exceeded
}
