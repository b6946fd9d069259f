#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "eiglab/measures.hpp"

using namespace eiglab;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<const QuadratureGrid> sphere_grid(int res) {
  return std::make_shared<QuadratureGrid>(build_grid(ManifoldModel::sphere(2), res));
}
std::shared_ptr<const QuadratureGrid> torus_grid(int res) {
  return std::make_shared<QuadratureGrid>(build_grid(ManifoldModel::torus(2), res));
}
}  // namespace

TEST_CASE("region measures") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const ManifoldModel t2 = ManifoldModel::torus(2);
  CHECK(region_measure(s2, BallSpec{Point::north_pole(2), 0.7}) ==
        doctest::Approx(2.0 * kPi * (1.0 - std::cos(0.7))).epsilon(1e-12));
  CHECK(region_measure(t2, BallSpec{Point::torus({1.0, 2.0}), 0.7}) ==
        doctest::Approx(kPi * 0.49).epsilon(1e-12));
  CHECK(region_measure(s2, TubeSpec::equatorial(0.2)) ==
        doctest::Approx(4.0 * kPi * std::sin(0.2)).epsilon(1e-12));
  CHECK(region_measure(t2, RectRegion{{0.0, 1.0}, {2.0, 1.5}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("whole-manifold norms") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto tg = torus_grid(32);
  const EigenfunctionField w = torus_wave(t2, {0, 0}, tg);  // constant 1/(2pi)
  const double c = 1.0 / (2.0 * kPi);
  for (double p : {1.0, 2.0, 4.0, 6.0})
    CHECK(lp_norm_value(w, p) ==
          doctest::Approx(c * std::pow(4.0 * kPi * kPi, 1.0 / p)).epsilon(1e-10));
  CHECK(lp_norm_value(w, INFINITY) == doctest::Approx(c).epsilon(1e-12));

  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(64);
  const EigenfunctionField z = zonal_field(s2, 16, Point::north_pole(2), sg);
  CHECK(lp_norm_value(z, 2.0) == doctest::Approx(1.0).epsilon(1e-8));
  // sup norm approaches the pole value from below on the grid
  const double pole_val = std::sqrt(33.0 / (4.0 * kPi));
  CHECK(lp_norm_value(z, INFINITY) <= pole_val * (1.0 + 1e-9));
  CHECK(lp_norm_value(z, INFINITY) >= 0.9 * pole_val);
  // with the pole placed on a grid node the grid max is the exact peak
  const EigenfunctionField zn = zonal_field(s2, 16, sg->nodes[0], sg);
  CHECK(lp_norm_value(zn, INFINITY) == doctest::Approx(pole_val).epsilon(1e-8));

  // p-monotonicity of the probability-normalized norm
  const EigenfunctionField f = random_window_field(s2, 12.0, 1.0, 4, sg);
  double prev = 0;
  for (double p : {2.0, 3.0, 4.0, 6.0, 10.0}) {
    const double val = lp_norm_value(f, p) / std::pow(s2.volume, 1.0 / p);
    CHECK(val >= prev - 1e-12);
    prev = val;
  }
}

TEST_CASE("ball norms") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto tg = torus_grid(64);
  const EigenfunctionField w = torus_wave(t2, {3, 4}, tg);
  const Point o = Point::torus({0.0, 0.0});

  // constant modulus: ||w||_{L^2(B_r)} = sqrt(pi r^2) / (2 pi)
  for (double r : {0.3, 0.6, 1.2})
    CHECK(l2_ball_norm_value(w, o, r) ==
          doctest::Approx(std::sqrt(kPi) * r / (2.0 * kPi)).epsilon(0.02));

  // nondecreasing in r, bounded by the full norm
  double prev = 0;
  for (double r = 0.2; r <= kPi; r += 0.2) {
    const double v = l2_ball_norm_value(w, o, r, BallNormMode::Grid);
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 1.0 + 1e-8);
    prev = v;
  }

  // local quadrature path agrees with the grid path where both resolve
  const double r = 0.35;
  CHECK(l2_ball_norm_value(w, o, r, BallNormMode::LocalQuadrature) ==
        doctest::Approx(l2_ball_norm_value(w, o, r, BallNormMode::Grid)).epsilon(0.02));

  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(64);
  const EigenfunctionField z = zonal_field(s2, 32, Point::north_pole(2), sg);
  const double lam = z.freq;
  // zonal ball law at the pole: r^{-1/2} ||Z||_{B_r} within a fixed window
  double lo = 1e9, hi = 0;
  for (double r = 1.0 / lam; r <= kPi / 4; r *= 2.0) {
    const double ratio = l2_ball_norm_value(z, Point::north_pole(2), r) / std::sqrt(r);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo <= 4.0);
}

TEST_CASE("ball summer matches brute force") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto grid = sphere_grid(48);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> vals(grid->size());
  for (auto& v : vals) v = u(rng);
  const BallSummer summer(*grid, vals);
  CHECK(summer.structured());
  for (int i = 0; i < 25; ++i) {
    const Point c = Point::sphere(std::acos(2 * u(rng) - 1), 2 * kPi * u(rng));
    const double r = 0.1 + 1.4 * u(rng);
    double brute = 0;
    for (std::size_t j = 0; j < grid->size(); ++j)
      if (geodesic_distance(s2, c, grid->nodes[j]) <= r) brute += vals[j];
    CHECK(summer.sum(c, r) == doctest::Approx(brute).epsilon(1e-9));
  }

  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto tg = torus_grid(48);
  std::vector<double> tvals(tg->size());
  for (auto& v : tvals) v = u(rng);
  const BallSummer tsummer(*tg, tvals);
  for (int i = 0; i < 25; ++i) {
    const Point c = Point::torus({2 * kPi * u(rng), 2 * kPi * u(rng)});
    const double r = 0.1 + 2.9 * u(rng);
    double brute = 0;
    for (std::size_t j = 0; j < tg->size(); ++j)
      if (geodesic_distance(t2, c, tg->nodes[j]) <= r) brute += tvals[j];
    CHECK(tsummer.sum(c, r) == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("sup ball norm") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto tg = torus_grid(64);
  const EigenfunctionField w = torus_wave(t2, {3, 4}, tg);
  const double r = 0.5;
  const auto centers = generate_centers(t2, 0.5 * r);
  const SupBallResult res = sup_ball_norm(w, r, centers, BallNormMode::Grid);
  // translation invariance: every center gives nearly the same value
  for (std::size_t i = 0; i < centers.size(); i += 37)
    CHECK(l2_ball_norm_value(w, centers[i], r, BallNormMode::Grid) ==
          doctest::Approx(res.value).epsilon(0.02));

  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(64);
  const EigenfunctionField z = zonal_field(s2, 24, Point::north_pole(2), sg);
  const auto scenters = generate_centers(s2, 0.25);
  const SupBallResult zres = sup_ball_norm(z, 0.5, scenters);
  CHECK(geodesic_distance(s2, zres.argmax, Point::north_pole(2)) <= 0.25 + 1e-12);

  const EigenfunctionField q = highest_weight_field(s2, 48, sg);
  const double rq = 1.0 / std::sqrt(q.freq);
  const SupBallResult qres = sup_ball_norm(q, rq, generate_centers(s2, 0.5 * rq));
  CHECK(std::fabs(qres.argmax.theta() - kPi / 2) <= rq + 1e-12);
}

TEST_CASE("tube mass") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(160);
  const EigenfunctionField q = highest_weight_field(s2, 128, sg);
  const EigenfunctionField z = zonal_field(s2, 128, Point::north_pole(2), sg);
  const double w = 1.0 / std::sqrt(q.freq);

  CHECK(tube_mass(q, TubeSpec::equatorial(kPi / 2)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tube_mass(q, TubeSpec::equatorial(w)) >= 0.3);  // beam keeps its mass
  // tube through the pole: great circle with axis in the equatorial plane
  const TubeSpec polar{{1.0, 0.0, 0.0}, w};
  CHECK(tube_mass(z, polar) <= 0.2);  // zonal mass spreads over all distances
}

TEST_CASE("qe statistic") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto tg = torus_grid(64);
  const EigenfunctionField w = torus_wave(t2, {3, 4}, tg);
  // grid-aligned rectangles: exact equidistribution of constant modulus
  CHECK(qe_statistic(w, RectRegion{{0.0, 0.0}, {kPi, kPi}}) <= 1e-9);
  CHECK(qe_statistic(w, RectRegion{{0.0, 0.0}, {2.0 * kPi, 2.0 * kPi}}) <= 1e-8);

  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(128);
  const EigenfunctionField z = zonal_field(s2, 64, Point::north_pole(2), sg);
  const double rc = 1.0 / std::sqrt(z.freq);
  const Region cap = BallSpec{Point::north_pole(2), rc};
  // polar cap holds far more zonal mass than its share of the area
  CHECK(qe_statistic(z, cap) > 5.0 * region_measure(s2, cap) / s2.volume);
}

TEST_CASE("hoelder ball consistency") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto sg = sphere_grid(64);
  const std::vector<EigenfunctionField> fields = {
      zonal_field(s2, 24, Point::north_pole(2), sg),
      highest_weight_field(s2, 24, sg),
      random_window_field(s2, 12.0, 1.0, 8, sg)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& f : fields) {
    for (int i = 0; i < 10; ++i) {
      const Point c = Point::sphere(std::acos(2 * u(rng) - 1), 2 * kPi * u(rng));
      const double r = 0.3 + u(rng);
      const auto [lhs, rhs] = holder_ball_check(f, c, r);
      CHECK(lhs <= rhs * 1.01);
    }
  }
}
