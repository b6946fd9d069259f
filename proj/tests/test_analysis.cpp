#include <doctest.h>

#include <cmath>
#include <memory>

#include "eiglab/analysis.hpp"

using namespace eiglab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("growth exponent sigma") {
  CHECK(critical_exponent(2) == doctest::Approx(6.0));
  CHECK(critical_exponent(3) == doctest::Approx(4.0));

  CHECK(sigma_exponent(2, 6.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(sigma_exponent(2, INFINITY) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sigma_exponent(3, 4.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sigma_exponent(2, 2.0) == doctest::Approx(0.0));
  CHECK(sigma_exponent(4, 2.0) == doctest::Approx(0.0));

  // both branches agree at the critical exponent
  for (int n : {2, 3, 4, 7}) {
    const double pc = critical_exponent(n);
    const double lower = 0.5 * (n - 1) * (0.5 - 1.0 / pc);
    const double upper = n * (0.5 - 1.0 / pc) - 0.5;
    CHECK(lower == doctest::Approx(upper).epsilon(1e-12));
    CHECK(sigma_exponent(n, pc) ==
          doctest::Approx((n - 1.0) / (2.0 * (n + 1.0))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sigma_exponent(2, 1.5), std::invalid_argument);
}

TEST_CASE("scaling fit") {
  std::vector<std::pair<double, double>> pts;
  for (double l : {4.0, 8.0, 16.0, 32.0, 64.0})
    pts.push_back({l, 3.0 * std::pow(l, 0.25)});
  const ScalingFit fit = fit_scaling(pts);
  CHECK(fit.slope == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.stderr_ <= 1e-12);
  CHECK(fit.n_points == 5);

  CHECK_THROWS(fit_scaling({{1.0, 1.0}, {2.0, 2.0}, {16.0, 3.0}}));  // too few
  CHECK_THROWS(fit_scaling({{1.0, 1.0}, {2.0, 2.0}, {3.0, 1.0}, {4.0, 2.0}}));  // span
  CHECK_THROWS(fit_scaling({{1.0, -1.0}, {2.0, 2.0}, {8.0, 1.0}, {16.0, 2.0}}));
}

TEST_CASE("theorem ratio audit") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(s2, 96));
  const EigenfunctionField z = zonal_field(s2, 32, Point::north_pole(2), grid);
  const EigenfunctionField q = highest_weight_field(s2, 32, grid);
  const AuditReport rep =
      audit_critical_norm({&z, &q}, {kPi / 4, kPi / 8, kPi / 16, kPi / 32});
  REQUIRE(rep.points.size() == 8);
  for (const auto& pt : rep.points) {
    CHECK(std::isfinite(pt.ratio));
    CHECK(pt.ratio > 0.0);
  }
  CHECK(rep.max_ratio < 100.0);
  // radii below 1/lambda are skipped
  const AuditReport none = audit_critical_norm({&z}, {1e-3});
  CHECK(none.points.empty());
}

TEST_CASE("localized ratio audit") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(s2, 96));
  const EigenfunctionField z = zonal_field(s2, 32, grid->nodes[0], grid);
  for (double p : {6.0, static_cast<double>(INFINITY)}) {
    const AuditReport rep = audit_localized(z, {kPi / 4, kPi / 8, kPi / 16}, p);
    REQUIRE(rep.points.size() == 3);
    for (const auto& pt : rep.points) {
      CHECK(std::isfinite(pt.ratio));
      CHECK(pt.ratio > 0.0);
      CHECK(pt.ratio < 100.0);
    }
  }
}

TEST_CASE("operator bound audit") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(t2, 64));
  const AuditReport rep =
      audit_operator_bound(t2, grid, RhoSpec{}, 6.0, 10.0, 0.5, 7, 5);
  CHECK(rep.points.size() >= 6);  // trials plus off-center trials
  for (const auto& pt : rep.points) {
    CHECK(std::isfinite(pt.ratio));
    CHECK(pt.ratio >= 0.0);
  }
  CHECK(rep.max_ratio > 0.0);
  // determinism
  const AuditReport again =
      audit_operator_bound(t2, grid, RhoSpec{}, 6.0, 10.0, 0.5, 7, 5);
  CHECK(again.max_ratio == rep.max_ratio);
}

TEST_CASE("ball-law implication audit") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(t2, 96));
  std::vector<EigenfunctionField> waves;
  for (int k : {4, 9, 16, 36, 64}) waves.push_back(torus_wave(t2, {k, 0}, grid));
  std::vector<const EigenfunctionField*> ptrs;
  std::vector<double> sched;
  for (const auto& w : waves) {
    ptrs.push_back(&w);
    sched.push_back(1.0 / std::sqrt(w.freq));
  }
  const AuditReport rep = audit_ball_law_implication(ptrs, sched);
  // constant-modulus ball norms scale exactly like r = r^{n/2} on T^2
  CHECK(rep.flag_ok);
  CHECK(rep.aux == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rep.max_ratio < 100.0);
  for (const auto& pt : rep.points) CHECK(std::isfinite(pt.ratio));

  CHECK_THROWS(audit_ball_law_implication(ptrs, {0.1}));
}

TEST_CASE("sup center sets") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(s2, 64));
  const EigenfunctionField z = zonal_field(s2, 16, Point::north_pole(2), grid);
  const auto meridian = sup_centers(z, 0.2);
  for (const auto& c : meridian) CHECK(c.phi() == doctest::Approx(0.0));
  CHECK(meridian.size() >= 30);  // spacing r/2 along the half meridian

  const EigenfunctionField f = random_window_field(s2, 12.0, 1.0, 3, grid);
  CHECK(sup_centers(f, 0.5).size() > meridian.size());
  CHECK(ball_mode_for(f) == BallNormMode::Grid);
  CHECK(ball_mode_for(z) == BallNormMode::Auto);
}
