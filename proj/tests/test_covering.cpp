#include <doctest.h>

#include <cmath>
#include <memory>

#include "eiglab/covering.hpp"

using namespace eiglab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("torus lattice covering") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const QuadratureGrid grid = build_grid(t2, 64);
  const BallCovering cov = build_covering(t2, 2.0 * kPi / 16.0, grid);
  CHECK(cov.count == 256);
  CHECK(cov.coverage_total);
  CHECK(cov.overlap_A >= 1);
  CHECK(cov.overlap_A <= 16);
}

TEST_CASE("sphere covering scaling") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const QuadratureGrid grid = build_grid(s2, 128);
  const BallCovering big = build_covering(s2, kPi / 4, grid);
  const BallCovering small = build_covering(s2, kPi / 8, grid);
  CHECK(big.coverage_total);
  CHECK(small.coverage_total);

  const double growth =
      static_cast<double>(small.count) / static_cast<double>(big.count);
  CHECK(growth > 3.0);
  CHECK(growth < 5.0);
  CHECK(std::abs(big.overlap_A - small.overlap_A) <= 1);
  CHECK(small.overlap_A <= 36);

  CHECK_THROWS_AS(build_covering(s2, 2.0 * grid.spacing, grid),
                  std::invalid_argument);
}

TEST_CASE("covering chain inequalities") {
  const ManifoldModel s2 = ManifoldModel::sphere(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(s2, 96));
  const EigenfunctionField z = zonal_field(s2, 48, Point::north_pole(2), grid);
  const double pc = 6.0;

  for (double r : {kPi / 4, kPi / 8, kPi / 16}) {
    const BallCovering cov = build_covering(s2, r, *grid);
    const ChainAuditReport rep = covering_chain_audit(z, cov, pc);
    CHECK(rep.subadditivity_ratio >= 1.0 - 1e-6);
    CHECK(rep.l2_overlap_ratio <= cov.overlap_A + 1e-9);
    CHECK(rep.sup_factor_ratio >= 0.0);
    CHECK(rep.sup_factor_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("chain ratio for constant-modulus fields") {
  const ManifoldModel t2 = ManifoldModel::torus(2);
  const auto grid = std::make_shared<QuadratureGrid>(build_grid(t2, 64));
  const EigenfunctionField w = torus_wave(t2, {3, 4}, grid);
  const double r = kPi / 8;
  const BallCovering cov = build_covering(t2, r, *grid);
  const ChainAuditReport rep = covering_chain_audit(w, cov, 6.0);
  // constant modulus: sum_l |B_2r| / |M|, doubled disks of area pi (2r)^2
  const double expect =
      static_cast<double>(cov.count) * kPi * 4.0 * r * r / t2.volume;
  CHECK(rep.l2_overlap_ratio == doctest::Approx(expect).epsilon(0.02));
  CHECK(rep.l2_overlap_ratio <= cov.overlap_A + 1e-9);
}
