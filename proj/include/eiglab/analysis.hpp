#pragma once

#include <cstdint>

#include "eiglab/covering.hpp"
#include "eiglab/spectral_filter.hpp"

namespace eiglab {

/// Critical exponent p_c = 2(n+1)/(n-1).
double critical_exponent(int n);

/// Sharp eigenfunction growth exponent sigma(p) (two-branch form).
double sigma_exponent(int n, double p);

struct ScalingFit {
  double slope = 0;
  double stderr_ = 0;
  double intercept = 0;
  std::size_t n_points = 0;
  double lambda_min = 0;
  double lambda_max = 0;
};

/// Least-squares slope of log(value) against log(lambda).
/// Requires >= 4 points with positive values spanning a factor >= 8.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

struct AuditPoint {
  std::string field_id;
  double lambda = 0;
  double r = 0;
  double p = 0;
  double ratio = 0;
};

struct AuditReport {
  std::string id;
  std::vector<AuditPoint> points;
  double max_ratio = 0;
  double aux = 0;        // audit-specific scalar (e.g. fitted hypothesis slope)
  bool flag_ok = true;   // audit-specific flag (e.g. hypothesis satisfied)
  std::uint64_t seed = 0;
  int resolution = 0;
  std::string rho_kind;
  int covering_A = 0;
};

/// Center set realizing the sup over M for the given field at scale r.
/// Fields with an axisymmetric modulus reduce to a meridian sweep; torus
/// waves have constant modulus; everything else gets a spacing-r/2 lattice.
std::vector<Point> sup_centers(const EigenfunctionField& field, double r);

/// Ball-norm evaluation mode appropriate for the field (grid sums for wide
/// expansions, local quadrature allowed for cheap evaluators).
BallNormMode ball_mode_for(const EigenfunctionField& field);

double sup_ball_value(const EigenfunctionField& field, double r);

/// Ratio audit of the localized critical-norm bound:
/// ||e||_{p_c} vs lambda^{sigma(p_c)} (r^{-(n+1)/4} sup_x ||e||_{L^2(B_r)})^{2/(n+1)}.
AuditReport audit_critical_norm(const std::vector<const EigenfunctionField*>& fields,
                              const std::vector<double>& r_grid);

/// Ratio audit of ||T_{lambda,r} f||_p <= C r^{-1/2} lambda^{sigma(p)} ||f||_2
/// over random window functions (on-center and off-center).
AuditReport audit_operator_bound(const ManifoldModel& model,
                                 std::shared_ptr<const QuadratureGrid> grid,
                                 const RhoSpec& rho_spec, double p, double lambda,
                                 double r, std::uint64_t seed, int trials = 20);

/// Ratio audit of the localized L^p bounds (finite p and sup-norm forms).
AuditReport audit_localized(const EigenfunctionField& field,
                            const std::vector<double>& r_grid, double p);

/// Checks the implication: ball law sup_x ||e||_{L^2(B_{r(lambda)})} ~ r^{n/2}
/// implies ||e||_{p_c} <= C (r(lambda) lambda)^{sigma(p_c)}.
AuditReport audit_ball_law_implication(const std::vector<const EigenfunctionField*>& fields,
                                  const std::vector<double>& r_schedule);

}  // namespace eiglab
