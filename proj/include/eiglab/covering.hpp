#pragma once

#include "eiglab/measures.hpp"

namespace eiglab {

/// Ball covering {B_r(x_l)} with measured doubled-ball overlap.
struct BallCovering {
  ManifoldModel model;
  std::vector<Point> centers;
  double radius = 0;
  std::size_t count = 0;
  int overlap_A = 0;        // max multiplicity of {B_{2r}(x_l)} over grid nodes
  bool coverage_total = false;
};

/// Builds the covering from the deterministic center set and measures
/// coverage and doubled-ball overlap on the grid.  Throws on coverage gaps.
BallCovering build_covering(const ManifoldModel& model, double r,
                            const QuadratureGrid& grid);

struct ChainAuditReport {
  double r = 0;
  double p = 0;
  int overlap_A = 0;
  // (i)  sum_l ||e||_{L^p(B_r(x_l))}^p / ||e||_p^p            (>= 1)
  double subadditivity_ratio = 0;
  // (ii) sum_l ||e||_{L^2(B_{2r}(x_l))}^2 / ||e||_2^2         (<= A)
  double l2_overlap_ratio = 0;
  // (iii) sum_l ||e||_{B_{2r}}^p / (sup_l ||e||_{B_{2r}}^{p-2} sum_l ||e||_{B_{2r}}^2)
  double sup_factor_ratio = 0;
};

/// Numerically verifies the covering chain of inequalities for one field.
ChainAuditReport covering_chain_audit(const EigenfunctionField& field,
                                      const BallCovering& covering, double p);

}  // namespace eiglab
