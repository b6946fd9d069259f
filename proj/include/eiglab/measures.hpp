#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "eiglab/harmonics.hpp"

namespace eiglab {

struct NormReport {
  std::string field_id;
  double lambda = 0;
  double p = 2;  // INFINITY for sup norm
  std::string region = "whole";
  double value = 0;
};

/// Torus coordinate box [lo_i, hi_i) with closed-form measure.
struct RectRegion {
  std::vector<double> lo, hi;
};

using Region = std::variant<BallSpec, TubeSpec, RectRegion>;

double region_measure(const ManifoldModel& model, const Region& region);
std::string region_label(const Region& region);

/// Fast sums of per-node values over geodesic balls on structured grids
/// (per-ring prefix sums + azimuth window).  Falls back to a linear scan on
/// unstructured grids.
class BallSummer {
 public:
  BallSummer(const QuadratureGrid& grid, std::vector<double> values);

  double sum(const Point& center, double radius) const;
  /// Visits (row, first column, wrapped column count) for every structured
  /// row intersecting the ball; used by the covering module.
  void visit(const Point& center, double radius,
             const std::function<void(int, int, int)>& cb) const;
  bool structured() const { return structured_; }

 private:
  const QuadratureGrid& grid_;
  std::vector<double> values_;
  bool structured_ = false;
  std::vector<std::vector<double>> prefix_;  // per row, size cols+1
  // row window helper: returns false if the row misses the ball; otherwise
  // sets the half-width of the column window in column units.
  bool row_window(int row, const Point& center, double radius, double& half_cols,
                  double& center_col) const;
};

enum class BallNormMode { Auto, Grid, LocalQuadrature };

double lp_norm_value(const EigenfunctionField& field, double p);
NormReport lp_norm(const EigenfunctionField& field, double p);
double lp_norm_region(const EigenfunctionField& field, const Region& region, double p);

/// L^2 norm over the geodesic ball B_r(center).  Auto mode uses the grid
/// restriction for r >= 10x grid spacing and a local geodesic-polar
/// quadrature (direct field evaluation) below that.
double l2_ball_norm_value(const EigenfunctionField& field, const Point& center, double r,
                          BallNormMode mode = BallNormMode::Auto);
NormReport l2_ball_norm(const EigenfunctionField& field, const Point& center, double r,
                        BallNormMode mode = BallNormMode::Auto);

struct SupBallResult {
  double value = 0;
  Point argmax;
};

/// Max of the ball norm over the supplied center set (a lower bound for the
/// sup over M; callers provide centers with spacing <= r/2).
SupBallResult sup_ball_norm(const EigenfunctionField& field, double r,
                            const std::vector<Point>& centers,
                            BallNormMode mode = BallNormMode::Auto);

double tube_mass(const EigenfunctionField& field, const TubeSpec& tube);

/// | int_Omega |f|^2 dV - |Omega|/|M| |.
double qe_statistic(const EigenfunctionField& field, const Region& region);

/// Discrete Hoelder check on a ball: lhs = ||f||_{L^2(B)},
/// rhs = ||f||_{L^{p_c}(B)} |B|^{1/2 - 1/p_c} with |B| measured on the same
/// node set.  Returns (lhs, rhs).
std::pair<double, double> holder_ball_check(const EigenfunctionField& field,
                                            const Point& center, double r);

}  // namespace eiglab
