#include "eiglab/covering.hpp"

#include <algorithm>
#include <cmath>

namespace eiglab {

BallCovering build_covering(const ManifoldModel& model, double r,
                            const QuadratureGrid& grid) {
  if (!(r >= 4.0 * grid.spacing))
    throw std::invalid_argument("covering radius must be >= 4x grid spacing");
  BallCovering cov;
  cov.model = model;
  cov.radius = r;
  cov.centers = generate_centers(model, r);
  cov.count = cov.centers.size();

  // coverage and doubled-ball multiplicity, counted per grid node
  std::vector<double> ones(grid.size(), 1.0);
  BallSummer indexer(grid, std::move(ones));
  std::vector<int> covered(grid.size(), 0);
  std::vector<int> doubled(grid.size(), 0);
  const double r2 = std::min(2.0 * r, model.inj);
  if (indexer.structured()) {
    const auto& st = *grid.structure;
    auto mark = [&](std::vector<int>& tab, const Point& c, double rad) {
      indexer.visit(c, rad, [&](int row, int col_lo, int count) {
        const std::size_t base = static_cast<std::size_t>(row) * st.cols;
        for (int j = 0; j < count; ++j) {
          int col = col_lo + j;
          if (col >= st.cols) col -= st.cols;
          ++tab[base + static_cast<std::size_t>(col)];
        }
      });
    };
    for (const auto& c : cov.centers) {
      mark(covered, c, r);
      mark(doubled, c, r2);
    }
  } else {
    for (const auto& c : cov.centers) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = geodesic_distance(model, c, grid.nodes[i]);
        if (d <= r) ++covered[i];
        if (d <= r2) ++doubled[i];
      }
    }
  }
  cov.coverage_total = *std::min_element(covered.begin(), covered.end()) >= 1;
  cov.overlap_A = *std::max_element(doubled.begin(), doubled.end());
  if (!cov.coverage_total)
    throw std::runtime_error("covering construction left uncovered grid nodes");
  return cov;
}

ChainAuditReport covering_chain_audit(const EigenfunctionField& field,
                                      const BallCovering& covering, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("chain audit needs p > 2");
  const auto& grid = *field.grid;
  std::vector<double> wp(grid.size()), w2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = std::abs(field.samples[i]);
    w2[i] = grid.weights[i] * a * a;
    wp[i] = grid.weights[i] * std::pow(a, p);
  }
  BallSummer sum_p(grid, std::move(wp));
  BallSummer sum_2(grid, std::move(w2));

  const double r = covering.radius;
  const double r2 = std::min(2.0 * r, field.model.inj);
  double total_p = 0, total_2 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = std::abs(field.samples[i]);
    total_2 += grid.weights[i] * a * a;
    total_p += grid.weights[i] * std::pow(a, p);
  }

  double sum_small_p = 0;       // sum_l ||e||_{L^p(B_r)}^p
  double sum_big_2 = 0;         // sum_l ||e||_{L^2(B_2r)}^2
  double sum_big_p = 0;         // sum_l ||e||_{L^2(B_2r)}^p
  double sup_big = 0;           // sup_l ||e||_{L^2(B_2r)}
  for (const auto& c : covering.centers) {
    sum_small_p += std::max(0.0, sum_p.sum(c, r));
    const double m2 = std::max(0.0, sum_2.sum(c, r2));
    sum_big_2 += m2;
    sum_big_p += std::pow(m2, 0.5 * p);
    sup_big = std::max(sup_big, std::sqrt(m2));
  }

  ChainAuditReport rep;
  rep.r = r;
  rep.p = p;
  rep.overlap_A = covering.overlap_A;
  rep.subadditivity_ratio = sum_small_p / total_p;
  rep.l2_overlap_ratio = sum_big_2 / total_2;
  rep.sup_factor_ratio = sum_big_p / (std::pow(sup_big, p - 2.0) * sum_big_2);
  return rep;
}

}  // namespace eiglab
