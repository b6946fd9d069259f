#include "eiglab/measures.hpp"

#include <algorithm>
#include <cmath>

namespace eiglab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double clamp1(double t) { return std::min(1.0, std::max(-1.0, t)); }

double wrap_dist(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, kTwoPi - d);
}

bool rect_contains(const RectRegion& rect, const Point& x) {
  for (std::size_t i = 0; i < rect.lo.size(); ++i) {
    const double c = x.angles[i];
    if (c < rect.lo[i] || c >= rect.hi[i]) return false;
  }
  return true;
}

// Applies cb(i) for every grid node inside the region.
template <typename F>
void for_region_nodes(const QuadratureGrid& grid, const Region& region, F&& cb) {
  if (const auto* ball = std::get_if<BallSpec>(&region)) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (geodesic_distance(grid.model, ball->center, grid.nodes[i]) <= ball->radius) cb(i);
  } else if (const auto* tube = std::get_if<TubeSpec>(&region)) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (tube_distance(grid.nodes[i], *tube) <= tube->width) cb(i);
  } else {
    const auto& rect = std::get<RectRegion>(region);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (rect_contains(rect, grid.nodes[i])) cb(i);
  }
}

struct LocalQuadrature {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

// Geodesic polar quadrature over B_r(center): Gauss-Legendre radially,
// uniform in the angular variable.
LocalQuadrature local_ball_quadrature(const ManifoldModel& model, const Point& center,
                                      double r, double lambda) {
  const int n_s = std::min(512, std::max(24, 8 * static_cast<int>(std::ceil(lambda * r))));
  const int n_a = n_s;
  std::vector<double> xs, ws;
  gauss_legendre(n_s, xs, ws);
  LocalQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(n_s) * n_a);
  q.weights.reserve(q.nodes.capacity());
  const double da = kTwoPi / n_a;
  if (model.is_sphere()) {
    if (model.n != 2)
      throw std::invalid_argument("local ball quadrature implemented on S^2 only");
    const auto& c = center.embedded;
    // tangent frame at the center
    std::array<double, 3> t1{};
    if (std::fabs(c[2]) < 0.9) {
      t1 = {-c[1], c[0], 0.0};
    } else {
      t1 = {c[2], 0.0, -c[0]};
    }
    double nrm = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (auto& v : t1) v /= nrm;
    const std::array<double, 3> t2{c[1] * t1[2] - c[2] * t1[1],
                                   c[2] * t1[0] - c[0] * t1[2],
                                   c[0] * t1[1] - c[1] * t1[0]};
    for (int i = 0; i < n_s; ++i) {
      const double s = 0.5 * r * (xs[i] + 1.0);
      const double ws_i = 0.5 * r * ws[i] * std::sin(s) * da;
      const double cs = std::cos(s), ss = std::sin(s);
      for (int j = 0; j < n_a; ++j) {
        const double a = j * da;
        const double ca = std::cos(a), sa = std::sin(a);
        q.nodes.push_back(Point::sphere_embedded(
            {cs * c[0] + ss * (ca * t1[0] + sa * t2[0]),
             cs * c[1] + ss * (ca * t1[1] + sa * t2[1]),
             cs * c[2] + ss * (ca * t1[2] + sa * t2[2])}));
        q.weights.push_back(ws_i);
      }
    }
    return q;
  }
  if (model.n != 2)
    throw std::invalid_argument("local ball quadrature implemented on T^2 only");
  for (int i = 0; i < n_s; ++i) {
    const double s = 0.5 * r * (xs[i] + 1.0);
    const double ws_i = 0.5 * r * ws[i] * s * da;
    for (int j = 0; j < n_a; ++j) {
      const double a = j * da;
      q.nodes.push_back(Point::torus(
          {center.angles[0] + s * std::cos(a), center.angles[1] + s * std::sin(a)}));
      q.weights.push_back(ws_i);
    }
  }
  return q;
}

double l2_ball_local(const EigenfunctionField& field, const FieldEvaluator& eval,
                     const Point& center, double r) {
  const LocalQuadrature q =
      local_ball_quadrature(field.model, center, r, std::max(1.0, field.freq));
  double mass = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    mass += q.weights[i] * std::norm(eval(q.nodes[i]));
  return std::sqrt(mass);
}

bool cheap_evaluator(const EigenfunctionField& field) {
  return field.expansion.terms.size() <= 4;
}

}  // namespace

double region_measure(const ManifoldModel& model, const Region& region) {
  if (const auto* ball = std::get_if<BallSpec>(&region)) {
    if (model.is_sphere()) {
      if (model.n != 2) throw std::invalid_argument("cap measure implemented for S^2");
      return kTwoPi * (1.0 - std::cos(ball->radius));
    }
    if (model.n != 2) throw std::invalid_argument("disk measure implemented for T^2");
    return kPi * ball->radius * ball->radius;
  }
  if (const auto* tube = std::get_if<TubeSpec>(&region)) {
    (void)tube;
    return 2.0 * kTwoPi * std::sin(std::get<TubeSpec>(region).width);
  }
  const auto& rect = std::get<RectRegion>(region);
  double v = 1.0;
  for (std::size_t i = 0; i < rect.lo.size(); ++i) v *= rect.hi[i] - rect.lo[i];
  return v;
}

std::string region_label(const Region& region) {
  if (const auto* ball = std::get_if<BallSpec>(&region))
    return "ball(r=" + std::to_string(ball->radius) + ")";
  if (const auto* tube = std::get_if<TubeSpec>(&region))
    return "tube(w=" + std::to_string(tube->width) + ")";
  const auto& rect = std::get<RectRegion>(region);
  std::string label = "rect(";
  for (std::size_t i = 0; i < rect.lo.size(); ++i) {
    if (i) label += ",";
    label += "[" + std::to_string(rect.lo[i]) + "," + std::to_string(rect.hi[i]) + ")";
  }
  return label + ")";
}

BallSummer::BallSummer(const QuadratureGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid.size())
    throw std::invalid_argument("value array size does not match grid");
  if (!grid.structure) return;
  structured_ = true;
  const auto& st = *grid.structure;
  prefix_.assign(st.rows, {});
  for (int row = 0; row < st.rows; ++row) {
    auto& p = prefix_[static_cast<std::size_t>(row)];
    p.resize(static_cast<std::size_t>(st.cols) + 1, 0.0);
    const std::size_t base = static_cast<std::size_t>(row) * st.cols;
    for (int col = 0; col < st.cols; ++col)
      p[static_cast<std::size_t>(col) + 1] = p[static_cast<std::size_t>(col)] + values_[base + col];
  }
}

bool BallSummer::row_window(int row, const Point& center, double radius,
                            double& half_cols, double& center_col) const {
  const auto& st = *grid_.structure;
  const double rc = st.row_coord[static_cast<std::size_t>(row)];
  if (grid_.model.is_sphere()) {
    const double ctc = center.embedded[2];
    const double stc = std::hypot(center.embedded[0], center.embedded[1]);
    const double phic = std::atan2(center.embedded[1], center.embedded[0]);
    const double ct = std::cos(rc), stv = std::sin(rc);
    const double thc = std::acos(clamp1(ctc));
    if (std::fabs(rc - thc) > radius) return false;
    const double denom = stv * stc;
    double dphi;
    if (denom < 1e-14) {
      dphi = kPi;  // whole ring (|theta - theta_c| <= radius already holds)
    } else {
      const double qv = (std::cos(radius) - ct * ctc) / denom;
      if (qv <= -1.0) {
        dphi = kPi;
      } else if (qv >= 1.0) {
        return false;
      } else {
        dphi = std::acos(qv);
      }
    }
    half_cols = dphi / st.dcol;
    center_col = (phic - st.col0) / st.dcol;
    return true;
  }
  const double d1 = wrap_dist(rc, center.angles[0]);
  if (d1 > radius) return false;
  const double dx = std::sqrt(std::max(0.0, radius * radius - d1 * d1));
  half_cols = dx / st.dcol;
  center_col = (center.angles[1] - st.col0) / st.dcol;
  return true;
}

void BallSummer::visit(const Point& center, double radius,
                       const std::function<void(int, int, int)>& cb) const {
  const auto& st = *grid_.structure;
  for (int row = 0; row < st.rows; ++row) {
    double half_cols = 0, center_col = 0;
    if (!row_window(row, center, radius, half_cols, center_col)) continue;
    long lo = static_cast<long>(std::ceil(center_col - half_cols - 1e-9));
    long hi = static_cast<long>(std::floor(center_col + half_cols + 1e-9));
    long count = hi - lo + 1;
    if (count <= 0) continue;
    if (count >= st.cols) {
      cb(row, 0, st.cols);
      continue;
    }
    long lom = lo % st.cols;
    if (lom < 0) lom += st.cols;
    cb(row, static_cast<int>(lom), static_cast<int>(count));
  }
}

double BallSummer::sum(const Point& center, double radius) const {
  double acc = 0;
  if (!structured_) {
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (geodesic_distance(grid_.model, center, grid_.nodes[i]) <= radius)
        acc += values_[i];
    return acc;
  }
  visit(center, radius, [&](int row, int col_lo, int count) {
    const auto& p = prefix_[static_cast<std::size_t>(row)];
    const int cols = grid_.structure->cols;
    if (col_lo + count <= cols) {
      acc += p[static_cast<std::size_t>(col_lo + count)] - p[static_cast<std::size_t>(col_lo)];
    } else {
      acc += p[static_cast<std::size_t>(cols)] - p[static_cast<std::size_t>(col_lo)];
      acc += p[static_cast<std::size_t>(col_lo + count - cols)];
    }
  });
  return acc;
}

double lp_norm_value(const EigenfunctionField& field, double p) {
  const auto& grid = *field.grid;
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& s : field.samples) m = std::max(m, std::abs(s));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("need p >= 1 or infinity");
  double acc = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    acc += grid.weights[i] * std::pow(std::abs(field.samples[i]), p);
  return std::pow(acc, 1.0 / p);
}

NormReport lp_norm(const EigenfunctionField& field, double p) {
  return NormReport{field.id, field.freq, p, "whole", lp_norm_value(field, p)};
}

double lp_norm_region(const EigenfunctionField& field, const Region& region, double p) {
  const auto& grid = *field.grid;
  if (std::isinf(p)) {
    double m = 0;
    for_region_nodes(grid, region, [&](std::size_t i) { m = std::max(m, std::abs(field.samples[i])); });
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("need p >= 1 or infinity");
  double acc = 0;
  bool any = false;
  for_region_nodes(grid, region, [&](std::size_t i) {
    any = true;
    acc += grid.weights[i] * std::pow(std::abs(field.samples[i]), p);
  });
  if (!any) throw ResolutionError("region contains no grid nodes");
  return std::pow(acc, 1.0 / p);
}

double l2_ball_norm_value(const EigenfunctionField& field, const Point& center, double r,
                          BallNormMode mode) {
  const auto& grid = *field.grid;
  if (r < 1e-12 || r > field.model.inj + 1e-12)
    throw std::invalid_argument("ball radius must lie in (0, inj]");
  bool grid_path = true;
  if (mode == BallNormMode::LocalQuadrature) grid_path = false;
  if (mode == BallNormMode::Auto && r < 10.0 * grid.spacing && cheap_evaluator(field))
    grid_path = false;
  if (!grid_path) {
    FieldEvaluator eval(field);
    return l2_ball_local(field, eval, center, r);
  }
  double acc = 0;
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (geodesic_distance(field.model, center, grid.nodes[i]) <= r) {
      any = true;
      acc += grid.weights[i] * std::norm(field.samples[i]);
    }
  }
  if (!any) throw ResolutionError("ball radius below grid resolution");
  return std::sqrt(acc);
}

NormReport l2_ball_norm(const EigenfunctionField& field, const Point& center, double r,
                        BallNormMode mode) {
  return NormReport{field.id, field.freq, 2.0, "ball(r=" + std::to_string(r) + ")",
                    l2_ball_norm_value(field, center, r, mode)};
}

SupBallResult sup_ball_norm(const EigenfunctionField& field, double r,
                            const std::vector<Point>& centers, BallNormMode mode) {
  if (centers.empty()) throw std::invalid_argument("need at least one center");
  const auto& grid = *field.grid;
  bool grid_path = true;
  if (mode == BallNormMode::LocalQuadrature) grid_path = false;
  if (mode == BallNormMode::Auto && r < 10.0 * grid.spacing && cheap_evaluator(field))
    grid_path = false;
  SupBallResult best;
  best.argmax = centers.front();
  if (grid_path) {
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      vals[i] = grid.weights[i] * std::norm(field.samples[i]);
    BallSummer summer(grid, std::move(vals));
    for (const auto& c : centers) {
      const double v = std::sqrt(std::max(0.0, summer.sum(c, r)));
      if (v > best.value) {
        best.value = v;
        best.argmax = c;
      }
    }
    return best;
  }
  FieldEvaluator eval(field);
  for (const auto& c : centers) {
    const double v = l2_ball_local(field, eval, c, r);
    if (v > best.value) {
      best.value = v;
      best.argmax = c;
    }
  }
  return best;
}

double tube_mass(const EigenfunctionField& field, const TubeSpec& tube) {
  if (!field.model.is_sphere())
    throw std::invalid_argument("tube mass is sphere-only");
  const auto& grid = *field.grid;
  double acc = 0;
  bool any = false;
  for_region_nodes(grid, Region{tube}, [&](std::size_t i) {
    any = true;
    acc += grid.weights[i] * std::norm(field.samples[i]);
  });
  if (!any) throw ResolutionError("tube width below grid resolution");
  return acc;
}

double qe_statistic(const EigenfunctionField& field, const Region& region) {
  const auto& grid = *field.grid;
  double mass = 0;
  for_region_nodes(grid, region, [&](std::size_t i) {
    mass += grid.weights[i] * std::norm(field.samples[i]);
  });
  return std::fabs(mass - region_measure(field.model, region) / field.model.volume);
}

std::pair<double, double> holder_ball_check(const EigenfunctionField& field,
                                            const Point& center, double r) {
  const auto& grid = *field.grid;
  const double pc = 2.0 * (field.model.n + 1) / (field.model.n - 1);
  double m2 = 0, mp = 0, vol = 0;
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (geodesic_distance(field.model, center, grid.nodes[i]) > r) continue;
    any = true;
    const double a = std::abs(field.samples[i]);
    m2 += grid.weights[i] * a * a;
    mp += grid.weights[i] * std::pow(a, pc);
    vol += grid.weights[i];
  }
  if (!any) throw ResolutionError("ball radius below grid resolution");
  return {std::sqrt(m2), std::pow(mp, 1.0 / pc) * std::pow(vol, 0.5 - 1.0 / pc)};
}

}  // namespace eiglab
