#include "eiglab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace eiglab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double critical_exponent(int n) { return 2.0 * (n + 1) / (n - 1); }

double sigma_exponent(int n, double p) {
  if (std::isinf(p)) return 0.5 * (n - 1);
  if (!(p >= 2.0)) throw std::invalid_argument("sigma(p) requires p >= 2");
  const double pc = critical_exponent(n);
  if (p >= pc) return n * (0.5 - 1.0 / p) - 0.5;
  return 0.5 * (n - 1) * (0.5 - 1.0 / p);
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("scaling fit needs >= 4 points");
  double lmin = points[0].first, lmax = points[0].first;
  for (const auto& [l, v] : points) {
    if (!(l > 0) || !(v > 0))
      throw std::invalid_argument("scaling fit needs positive data");
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  if (lmax < 8.0 * lmin - 1e-9)
    throw std::invalid_argument("lambda range must span a factor >= 8");
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [l, v] : points) {
    sx += std::log(l);
    sy += std::log(v);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [l, v] : points) {
    const double dx = std::log(l) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (!(sxx > 1e-12)) throw std::invalid_argument("degenerate lambda spread");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = points.size();
  fit.lambda_min = lmin;
  fit.lambda_max = lmax;
  double ssr = 0;
  for (const auto& [l, v] : points) {
    const double res = std::log(v) - (fit.intercept + fit.slope * std::log(l));
    ssr += res * res;
  }
  if (points.size() > 2)
    fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

BallNormMode ball_mode_for(const EigenfunctionField& field) {
  switch (field.kind) {
    case FieldKind::Zonal:
    case FieldKind::HighestWeight:
    case FieldKind::TorusWave:
      return BallNormMode::Auto;
    default:
      return BallNormMode::Grid;
  }
}

std::vector<Point> sup_centers(const EigenfunctionField& field, double r) {
  const ManifoldModel& model = field.model;
  if (field.kind == FieldKind::TorusWave)
    return {Point::torus(std::vector<double>(static_cast<std::size_t>(model.n), 0.0))};
  if (model.is_sphere() &&
      (field.kind == FieldKind::Zonal || field.kind == FieldKind::HighestWeight)) {
    // |f| is axisymmetric about the x3-axis, so the ball norm depends only on
    // the center colatitude: sweep one meridian at spacing r/2.
    const int steps = static_cast<int>(std::ceil(kPi / (0.5 * r)));
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
      centers.push_back(Point::sphere(kPi * i / steps, 0.0));
    return centers;
  }
  return generate_centers(model, 0.5 * r);
}

double sup_ball_value(const EigenfunctionField& field, double r) {
  return sup_ball_norm(field, r, sup_centers(field, r), ball_mode_for(field)).value;
}

AuditReport audit_critical_norm(const std::vector<const EigenfunctionField*>& fields,
                              const std::vector<double>& r_grid) {
  AuditReport rep;
  rep.id = "critical_norm";
  for (const auto* field : fields) {
    const int n = field->model.n;
    const double pc = critical_exponent(n);
    const double lhs = lp_norm_value(*field, pc);
    const double sig = sigma_exponent(n, pc);
    for (double r : r_grid) {
      if (r < 1.0 / field->freq || r > field->model.inj) continue;
      const double sup = sup_ball_value(*field, r);
      const double rhs = std::pow(field->freq, sig) *
                         std::pow(std::pow(r, -0.25 * (n + 1)) * sup, 2.0 / (n + 1));
      const double ratio = lhs / rhs;
      rep.points.push_back({field->id, field->freq, r, pc, ratio});
      rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
  }
  return rep;
}

AuditReport audit_operator_bound(const ManifoldModel& model,
                                 std::shared_ptr<const QuadratureGrid> grid,
                                 const RhoSpec& rho_spec, double p, double lambda,
                                 double r, std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  AuditReport rep;
  rep.id = "operator_bound";
  rep.seed = seed;
  rep.rho_kind = (rho_spec.kind == RhoKind::SmoothBump) ? "smooth_bump" : "fejer";
  WindowFilterSpec spec;
  spec.rho = rho_spec;
  spec.lambda = lambda;
  spec.r = r;
  const RhoEvaluator rho = make_rho(spec);
  const double denom_scale =
      std::pow(r, -0.5) * std::pow(lambda, sigma_exponent(model.n, p));
  auto run_trial = [&](double window_center, std::uint64_t s, const char* tag) {
    const EigenfunctionField f =
        random_window_field(model, window_center, 1.0, s, grid);
    const EigenfunctionField tf = apply_filter(f, spec, rho);
    const double num = lp_norm_value(tf, p);
    const double den = denom_scale * lp_norm_value(f, 2.0);
    const double ratio = num / den;
    rep.points.push_back({f.id + tag, lambda, r, p, ratio});
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  };
  for (int t = 0; t < trials; ++t) run_trial(lambda, seed + static_cast<std::uint64_t>(t), "");
  // off-center windows: spectral support at r-distance >= 10 from lambda
  const double off = lambda + 10.0 / r + 1.0;
  for (int t = 0; t < std::max(1, trials / 4); ++t)
    run_trial(off, seed + 1000 + static_cast<std::uint64_t>(t), "_off");
  return rep;
}

AuditReport audit_localized(const EigenfunctionField& field,
                            const std::vector<double>& r_grid, double p) {
  const int n = field.model.n;
  AuditReport rep;
  rep.id = "localized";
  const double lhs = lp_norm_value(field, p);
  for (double r : r_grid) {
    if (r < 1.0 / field.freq || r > field.model.inj) continue;
    const double sup = sup_ball_value(field, r);
    double rhs;
    if (std::isinf(p)) {
      rhs = std::pow(field.freq, 0.5 * (n - 1)) * std::pow(r, -0.5) * sup;
    } else {
      const double expo = -0.5 * p / (p - 2.0);
      rhs = std::pow(field.freq, sigma_exponent(n, p)) *
            std::pow(std::pow(r, expo) * sup, (p - 2.0) / p);
    }
    const double ratio = lhs / rhs;
    rep.points.push_back({field.id, field.freq, r, p, ratio});
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

AuditReport audit_ball_law_implication(const std::vector<const EigenfunctionField*>& fields,
                                  const std::vector<double>& r_schedule) {
  if (fields.size() != r_schedule.size())
    throw std::invalid_argument("need one schedule radius per field");
  AuditReport rep;
  rep.id = "ball_law_implication";
  std::vector<std::pair<double, double>> ball_law;
  std::vector<double> sups(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sups[i] = sup_ball_value(*fields[i], r_schedule[i]);
    ball_law.push_back({r_schedule[i], sups[i]});
  }
  // hypothesis: sup-ball values scale like r^{n/2} along the schedule
  double rmin = r_schedule[0], rmax = r_schedule[0];
  for (double r : r_schedule) {
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const int n = fields[0]->model.n;
  if (rmax > 1.5 * rmin && ball_law.size() >= 2) {
    // plain log-log least squares of value against r; the r spread along a
    // schedule is narrow, so no span requirement here
    double mx = 0, my = 0;
    for (const auto& [r, v] : ball_law) {
      mx += std::log(r);
      my += std::log(v);
    }
    mx /= static_cast<double>(ball_law.size());
    my /= static_cast<double>(ball_law.size());
    double sxx = 0, sxy = 0;
    for (const auto& [r, v] : ball_law) {
      const double dx = std::log(r) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(v) - my);
    }
    rep.aux = sxy / sxx;  // exponent of value vs r
    rep.flag_ok = std::fabs(rep.aux - 0.5 * n) <= 0.1;
  } else {
    rep.aux = 0.5 * n;  // constant schedule: hypothesis not testable, accepted
    rep.flag_ok = true;
  }
  const double pc = critical_exponent(n);
  const double sig = sigma_exponent(n, pc);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const double ratio =
        lp_norm_value(*fields[i], pc) / std::pow(r_schedule[i] * fields[i]->freq, sig);
    rep.points.push_back({fields[i]->id, fields[i]->freq, r_schedule[i], pc, ratio});
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

}  // namespace eiglab
