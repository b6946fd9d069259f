#include "eiglab/spectral_filter.hpp"

#include <algorithm>
#include <cmath>

namespace eiglab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSamplesPerUnit = 64;

double fejer_rho(double s) {
  if (std::fabs(s) < 1e-8) {
    const double x = 0.5 * s;
    return 1.0 - x * x / 3.0;  // series of (sin x / x)^2
  }
  const double x = 0.5 * s;
  const double q = std::sin(x) / x;
  return q * q;
}

// phi-hat(s) = 2 int_0^h exp(-a/(1-(u/h)^2)) cos(su) du by Gauss-Legendre.
class BumpTransform {
 public:
  BumpTransform(double halfwidth, double sharpness) {
    std::vector<double> x, w;
    gauss_legendre(512, x, w);
    nodes_.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = 0.5 * halfwidth * (x[i] + 1.0);  // map [-1,1] -> [0,h]
      const double q = u / halfwidth;
      const double val = std::exp(-sharpness / (1.0 - q * q));
      nodes_.push_back({u, 2.0 * 0.5 * halfwidth * w[i] * val});
    }
  }
  double operator()(double s) const {
    double acc = 0;
    for (const auto& [u, wv] : nodes_) acc += wv * std::cos(s * u);
    return acc;
  }

 private:
  std::vector<std::pair<double, double>> nodes_;
};

}  // namespace

RhoEvaluator::RhoEvaluator(const RhoSpec& spec, double s_max) : spec_(spec), s_max_(s_max) {
  if (spec.kind == RhoKind::Fejer) return;
  if (!(spec.bump_halfwidth > 0) || spec.bump_halfwidth > 0.5)
    throw std::invalid_argument("bump halfwidth must lie in (0, 1/2]");
  if (!(spec.bump_sharpness > 0))
    throw std::invalid_argument("bump sharpness must be positive");
  const int count = static_cast<int>(std::ceil(s_max * kSamplesPerUnit));
  ds_ = s_max / count;
  BumpTransform phat(spec.bump_halfwidth, spec.bump_sharpness);
  const double peak = phat(0.0);
  cache_.resize(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) {
    const double q = phat(i * ds_) / peak;
    cache_[static_cast<std::size_t>(i)] = q * q;
  }
}

double RhoEvaluator::operator()(double s) const {
  if (spec_.kind == RhoKind::Fejer) return fejer_rho(s);
  s = std::fabs(s);
  if (s >= s_max_) return 0.0;  // below 1e-30 of peak for the cached ranges
  const double pos = s / ds_;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= cache_.size()) i = cache_.size() - 2;
  const double f = pos - static_cast<double>(i);
  const double pm1 = (i > 0) ? cache_[i - 1] : cache_[1];  // even extension at 0
  const double p0 = cache_[i];
  const double p1 = cache_[i + 1];
  const double p2 = cache_[std::min(cache_.size() - 1, i + 2)];
  return p0 + 0.5 * f * (p1 - pm1 + f * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                                         f * (3.0 * (p0 - p1) + p2 - pm1)));
}

double RhoEvaluator::hat(double t) const {
  if (spec_.kind == RhoKind::Fejer) {
    // closed form: 2 pi (1 - |t|)_+
    return (std::fabs(t) >= 1.0) ? 0.0 : 2.0 * kPi * (1.0 - std::fabs(t));
  }
  // composite Simpson over the cached even samples (rho is even, so
  // rho-hat(t) = 2 int_0^smax rho(s) cos(st) ds)
  const std::size_t count = cache_.size() - 1;
  const std::size_t pairs = count / 2;
  double acc = cache_[0];
  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t i = 2 * p;
    acc += 4.0 * cache_[i + 1] * std::cos((i + 1) * ds_ * t);
    const double w = (i + 2 == count) ? 1.0 : 2.0;
    acc += w * cache_[i + 2] * std::cos((i + 2) * ds_ * t);
  }
  return 2.0 * acc * ds_ / 3.0;
}

RhoEvaluator make_rho(const RhoSpec& spec, double s_max) {
  return RhoEvaluator(spec, s_max);
}

RhoEvaluator make_rho(const WindowFilterSpec& spec) {
  const double s_max = std::max(64.0, 10.0 + 4.0 * spec.r * spec.lambda);
  return RhoEvaluator(spec.rho, std::min(s_max, 4096.0));
}

double filter_multiplier(const WindowFilterSpec& spec, const RhoEvaluator& rho,
                         double freq) {
  return rho(spec.r * (spec.lambda - freq)) + rho(spec.r * (spec.lambda + freq));
}

EigenfunctionField apply_filter(const EigenfunctionField& field,
                                const WindowFilterSpec& spec) {
  const RhoEvaluator rho = make_rho(spec);
  return apply_filter(field, spec, rho);
}

EigenfunctionField apply_filter(const EigenfunctionField& field,
                                const WindowFilterSpec& spec, const RhoEvaluator& rho) {
  if (!(spec.lambda >= 1.0))
    throw std::invalid_argument("filter center frequency must satisfy lambda >= 1");
  if (spec.r < 1.0 / spec.lambda - 1e-12 || spec.r > field.model.inj + 1e-12)
    throw std::invalid_argument("filter scale r must lie in [1/lambda, inj]");
  EigenfunctionField out;
  out.model = field.model;
  out.kind = FieldKind::Filtered;
  out.grid = field.grid;
  out.freq = spec.lambda;
  out.seed = field.seed;
  out.id = field.id + "_filtered";
  out.expansion.terms.reserve(field.expansion.terms.size());
  for (const auto& t : field.expansion.terms) {
    SpectralTerm nt = t;
    nt.coef *= filter_multiplier(spec, rho, t.freq);
    out.expansion.terms.push_back(std::move(nt));
  }
  out.samples = synthesize(out.model, out.expansion, *out.grid);
  return out;
}

FilterKernelSample filter_kernel(const ManifoldModel& model, const WindowFilterSpec& spec,
                                 const RhoEvaluator& rho, const Point& x, const Point& y,
                                 int k_max) {
  if (!model.is_sphere()) throw std::invalid_argument("filter kernels are sphere-only");
  if (k_max <= 0) {
    // start from the nominal window edge and extend until the tail multiplier
    // is negligible (the window decays slowly in absolute terms)
    k_max = static_cast<int>(std::ceil(spec.lambda + 20.0 / spec.r));
    const int cap = k_max + static_cast<int>(std::ceil((rho.s_max() + 10.0) / spec.r));
    while (k_max < cap) {
      const double f = std::sqrt(static_cast<double>(k_max + 1) * (k_max + model.n));
      if (filter_multiplier(spec, rho, f) <= 1e-12) break;
      ++k_max;
    }
  }
  // tail check: the first omitted multiplier must be negligible
  const double tail_freq = std::sqrt(static_cast<double>(k_max + 1) * (k_max + model.n));
  if (filter_multiplier(spec, rho, tail_freq) > 1e-10)
    throw ResolutionError("kernel truncation tail above tolerance");
  const double t = std::cos(geodesic_distance(model, x, y));
  std::vector<double> leg(static_cast<std::size_t>(k_max) + 1);
  legendre_like_all(model.n, k_max, t, leg);
  double acc = 0;
  for (int k = 0; k <= k_max; ++k) {
    const double freq = std::sqrt(static_cast<double>(k) * (k + model.n - 1));
    const double mult = filter_multiplier(spec, rho, freq);
    if (mult == 0.0) continue;
    acc += mult * harmonic_space_dim(model.n, k) / model.volume *
           leg[static_cast<std::size_t>(k)];
  }
  FilterKernelSample sample;
  sample.x = x;
  sample.y = y;
  sample.value = cplx{acc, 0.0};
  sample.k_max = k_max;
  return sample;
}

EigenfunctionField cluster_project(const EigenfunctionField& field, int k) {
  EigenfunctionField out;
  out.model = field.model;
  out.kind = FieldKind::Filtered;
  out.grid = field.grid;
  out.freq = field.freq;
  out.seed = field.seed;
  out.id = field.id + "_band" + std::to_string(k);
  for (const auto& t : field.expansion.terms) {
    if (t.freq >= static_cast<double>(k) && t.freq < static_cast<double>(k) + 1.0)
      out.expansion.terms.push_back(t);
  }
  if (out.expansion.terms.empty()) {
    out.samples.assign(field.samples.size(), cplx{0.0, 0.0});
  } else {
    out.samples = synthesize(out.model, out.expansion, *out.grid);
  }
  return out;
}

}  // namespace eiglab
