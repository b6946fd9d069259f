#include "eiglab/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace eiglab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double clamp1(double t) { return std::min(1.0, std::max(-1.0, t)); }

double binom_int(int top, int bottom) {
  if (bottom < 0 || bottom > top) return 0.0;
  bottom = std::min(bottom, top - bottom);
  double v = 1.0;
  for (int j = 1; j <= bottom; ++j) v *= static_cast<double>(top - bottom + j) / j;
  return v;
}

double lattice_norm(const std::vector<int>& m) {
  double s = 0;
  for (int v : m) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

bool is_north_pole(const Point& p) {
  if (p.embedded.size() != 3) return false;
  return std::fabs(p.embedded[0]) < 1e-14 && std::fabs(p.embedded[1]) < 1e-14 &&
         p.embedded[2] > 0;
}

// Deterministic standard complex Gaussian (Box-Muller on raw 53-bit uniforms,
// independent of the standard library's distribution implementation).
cplx complex_gaussian(std::mt19937_64& rng) {
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  const double u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  return {mag * std::cos(kTwoPi * u2), mag * std::sin(kTwoPi * u2)};
}

double grid_l2_norm(const QuadratureGrid& grid, const std::vector<cplx>& samples) {
  double s = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += grid.weights[i] * std::norm(samples[i]);
  return std::sqrt(s);
}

}  // namespace

double mode_frequency(const ManifoldModel& model, const Mode& mode) {
  switch (mode.kind) {
    case ModeKind::SphereHarmonic:
    case ModeKind::SphereZonalKernel: {
      const double k = mode.degree;
      return std::sqrt(k * (k + model.n - 1));
    }
    case ModeKind::TorusWave:
      return lattice_norm(mode.lattice);
  }
  return 0;
}

double SpectralExpansion::coef_norm_sq() const {
  double s = 0;
  for (const auto& t : terms) s += std::norm(t.coef);
  return s;
}

double legendre_like_eval(int n, int k, double t) {
  double buf[1];
  if (k == 0) return 1.0;
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  (void)buf;
  legendre_like_all(n, k, t, out);
  return out[static_cast<std::size_t>(k)];
}

void legendre_like_all(int n, int k_max, double t, std::span<double> out) {
  if (k_max < 0) throw std::invalid_argument("degree must be >= 0");
  if (std::fabs(t) > 1.0 + 1e-12) throw std::invalid_argument("|t| > 1");
  t = clamp1(t);
  if (out.size() != static_cast<std::size_t>(k_max) + 1)
    throw std::invalid_argument("output span size mismatch");
  const double alpha = 0.5 * (n - 1);
  out[0] = 1.0;
  if (k_max == 0) return;
  out[1] = t;
  for (int k = 2; k <= k_max; ++k) {
    // normalized so that out[k] = C_k^alpha(t) / C_k^alpha(1), bounded on [-1,1]
    out[k] = (2.0 * (k + alpha - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) /
             (k + 2.0 * alpha - 1.0);
  }
}

double harmonic_space_dim(int n, int k) {
  if (k == 0) return 1.0;
  return binom_int(k + n, n) - binom_int(k + n - 2, n);
}

double assoc_legendre_norm(int k, int m, double ct, double st) {
  if (m < 0 || m > k) throw std::invalid_argument("need 0 <= m <= k");
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int j = 1; j <= m; ++j) pmm *= -std::sqrt((2.0 * j + 1.0) / (2.0 * j)) * st;
  if (k == m) return pmm;
  double p0 = pmm;
  double p1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
  for (int l = m + 2; l <= k; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - static_cast<double>(m) * m) / (4.0 * lm1 * lm1 - 1.0));
    const double p2 = a * (ct * p1 - b * p0);
    p0 = p1;
    p1 = p2;
  }
  return (k == m + 1) ? p1 : p1;
}

namespace {

// Ring-structured synthesis for expansions made of SphereHarmonic terms.
std::vector<cplx> synthesize_sphere_rings(const SpectralExpansion& exp,
                                          const QuadratureGrid& grid) {
  const GridStructure& st = *grid.structure;
  std::vector<cplx> out(grid.size(), cplx{0.0, 0.0});
  // group terms by |m|: (k, signed order, coef)
  struct Entry {
    int k;
    int m;  // signed
    cplx coef;
  };
  std::map<int, std::vector<Entry>> by_abs_m;
  int max_abs_m = 0;
  for (const auto& t : exp.terms) {
    const int am = std::abs(t.mode.order);
    by_abs_m[am].push_back({t.mode.degree, t.mode.order, t.coef});
    max_abs_m = std::max(max_abs_m, am);
  }
  std::vector<cplx> g(static_cast<std::size_t>(2 * max_abs_m + 1));
  for (int row = 0; row < st.rows; ++row) {
    const double theta = st.row_coord[row];
    const double ctv = std::cos(theta);
    const double stv = std::sin(theta);
    std::fill(g.begin(), g.end(), cplx{0.0, 0.0});
    double diag = 1.0 / std::sqrt(4.0 * kPi);  // P-bar_m^m running value
    int diag_m = 0;
    for (const auto& [am, entries] : by_abs_m) {
      while (diag_m < am) {
        ++diag_m;
        diag *= -std::sqrt((2.0 * diag_m + 1.0) / (2.0 * diag_m)) * stv;
      }
      int k_need = 0;
      for (const auto& e : entries) k_need = std::max(k_need, e.k);
      // climb degrees am..k_need once, scatter needed values
      double p0 = diag;
      double p1 = (k_need > am) ? std::sqrt(2.0 * am + 3.0) * ctv * diag : 0.0;
      auto scatter = [&](int deg, double val) {
        for (const auto& e : entries) {
          if (e.k != deg) continue;
          const double sgn = (e.m < 0 && (am & 1)) ? -1.0 : 1.0;
          g[static_cast<std::size_t>(e.m + max_abs_m)] += e.coef * (sgn * val);
        }
      };
      scatter(am, p0);
      if (k_need > am) scatter(am + 1, p1);
      for (int l = am + 2; l <= k_need; ++l) {
        const double a =
            std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(am) * am));
        const double lm1 = l - 1.0;
        const double b =
            std::sqrt((lm1 * lm1 - static_cast<double>(am) * am) / (4.0 * lm1 * lm1 - 1.0));
        const double p2 = a * (ctv * p1 - b * p0);
        p0 = p1;
        p1 = p2;
        scatter(l, p2);
      }
    }
    // f(phi_j) = sum_m g_m e^{i m phi_j}
    const std::size_t base = static_cast<std::size_t>(row) * st.cols;
    for (int col = 0; col < st.cols; ++col) {
      const double phi = st.col0 + col * st.dcol;
      const cplx z{std::cos(phi), std::sin(phi)};
      cplx u = std::conj(cplx{std::cos(max_abs_m * phi), std::sin(max_abs_m * phi)});
      cplx acc{0.0, 0.0};
      for (int m = -max_abs_m; m <= max_abs_m; ++m) {
        const cplx& gm = g[static_cast<std::size_t>(m + max_abs_m)];
        if (gm != cplx{0.0, 0.0}) acc += gm * u;
        u *= z;
      }
      out[base + col] = acc;
    }
  }
  return out;
}

}  // namespace

cplx evaluate_expansion(const ManifoldModel& model, const SpectralExpansion& exp,
                        const Point& x) {
  cplx acc{0.0, 0.0};
  for (const auto& t : exp.terms) {
    switch (t.mode.kind) {
      case ModeKind::SphereHarmonic: {
        const double ct = x.embedded.at(2);
        const double stv = std::hypot(x.embedded[0], x.embedded[1]);
        const double phi = std::atan2(x.embedded[1], x.embedded[0]);
        const int am = std::abs(t.mode.order);
        double val = assoc_legendre_norm(t.mode.degree, am, ct, stv);
        if (t.mode.order < 0 && (am & 1)) val = -val;
        const double mphi = t.mode.order * phi;
        acc += t.coef * val * cplx{std::cos(mphi), std::sin(mphi)};
        break;
      }
      case ModeKind::SphereZonalKernel: {
        const double d = geodesic_distance(model, x, t.mode.pole);
        const double scale = std::sqrt(harmonic_space_dim(model.n, t.mode.degree) / model.volume);
        acc += t.coef * scale * legendre_like_eval(model.n, t.mode.degree, std::cos(d));
        break;
      }
      case ModeKind::TorusWave: {
        double dot = 0;
        for (std::size_t i = 0; i < t.mode.lattice.size(); ++i)
          dot += t.mode.lattice[i] * x.angles.at(i);
        const double amp = std::pow(kTwoPi, -0.5 * model.n);
        acc += t.coef * amp * cplx{std::cos(dot), std::sin(dot)};
        break;
      }
    }
  }
  return acc;
}

std::vector<cplx> synthesize(const ManifoldModel& model, const SpectralExpansion& exp,
                             const QuadratureGrid& grid) {
  bool all_harmonic = !exp.terms.empty();
  for (const auto& t : exp.terms)
    if (t.mode.kind != ModeKind::SphereHarmonic) all_harmonic = false;
  if (all_harmonic && grid.structure && model.is_sphere())
    return synthesize_sphere_rings(exp, grid);

  // Zonal kernel about the north pole only depends on the ring.
  if (exp.terms.size() == 1 && exp.terms[0].mode.kind == ModeKind::SphereZonalKernel &&
      grid.structure && is_north_pole(exp.terms[0].mode.pole)) {
    const auto& t = exp.terms[0];
    const GridStructure& st = *grid.structure;
    const double scale = std::sqrt(harmonic_space_dim(model.n, t.mode.degree) / model.volume);
    std::vector<cplx> out(grid.size());
    for (int row = 0; row < st.rows; ++row) {
      const cplx v = t.coef * scale *
                     legendre_like_eval(model.n, t.mode.degree, std::cos(st.row_coord[row]));
      const std::size_t base = static_cast<std::size_t>(row) * st.cols;
      for (int col = 0; col < st.cols; ++col) out[base + col] = v;
    }
    return out;
  }

  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = evaluate_expansion(model, exp, grid.nodes[i]);
  return out;
}

FieldEvaluator::FieldEvaluator(const EigenfunctionField& field) : field_(field) {
  if (field.expansion.terms.size() == 1) {
    const auto& t = field.expansion.terms[0];
    if (t.mode.kind == ModeKind::SphereZonalKernel) {
      zonal_profile_ = true;
      pole_ = t.mode.pole;
      const int k = t.mode.degree;
      const int count = std::max(4096, 64 * k);
      profile_.resize(static_cast<std::size_t>(count) + 1);
      for (int i = 0; i <= count; ++i) {
        const double d = kPi * i / count;
        profile_[static_cast<std::size_t>(i)] =
            legendre_like_eval(field.model.n, k, std::cos(d));
      }
      scale_ = std::sqrt(harmonic_space_dim(field.model.n, k) / field.model.volume);
    } else if (t.mode.kind == ModeKind::SphereHarmonic && t.mode.order == t.mode.degree) {
      highest_weight_ = true;
      hw_degree_ = t.mode.degree;
      hw_amp_ = highest_weight_amplitude(hw_degree_) * ((hw_degree_ & 1) ? -1.0 : 1.0);
    }
  }
}

cplx FieldEvaluator::operator()(const Point& x) const {
  if (zonal_profile_) {
    const auto& t = field_.expansion.terms[0];
    const double d = geodesic_distance(field_.model, x, pole_);
    const double pos = d / kPi * (profile_.size() - 1);
    const std::size_t i = std::min(profile_.size() - 2, static_cast<std::size_t>(pos));
    const double f = pos - static_cast<double>(i);
    // cubic Catmull-Rom
    const double pm1 = profile_[i > 0 ? i - 1 : 0];
    const double p0 = profile_[i];
    const double p1 = profile_[i + 1];
    const double p2 = profile_[std::min(profile_.size() - 1, i + 2)];
    const double v =
        p0 + 0.5 * f * (p1 - pm1 + f * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                                        f * (3.0 * (p0 - p1) + p2 - pm1)));
    return t.coef * (scale_ * v);
  }
  if (highest_weight_) {
    const auto& t = field_.expansion.terms[0];
    const double stv = std::hypot(x.embedded[0], x.embedded[1]);
    const double phi = std::atan2(x.embedded[1], x.embedded[0]);
    const double mphi = hw_degree_ * phi;
    return t.coef * hw_amp_ * std::pow(stv, hw_degree_) *
           cplx{std::cos(mphi), std::sin(mphi)};
  }
  return evaluate_expansion(field_.model, field_.expansion, x);
}

EigenfunctionField zonal_field(const ManifoldModel& model, int k, const Point& pole,
                               std::shared_ptr<const QuadratureGrid> grid) {
  if (!model.is_sphere()) throw std::invalid_argument("zonal fields are sphere-only");
  if (k < 0) throw std::invalid_argument("degree must be >= 0");
  if (grid->exactness_degree < 2 * k)
    throw ResolutionError("grid resolution too low for requested degree");
  EigenfunctionField f;
  f.model = model;
  f.kind = FieldKind::Zonal;
  f.grid = grid;
  Mode mode;
  mode.kind = ModeKind::SphereZonalKernel;
  mode.degree = k;
  mode.pole = pole;
  const double freq = mode_frequency(model, mode);
  f.expansion.terms.push_back({std::move(mode), cplx{1.0, 0.0}, freq});
  f.freq = freq;
  f.samples = synthesize(model, f.expansion, *grid);
  f.id = "zonal_k" + std::to_string(k);
  return f;
}

double highest_weight_amplitude(int k) {
  double s = 0;  // log of prod (2j+1)/(2j)
  for (int j = 1; j <= k; ++j) s += std::log((2.0 * j + 1.0) / (2.0 * j));
  return std::exp(0.5 * (s - std::log(4.0 * kPi)));
}

EigenfunctionField highest_weight_field(const ManifoldModel& model, int k,
                                        std::shared_ptr<const QuadratureGrid> grid) {
  if (!model.is_sphere() || model.n != 2)
    throw std::invalid_argument("highest weight fields implemented on S^2 only");
  if (k < 1) throw std::invalid_argument("degree must be >= 1");
  if (grid->exactness_degree < 2 * k)
    throw ResolutionError("grid resolution too low for requested degree");
  EigenfunctionField f;
  f.model = model;
  f.kind = FieldKind::HighestWeight;
  f.grid = grid;
  Mode mode;
  mode.kind = ModeKind::SphereHarmonic;
  mode.degree = k;
  mode.order = k;
  const double freq = mode_frequency(model, mode);
  f.expansion.terms.push_back({std::move(mode), cplx{1.0, 0.0}, freq});
  f.freq = freq;
  f.samples = synthesize(model, f.expansion, *grid);
  // pin the L^2 norm to 1 exactly by quadrature
  const double nrm = grid_l2_norm(*grid, f.samples);
  f.expansion.terms[0].coef /= nrm;
  for (auto& s : f.samples) s /= nrm;
  f.id = "hw_k" + std::to_string(k);
  return f;
}

EigenfunctionField torus_wave(const ManifoldModel& model, const std::vector<int>& m,
                              std::shared_ptr<const QuadratureGrid> grid) {
  if (model.is_sphere()) throw std::invalid_argument("torus waves need a torus model");
  if (static_cast<int>(m.size()) != model.n)
    throw std::invalid_argument("lattice vector dimension mismatch");
  EigenfunctionField f;
  f.model = model;
  f.kind = FieldKind::TorusWave;
  f.grid = grid;
  Mode mode;
  mode.kind = ModeKind::TorusWave;
  mode.lattice = m;
  const double freq = mode_frequency(model, mode);
  f.expansion.terms.push_back({std::move(mode), cplx{1.0, 0.0}, freq});
  f.freq = freq;
  f.samples = synthesize(model, f.expansion, *grid);
  f.id = "torus";
  for (int v : m) f.id += "_" + std::to_string(v);
  return f;
}

EigenfunctionField random_window_field(const ManifoldModel& model, double lambda,
                                       double width, std::uint64_t seed,
                                       std::shared_ptr<const QuadratureGrid> grid) {
  if (!(width > 0)) throw std::invalid_argument("window width must be positive");
  EigenfunctionField f;
  f.model = model;
  f.kind = FieldKind::RandomWindow;
  f.grid = grid;
  f.seed = seed;
  std::vector<Mode> modes;
  if (model.is_sphere()) {
    if (model.n != 2)
      throw std::invalid_argument("random sphere windows implemented on S^2 only");
    for (int k = 0;; ++k) {
      const double lk = std::sqrt(static_cast<double>(k) * (k + 1));
      if (lk >= lambda + width) break;
      if (lk < lambda) continue;
      if (grid->exactness_degree < 2 * k)
        throw ResolutionError("grid resolution too low for window degrees");
      for (int m = -k; m <= k; ++m) {
        Mode mode;
        mode.kind = ModeKind::SphereHarmonic;
        mode.degree = k;
        mode.order = m;
        modes.push_back(std::move(mode));
      }
    }
  } else {
    const int bound = static_cast<int>(std::floor(lambda + width)) + 1;
    if (model.n != 2) throw std::invalid_argument("random torus windows implemented on T^2 only");
    for (int m1 = -bound; m1 <= bound; ++m1) {
      for (int m2 = -bound; m2 <= bound; ++m2) {
        const double lk = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
        if (lk < lambda || lk >= lambda + width) continue;
        Mode mode;
        mode.kind = ModeKind::TorusWave;
        mode.lattice = {m1, m2};
        modes.push_back(std::move(mode));
      }
    }
  }
  if (modes.empty()) throw std::invalid_argument("spectral window contains no modes");
  std::mt19937_64 rng(seed);
  double nrm2 = 0;
  for (auto& mode : modes) {
    const cplx c = complex_gaussian(rng);
    nrm2 += std::norm(c);
    f.expansion.terms.push_back({std::move(mode), c, 0.0});
  }
  const double inv = 1.0 / std::sqrt(nrm2);
  for (auto& t : f.expansion.terms) {
    t.coef *= inv;
    t.freq = mode_frequency(model, t.mode);
  }
  f.freq = lambda;
  f.samples = synthesize(model, f.expansion, *grid);
  f.id = "rw_l" + std::to_string(static_cast<long long>(std::llround(lambda * 100))) +
         "_s" + std::to_string(seed);
  return f;
}

DarbouxReport darboux_compare(int n, int k, const std::vector<double>& d_values) {
  if (d_values.empty()) throw std::invalid_argument("need at least one distance");
  const double lambda = std::sqrt(static_cast<double>(k) * (k + n - 1));
  for (double d : d_values) {
    if (d < 1.0 / lambda - 1e-12 || d > kPi - 1.0 / lambda + 1e-12)
      throw std::invalid_argument("distance outside [1/lambda, pi - 1/lambda]");
  }
  const double nk = 0.5 * (2.0 * k + n - 1.0);
  const double gamma = -0.25 * (n - 1.0) * kPi;
  const double scale = std::sqrt(harmonic_space_dim(n, k) / sphere_surface_area(n));
  const double half = 0.5 * (n - 1.0);
  std::vector<double> y(d_values.size()), c(d_values.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < d_values.size(); ++i) {
    const double d = d_values[i];
    // (sin d)^{(n-1)/2} envelope: matches d^{(n-1)/2} as d -> 0 and keeps the
    // residual at the stated O(1/(lambda d)) size across the whole range
    y[i] = scale * legendre_like_eval(n, k, std::cos(d)) * std::pow(std::sin(d), half);
    c[i] = std::cos(nk * d + gamma);
    num += y[i] * c[i];
    den += c[i] * c[i];
  }
  if (!(den > 0)) throw std::invalid_argument("degenerate cosine model on sample set");
  const double amp = num / den;
  DarbouxReport rep;
  rep.k = k;
  rep.fitted_amplitude = amp;
  rep.d_min = *std::min_element(d_values.begin(), d_values.end());
  rep.d_max = *std::max_element(d_values.begin(), d_values.end());
  for (std::size_t i = 0; i < d_values.size(); ++i) {
    const double dev = std::fabs(y[i] - amp * c[i]) / std::fabs(amp) * lambda * d_values[i];
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
  }
  return rep;
}

}  // namespace eiglab
