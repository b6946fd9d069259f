#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "eiglab/geometry.hpp"

namespace eiglab {

using cplx = std::complex<double>;

enum class ModeKind { SphereHarmonic, SphereZonalKernel, TorusWave };

/// One basis element of an eigenspace.
///
/// SphereHarmonic: fully normalized Y_k^m on S^2 (degree, order).
/// SphereZonalKernel: unit-norm reproducing kernel of the degree-k eigenspace
///   about `pole` (a rotate of Y_k^0).
/// TorusWave: (2pi)^{-n/2} exp(i m.x) for a lattice vector m.
struct Mode {
  ModeKind kind = ModeKind::SphereHarmonic;
  int degree = 0;
  int order = 0;
  Point pole;
  std::vector<int> lattice;
};

double mode_frequency(const ManifoldModel& model, const Mode& mode);

struct SpectralTerm {
  Mode mode;
  cplx coef;
  double freq = 0;
};

struct SpectralExpansion {
  std::vector<SpectralTerm> terms;
  double coef_norm_sq() const;
};

enum class FieldKind { Zonal, HighestWeight, TorusWave, RandomWindow, Filtered };

/// A sampled (spectral-window) eigenfunction with its expansion metadata.
struct EigenfunctionField {
  ManifoldModel model;
  SpectralExpansion expansion;
  double freq = 0;  // nominal frequency lambda
  FieldKind kind = FieldKind::Zonal;
  std::shared_ptr<const QuadratureGrid> grid;
  std::vector<cplx> samples;
  std::uint64_t seed = 0;
  std::string id;
};

/// Normalized Gegenbauer kernel C_k^{(n-1)/2}(t) / C_k^{(n-1)/2}(1);
/// equals Legendre P_k(t) for n = 2.
double legendre_like_eval(int n, int k, double t);

/// All degrees 0..k_max at once (out.size() must be k_max + 1).
void legendre_like_all(int n, int k_max, double t, std::span<double> out);

/// Dimension d_k of the space of degree-k spherical harmonics on S^n.
double harmonic_space_dim(int n, int k);

/// Fully normalized associated Legendre P-bar_k^m(cos theta) such that
/// P-bar_k^m e^{im phi} has unit L^2(S^2) norm.  Requires 0 <= m <= k.
double assoc_legendre_norm(int k, int m, double cos_theta, double sin_theta);

std::vector<cplx> synthesize(const ManifoldModel& model, const SpectralExpansion& exp,
                             const QuadratureGrid& grid);

cplx evaluate_expansion(const ManifoldModel& model, const SpectralExpansion& exp,
                        const Point& x);

/// O(1)-per-point evaluator for the common field kinds (zonal fields get a
/// cached distance profile); falls back to the term sum otherwise.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const EigenfunctionField& field);
  cplx operator()(const Point& x) const;

 private:
  const EigenfunctionField& field_;
  bool zonal_profile_ = false;
  bool highest_weight_ = false;
  // zonal profile: |samples| as a function of cos(distance to pole)
  Point pole_;
  double scale_ = 0;
  std::vector<double> profile_;  // values on uniform t-grid over [-1, 1]
  double hw_amp_ = 0;
  int hw_degree_ = 0;
};

EigenfunctionField zonal_field(const ManifoldModel& model, int k, const Point& pole,
                               std::shared_ptr<const QuadratureGrid> grid);

EigenfunctionField highest_weight_field(const ManifoldModel& model, int k,
                                        std::shared_ptr<const QuadratureGrid> grid);

EigenfunctionField torus_wave(const ManifoldModel& model, const std::vector<int>& m,
                              std::shared_ptr<const QuadratureGrid> grid);

EigenfunctionField random_window_field(const ManifoldModel& model, double lambda,
                                       double width, std::uint64_t seed,
                                       std::shared_ptr<const QuadratureGrid> grid);

/// Peak modulus c_k of the unit-norm highest weight harmonic (closed form).
double highest_weight_amplitude(int k);

struct DarbouxReport {
  int k = 0;
  double max_abs_deviation = 0;  // max |Z d^{(n-1)/2}/A - cos(N_k d + gamma)| * (lambda d)
  double d_min = 0;
  double d_max = 0;
  double fitted_amplitude = 0;
};

/// Compares the zonal profile against the oscillatory cosine model
/// cos(N_k d + gamma), N_k = (2k+n-1)/2, gamma = -(n-1)pi/4.
DarbouxReport darboux_compare(int n, int k, const std::vector<double>& d_values);

}  // namespace eiglab
