#pragma once

#include <memory>
#include <vector>

#include "eiglab/harmonics.hpp"

namespace eiglab {

enum class RhoKind { SmoothBump, Fejer };

struct RhoSpec {
  RhoKind kind = RhoKind::SmoothBump;
  // SmoothBump: rho(s) = |phi-hat(s)|^2 / |phi-hat(0)|^2 with
  // phi(u) = exp(-sharpness / (1 - (u/halfwidth)^2)) on |u| < halfwidth,
  // so rho-hat is proportional to phi*phi and supported in [-2*halfwidth, 2*halfwidth].
  double bump_halfwidth = 0.5;
  double bump_sharpness = 2.0;
};

/// Evaluator for the Schwartz window rho (rho >= 0, rho(0) = 1,
/// supp rho-hat in [-1, 1]) and its numerically computed Fourier transform.
class RhoEvaluator {
 public:
  RhoEvaluator(const RhoSpec& spec, double s_max);

  double operator()(double s) const;
  /// rho-hat(t) = integral rho(s) e^{-ist} ds over the cached range.
  double hat(double t) const;
  RhoKind kind() const { return spec_.kind; }
  double s_max() const { return s_max_; }

 private:
  RhoSpec spec_;
  double s_max_ = 0;
  double ds_ = 0;
  std::vector<double> cache_;  // rho on uniform grid over [0, s_max]
};

struct WindowFilterSpec {
  RhoSpec rho;
  double lambda = 1.0;  // center frequency
  double r = 1.0;       // scale, 1/lambda <= r <= inj
};

/// Builds the window evaluator; cache range covers arguments up to
/// max(64, 10 + 4 r lambda).
RhoEvaluator make_rho(const WindowFilterSpec& spec);
RhoEvaluator make_rho(const RhoSpec& spec, double s_max = 64.0);

/// T_{lambda,r} f: multiplies each expansion coefficient by
/// rho(r (lambda - lambda_j)) + rho(r (lambda + lambda_j)) and re-synthesizes.
EigenfunctionField apply_filter(const EigenfunctionField& field,
                                const WindowFilterSpec& spec);
EigenfunctionField apply_filter(const EigenfunctionField& field,
                                const WindowFilterSpec& spec, const RhoEvaluator& rho);

double filter_multiplier(const WindowFilterSpec& spec, const RhoEvaluator& rho,
                         double freq);

struct FilterKernelSample {
  Point x, y;
  cplx value;
  int k_max = 0;
};

/// Kernel of T_{lambda,r} on the sphere via the addition theorem:
/// K(x,y) = sum_k [rho(r(lambda-lambda_k)) + rho(r(lambda+lambda_k))]
///          (d_k/|S^n|) G_k(cos d(x,y)).
/// k_max = 0 selects the default truncation lambda + 20/r.
FilterKernelSample filter_kernel(const ManifoldModel& model, const WindowFilterSpec& spec,
                                 const RhoEvaluator& rho, const Point& x, const Point& y,
                                 int k_max = 0);

/// Restrict the expansion to the unit frequency band [k, k+1).
EigenfunctionField cluster_project(const EigenfunctionField& field, int k);

}  // namespace eiglab
