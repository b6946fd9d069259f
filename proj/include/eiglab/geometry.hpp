#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eiglab {

/// Thrown when a requested measurement cannot be resolved on the current
/// quadrature grid (empty ball restriction, truncation tail too large, ...).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ManifoldKind { RoundSphere, FlatTorus };

/// Surface measure of the unit n-sphere embedded in R^{n+1}.
double sphere_surface_area(int n);

struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::RoundSphere;
  int n = 2;          // intrinsic dimension, >= 2
  double volume = 0;  // |M|
  double inj = 0;     // injectivity radius

  static ManifoldModel sphere(int n);
  static ManifoldModel torus(int n);
  bool is_sphere() const { return kind == ManifoldKind::RoundSphere; }
};

/// A point on the model manifold.
///
/// Sphere points carry the embedded unit vector in R^{n+1}; for n = 2 the
/// angles are (colatitude, azimuth).  Torus points are coordinates in
/// [0, 2pi)^n.
struct Point {
  std::vector<double> angles;
  std::vector<double> embedded;

  static Point sphere(double theta, double phi);
  static Point sphere_embedded(std::vector<double> x);
  static Point torus(std::vector<double> coords);
  static Point north_pole(int n);

  double theta() const { return angles.at(0); }
  double phi() const { return angles.at(1); }
};

double geodesic_distance(const ManifoldModel& model, const Point& x, const Point& y);

/// Row/column layout of a product grid (sphere: colatitude rings x uniform
/// azimuth; torus n=2: x1 rows x x2 columns).  Node index = row*cols + col.
struct GridStructure {
  int rows = 0;
  int cols = 0;
  std::vector<double> row_coord;  // sphere: theta per ring; torus: x1 per row
  double col0 = 0.0;
  double dcol = 0.0;
};

struct QuadratureGrid {
  ManifoldModel model;
  std::vector<Point> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
  double spacing = 0.0;  // nominal max node gap
  std::optional<GridStructure> structure;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Sphere n=2: Gauss-Legendre in cos(theta) x uniform azimuth, exact for
/// spherical polynomials of degree <= 2*resolution - 1.
/// Torus: uniform product grid with equal weights.
QuadratureGrid build_grid(const ManifoldModel& model, int resolution);

/// 1-D colatitude grid for axially symmetric integrands on S^n, weight
/// |S^{n-1}| (sin theta)^{n-1} d theta.
QuadratureGrid build_zonal_grid(const ManifoldModel& model, int resolution);

struct BallSpec {
  Point center;
  double radius = 0;
};

/// Tube around the great circle orthogonal to `axis` on S^2.
struct TubeSpec {
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  double width = 0;

  static TubeSpec equatorial(double width) { return TubeSpec{{0.0, 0.0, 1.0}, width}; }
};

/// Geodesic distance from x to the tube's central great circle.
double tube_distance(const Point& x, const TubeSpec& tube);

QuadratureGrid restrict_to_ball(const QuadratureGrid& grid, const BallSpec& ball);
QuadratureGrid restrict_to_tube(const QuadratureGrid& grid, const TubeSpec& tube);

/// Deterministic center set such that every point of M lies within `spacing`
/// of some center.  Sphere: Fibonacci lattice; torus: uniform lattice.
std::vector<Point> generate_centers(const ManifoldModel& model, double spacing,
                                    std::size_t max_count = 8'000'000);

}  // namespace eiglab
