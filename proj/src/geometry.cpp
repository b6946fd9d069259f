#include "eiglab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eiglab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0) y += kTwoPi;
  return y;
}

double clamp1(double t) { return std::min(1.0, std::max(-1.0, t)); }

}  // namespace

double sphere_surface_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

ManifoldModel ManifoldModel::sphere(int n) {
  if (n < 2) throw std::invalid_argument("manifold dimension must be >= 2");
  return ManifoldModel{ManifoldKind::RoundSphere, n, sphere_surface_area(n), kPi};
}

ManifoldModel ManifoldModel::torus(int n) {
  if (n < 2) throw std::invalid_argument("manifold dimension must be >= 2");
  return ManifoldModel{ManifoldKind::FlatTorus, n, std::pow(kTwoPi, n), kPi};
}

Point Point::sphere(double theta, double phi) {
  if (theta < -1e-12 || theta > kPi + 1e-12)
    throw std::invalid_argument("colatitude outside [0, pi]");
  theta = std::min(kPi, std::max(0.0, theta));
  phi = wrap_angle(phi);
  Point p;
  p.angles = {theta, phi};
  const double st = std::sin(theta);
  p.embedded = {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  return p;
}

Point Point::sphere_embedded(std::vector<double> x) {
  double nrm2 = 0;
  for (double v : x) nrm2 += v * v;
  const double nrm = std::sqrt(nrm2);
  if (!(nrm > 1e-14)) throw std::invalid_argument("cannot normalize near-zero vector");
  for (double& v : x) v /= nrm;
  Point p;
  if (x.size() == 3) {
    const double theta = std::acos(clamp1(x[2]));
    const double phi = wrap_angle(std::atan2(x[1], x[0]));
    p.angles = {theta, phi};
  } else {
    p.angles = {std::acos(clamp1(x.back()))};
  }
  p.embedded = std::move(x);
  return p;
}

Point Point::torus(std::vector<double> coords) {
  Point p;
  for (double& c : coords) c = wrap_angle(c);
  p.angles = std::move(coords);
  return p;
}

Point Point::north_pole(int n) {
  std::vector<double> x(static_cast<std::size_t>(n) + 1, 0.0);
  x.back() = 1.0;
  return sphere_embedded(std::move(x));
}

double geodesic_distance(const ManifoldModel& model, const Point& x, const Point& y) {
  if (model.is_sphere()) {
    const std::size_t dim = static_cast<std::size_t>(model.n) + 1;
    if (x.embedded.size() != dim || y.embedded.size() != dim)
      throw std::invalid_argument("point dimension does not match model");
    double dot = 0;
    for (std::size_t i = 0; i < dim; ++i) dot += x.embedded[i] * y.embedded[i];
    return std::acos(clamp1(dot));
  }
  const std::size_t dim = static_cast<std::size_t>(model.n);
  if (x.angles.size() != dim || y.angles.size() != dim)
    throw std::invalid_argument("point dimension does not match model");
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    double d = std::fabs(x.angles[i] - y.angles[i]);
    d = std::min(d, kTwoPi - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double QuadratureGrid::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("need at least one quadrature node");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

QuadratureGrid build_grid(const ManifoldModel& model, int resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  QuadratureGrid grid;
  grid.model = model;
  if (model.is_sphere()) {
    if (model.n != 2)
      throw std::invalid_argument("full sphere grids supported for n = 2 only");
    const int rows = resolution;
    const int cols = 2 * resolution;
    std::vector<double> t, wt;
    gauss_legendre(rows, t, wt);
    GridStructure st;
    st.rows = rows;
    st.cols = cols;
    st.col0 = 0.0;
    st.dcol = kTwoPi / cols;
    st.row_coord.resize(rows);
    grid.nodes.reserve(static_cast<std::size_t>(rows) * cols);
    grid.weights.reserve(grid.nodes.capacity());
    for (int i = 0; i < rows; ++i) {
      // descending t gives ascending theta
      const double theta = std::acos(t[rows - 1 - i]);
      st.row_coord[i] = theta;
      const double wrow = wt[rows - 1 - i] * st.dcol;
      for (int j = 0; j < cols; ++j) {
        grid.nodes.push_back(Point::sphere(theta, st.col0 + j * st.dcol));
        grid.weights.push_back(wrow);
      }
    }
    grid.exactness_degree = 2 * resolution - 1;
    grid.spacing = kPi / resolution;
    grid.structure = std::move(st);
    return grid;
  }
  // Flat torus: uniform product grid.
  const int n = model.n;
  const double h = kTwoPi / resolution;
  const double w = std::pow(h, n);
  std::size_t count = 1;
  for (int d = 0; d < n; ++d) count *= static_cast<std::size_t>(resolution);
  if (count > 64'000'000) throw std::invalid_argument("torus grid too large");
  grid.nodes.reserve(count);
  grid.weights.assign(count, w);
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> coords(n);
    for (int d = 0; d < n; ++d) coords[d] = idx[d] * h;
    grid.nodes.push_back(Point::torus(std::move(coords)));
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < resolution) break;
      idx[d] = 0;
    }
  }
  grid.exactness_degree = resolution - 1;  // trigonometric degree per axis
  grid.spacing = h;
  if (n == 2) {
    GridStructure st;
    st.rows = resolution;
    st.cols = resolution;
    st.col0 = 0.0;
    st.dcol = h;
    st.row_coord.resize(resolution);
    for (int i = 0; i < resolution; ++i) st.row_coord[i] = i * h;
    grid.structure = std::move(st);
  }
  return grid;
}

QuadratureGrid build_zonal_grid(const ManifoldModel& model, int resolution) {
  if (!model.is_sphere()) throw std::invalid_argument("zonal grids are sphere-only");
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  QuadratureGrid grid;
  grid.model = model;
  std::vector<double> t, wt;
  gauss_legendre(resolution, t, wt);
  const double ring = sphere_surface_area(model.n - 1);
  const int nm1 = model.n - 1;
  grid.nodes.reserve(resolution);
  grid.weights.reserve(resolution);
  for (int i = resolution - 1; i >= 0; --i) {
    const double theta = std::acos(t[i]);
    const double st = std::sin(theta);
    std::vector<double> x(static_cast<std::size_t>(model.n) + 1, 0.0);
    x[0] = st;
    x.back() = t[i];
    grid.nodes.push_back(Point::sphere_embedded(std::move(x)));
    // dV = |S^{n-1}| (sin theta)^{n-1} d theta = |S^{n-1}| (1-t^2)^{(n-2)/2} dt
    grid.weights.push_back(ring * wt[i] * std::pow(std::max(0.0, 1.0 - t[i] * t[i]),
                                                   0.5 * (nm1 - 1)));
  }
  grid.exactness_degree = resolution - 1;
  grid.spacing = kPi / resolution;
  return grid;
}

double tube_distance(const Point& x, const TubeSpec& tube) {
  if (x.embedded.size() != 3)
    throw std::invalid_argument("tubes are supported on S^2 only");
  double dot = 0;
  for (int i = 0; i < 3; ++i) dot += x.embedded[i] * tube.axis[i];
  return std::asin(std::min(1.0, std::fabs(dot)));
}

QuadratureGrid restrict_to_ball(const QuadratureGrid& grid, const BallSpec& ball) {
  if (!(ball.radius > 0) || ball.radius > grid.model.inj + 1e-12)
    throw std::invalid_argument("ball radius must lie in (0, inj]");
  QuadratureGrid out;
  out.model = grid.model;
  out.exactness_degree = 0;
  out.spacing = grid.spacing;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (geodesic_distance(grid.model, ball.center, grid.nodes[i]) <= ball.radius) {
      out.nodes.push_back(grid.nodes[i]);
      out.weights.push_back(grid.weights[i]);
    }
  }
  if (out.nodes.empty())
    throw ResolutionError("ball radius below grid resolution: empty restriction");
  return out;
}

QuadratureGrid restrict_to_tube(const QuadratureGrid& grid, const TubeSpec& tube) {
  if (!grid.model.is_sphere() || grid.model.n != 2)
    throw std::invalid_argument("tube restriction is supported on S^2 only");
  if (!(tube.width > 0) || tube.width > grid.model.inj)
    throw std::invalid_argument("tube width must lie in (0, inj]");
  QuadratureGrid out;
  out.model = grid.model;
  out.exactness_degree = 0;
  out.spacing = grid.spacing;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (tube_distance(grid.nodes[i], tube) <= tube.width) {
      out.nodes.push_back(grid.nodes[i]);
      out.weights.push_back(grid.weights[i]);
    }
  }
  if (out.nodes.empty())
    throw ResolutionError("tube width below grid resolution: empty restriction");
  return out;
}

std::vector<Point> generate_centers(const ManifoldModel& model, double spacing,
                                    std::size_t max_count) {
  if (!(spacing > 0) || spacing >= model.inj + 1e-12)
    throw std::invalid_argument("spacing must lie in (0, inj)");
  std::vector<Point> centers;
  if (model.is_sphere()) {
    if (model.n != 2)
      throw std::invalid_argument("center generation supported for S^2 only");
    // Fibonacci lattice; the 3.2 factor keeps the covering radius below
    // `spacing` (verified empirically in the covering tests).
    const double raw = std::ceil((3.2 / spacing) * (3.2 / spacing));
    const std::size_t count = static_cast<std::size_t>(std::max(2.0, raw));
    if (count > max_count)
      throw std::invalid_argument("center count exceeds configured cap");
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    centers.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
      const double phi = kTwoPi * std::fmod(static_cast<double>(i) / golden, 1.0);
      const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
      centers.push_back(
          Point::sphere_embedded({st * std::cos(phi), st * std::sin(phi), z}));
    }
    return centers;
  }
  const int n = model.n;
  const int m = static_cast<int>(std::ceil(kTwoPi / spacing));
  double total = std::pow(static_cast<double>(m), n);
  if (total > static_cast<double>(max_count))
    throw std::invalid_argument("center count exceeds configured cap");
  const double h = kTwoPi / m;
  std::vector<int> idx(n, 0);
  const std::size_t count = static_cast<std::size_t>(total);
  centers.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> coords(n);
    for (int d = 0; d < n; ++d) coords[d] = idx[d] * h;
    centers.push_back(Point::torus(std::move(coords)));
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < m) break;
      idx[d] = 0;
    }
  }
  return centers;
}

}  // namespace eiglab
