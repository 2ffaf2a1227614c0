#pragma once

// Radial-angular mesh on the unit ball and scalar fields on it.
//
// N = 2: polar cells over theta in [0, 2pi), periodic.
// N >= 3: axisymmetric reduction, theta in (0, pi) is the angle from the
// first coordinate axis; a mesh point (r, theta) embeds as
// (r cos theta, r sin theta, 0, ..., 0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ellsym/geometry.hpp"

namespace ellsym {

class Grid {
 public:
  Grid() = default;
  Grid(int dim, int n_r, int n_theta) : dim_(dim), n_r_(n_r), n_theta_(n_theta) {
    if (dim < 2) throw std::invalid_argument("Grid: dimension must be >= 2");
    if (n_r < 16) throw std::invalid_argument("Grid: n_r must be >= 16");
    if (n_theta < 8) throw std::invalid_argument("Grid: n_theta must be >= 8");
    if (dim == 2 && n_theta % 2 != 0) {
      throw std::invalid_argument("Grid: n_theta must be even for the polar grid");
    }
  }

  int dim() const { return dim_; }
  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_theta_; }
  bool periodic() const { return dim_ == 2; }

  double dr() const { return 1.0 / n_r_; }
  double theta_span() const { return periodic() ? 2.0 * std::numbers::pi : std::numbers::pi; }
  double dtheta() const { return theta_span() / n_theta_; }

  double r(int i) const { return (i + 0.5) / n_r_; }
  double r_face(int i) const { return static_cast<double>(i) / n_r_; }  // face below cell i
  double theta(int j) const { return (j + 0.5) * dtheta(); }
  double theta_face(int j) const { return j * dtheta(); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta_ + j; }

  Point point(int i, int j) const {
    Point x(static_cast<std::size_t>(dim_));
    x[0] = r(i) * std::cos(theta(j));
    x[1] = r(i) * std::sin(theta(j));
    return x;
  }

  /// (r, theta) coordinates of an arbitrary point of R^N in this mesh's chart.
  std::pair<double, double> polar(const Point& x) const {
    const double rr = x.norm();
    if (periodic()) {
      double th = std::atan2(x[1], x[0]);
      if (th < 0.0) th += 2.0 * std::numbers::pi;
      return {rr, th};
    }
    double transverse2 = 0.0;
    for (std::size_t k = 1; k < x.dim(); ++k) transverse2 += x[k] * x[k];
    return {rr, std::atan2(std::sqrt(transverse2), x[0])};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_r_ == b.n_r_ && a.n_theta_ == b.n_theta_;
  }

 private:
  int dim_ = 2;
  int n_r_ = 16;
  int n_theta_ = 8;
};

/// Scalar function on a Grid at one time instant.
struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  Field() = default;
  explicit Field(const Grid& g, double t = 0.0) : grid(g), values(g.size(), 0.0), time(t) {}
  Field(const Grid& g, std::vector<double> v, double t) : grid(g), values(std::move(v)), time(t) {
    if (values.size() != grid.size()) throw std::invalid_argument("Field: value count does not match grid");
  }

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// Sample f(point) at every mesh cell center.
template <class F>
Field sample(const Grid& g, F&& f, double t = 0.0) {
  Field out(g, t);
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) out.at(i, j) = f(g.point(i, j));
  return out;
}

/// Cell-volume weights (up to a constant angular factor) for discrete L2 norms.
inline std::vector<double> cell_volumes(const Grid& g);

/// Weighted discrete L2 norm consistent with the finite-volume operator.
inline double l2_norm(const Field& f) {
  const auto vol = cell_volumes(f.grid);
  double s = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) s += vol[k] * f.values[k] * f.values[k];
  return std::sqrt(s);
}

namespace detail {

/// Integral of sin^k over [a, b].
inline double sin_power_integral(int k, double a, double b) {
  if (k == 0) return b - a;
  if (k == 1) return std::cos(a) - std::cos(b);
  auto term = [k](double x) { return -std::pow(std::sin(x), k - 1) * std::cos(x) / k; };
  return term(b) - term(a) + (k - 1.0) / k * sin_power_integral(k - 2, a, b);
}

}  // namespace detail

inline std::vector<double> cell_volumes(const Grid& g) {
  const int n = g.dim();
  std::vector<double> vol(g.size());
  for (int i = 0; i < g.n_r(); ++i) {
    const double rv = (std::pow(g.r_face(i + 1), n) - std::pow(g.r_face(i), n)) / n;
    for (int j = 0; j < g.n_theta(); ++j) {
      const double tv = detail::sin_power_integral(n - 2, g.theta_face(j), g.theta_face(j + 1));
      vol[g.index(i, j)] = rv * tv;
    }
  }
  return vol;
}

}  // namespace ellsym
