#pragma once

// Elliptic-geometry constructions on the unit ball B_1(0) in R^N with the
// conformal metric 4|dx|^2 / (1+|x|^2)^2: geodesic spheres T_lambda, the
// reflection x -> x^lambda across them, the caps Sigma_lambda, and the
// stereographic chart from the upper hemisphere.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ellsym {

inline constexpr double tol_geom = 1e-12;

/// Euclidean point of R^N.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim, 0.0) {}
  Point(std::initializer_list<double> c) : coords_(c) {}
  explicit Point(std::vector<double> c) : coords_(std::move(c)) {}

  std::size_t dim() const { return coords_.size(); }
  double& operator[](std::size_t i) { return coords_[i]; }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  double norm2() const {
    return std::inner_product(coords_.begin(), coords_.end(), coords_.begin(), 0.0);
  }
  double norm() const { return std::sqrt(norm2()); }

  Point& operator+=(const Point& o) {
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] += o[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= o[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }

  static Point axis(std::size_t dim, std::size_t k, double scale = 1.0) {
    Point p(dim);
    p[k] = scale;
    return p;
  }

 private:
  std::vector<double> coords_;
};

inline double dot(const Point& a, const Point& b) {
  return std::inner_product(a.coords().begin(), a.coords().end(), b.coords().begin(), 0.0);
}

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

/// Position of a moving plane. lambda in (0,1) is a geodesic sphere T_lambda
/// crossing the sweep axis at lambda * direction; lambda = 0 is the Euclidean
/// hyperplane through the origin orthogonal to direction.
class PlaneParam {
 public:
  double lambda() const { return lambda_; }
  const Point& direction() const { return direction_; }
  const Point& center() const { return center_; }
  std::size_t dim() const { return direction_.dim(); }
  bool is_hyperplane() const { return lambda_ == 0.0; }

  /// (1+lambda^2)/(2 lambda); +infinity for the hyperplane.
  double radius() const { return radius_; }

 private:
  friend PlaneParam plane_param(double lambda, const Point& direction);
  double lambda_ = 0.0;
  Point direction_;
  Point center_;
  double radius_ = std::numeric_limits<double>::infinity();
};

inline PlaneParam plane_param(double lambda, const Point& direction) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::domain_error("plane_param: lambda must lie in [0,1)");
  }
  if (direction.dim() < 2) throw std::domain_error("plane_param: dimension must be >= 2");
  if (std::abs(direction.norm() - 1.0) > 1e-10) {
    throw std::domain_error("plane_param: direction must be a unit vector");
  }
  PlaneParam p;
  p.lambda_ = lambda;
  p.direction_ = direction;
  if (lambda == 0.0) {
    p.center_ = Point(direction.dim());
    p.radius_ = std::numeric_limits<double>::infinity();
  } else {
    p.center_ = ((1.0 - lambda * lambda) / (-2.0 * lambda)) * direction;
    p.radius_ = (1.0 + lambda * lambda) / (2.0 * lambda);
  }
  return p;
}

/// Plane along the first coordinate axis of R^N.
inline PlaneParam plane_param(double lambda, std::size_t dim) {
  return plane_param(lambda, Point::axis(dim, 0));
}

/// Strict membership in Sigma_lambda (the cap beyond T_lambda).
inline bool in_sigma(const Point& x, const PlaneParam& p) {
  if (p.is_hyperplane()) return dot(x, p.direction()) > 0.0;
  return distance(x, p.center()) > p.radius();
}

/// Signed distance-like level function: positive in Sigma_lambda, zero on T_lambda.
inline double sigma_level(const Point& x, const PlaneParam& p) {
  if (p.is_hyperplane()) return dot(x, p.direction());
  return distance(x, p.center()) - p.radius();
}

/// Reflection across T_lambda (sphere inversion), or the Euclidean mirror for lambda = 0.
inline Point reflect(const Point& x, const PlaneParam& p) {
  if (p.is_hyperplane()) return x - (2.0 * dot(x, p.direction())) * p.direction();
  Point d = x - p.center();
  const double d2 = d.norm2();
  if (d2 == 0.0) throw std::domain_error("reflect: point coincides with the inversion center");
  const double r = p.radius();
  return p.center() + ((r * r) / d2) * d;
}

/// | (1+|x|^2)/(1+|x^l|^2) - (2l/(1+l^2))^2 |x-e_l|^2 |.
inline double ratio_identity_residual(const Point& x, const PlaneParam& p) {
  if (p.is_hyperplane()) throw std::domain_error("ratio_identity_residual: lambda must be > 0");
  const Point y = reflect(x, p);
  const double lhs = (1.0 + x.norm2()) / (1.0 + y.norm2());
  const double k = 1.0 / p.radius();
  const double rhs = k * k * (x - p.center()).norm2();
  return std::abs(lhs - rhs);
}

/// The point a = -e_lambda/|e_lambda|^2 that the reflection sends to the origin.
inline Point collapse_point(const PlaneParam& p) {
  if (p.is_hyperplane()) throw std::domain_error("collapse_point: lambda must be > 0");
  return (-1.0 / p.center().norm2()) * p.center();
}

/// Point on the upper unit hemisphere S^+ of R^{N+1}.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> c) : coords_(std::move(c)) {
    double n2 = 0.0;
    for (double v : coords_) n2 += v * v;
    if (coords_.size() < 3) throw std::domain_error("SpherePoint: need N+1 >= 3 coordinates");
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10) {
      throw std::domain_error("SpherePoint: not on the unit sphere");
    }
    if (!(coords_.back() > 0.0)) throw std::domain_error("SpherePoint: last coordinate must be > 0");
  }
  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// P(X) = (X_1..X_N)/(X_{N+1}+1).
inline Point stereographic(const SpherePoint& X) {
  const std::size_t n = X.dim() - 1;
  const double s = 1.0 / (X[n] + 1.0);
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = s * X[i];
  return x;
}

inline SpherePoint stereographic_inv(const Point& x) {
  const double r2 = x.norm2();
  if (!(r2 < 1.0)) throw std::domain_error("stereographic_inv: point must lie in the open unit ball");
  std::vector<double> c(x.dim() + 1);
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = 2.0 * x[i] / (1.0 + r2);
  c.back() = (1.0 - r2) / (1.0 + r2);
  return SpherePoint(std::move(c));
}

/// Conformal factor ((1+|x|^2)/2)^2 of the metric's Laplace-Beltrami operator.
inline double metric_weight(const Point& x) {
  const double h = 0.5 * (1.0 + x.norm2());
  return h * h;
}

}  // namespace ellsym
