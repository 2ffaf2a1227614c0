#pragma once

// Randomized property suites for the reflection geometry and the conformal
// operator identities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ellsym/geometry.hpp"
#include "ellsym/transform.hpp"

namespace ellsym {

namespace detail {

/// Uniform point in the open unit ball of R^dim.
inline Point random_ball_point(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point x(dim);
  for (std::size_t k = 0; k < dim; ++k) x[k] = gauss(rng);
  const double r = std::pow(unit(rng), 1.0 / static_cast<double>(dim));
  return (r / x.norm()) * x;
}

inline Point random_direction(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Point d(dim);
  do {
    for (std::size_t k = 0; k < dim; ++k) d[k] = gauss(rng);
  } while (d.norm() < 1e-3);
  return (1.0 / d.norm()) * d;
}

}  // namespace detail

struct GeometrySuiteResult {
  long samples = 0;
  double max_involution_error = 0;
  double max_ratio_residual = 0;
  long sigma_points = 0;
  long shrink_violations = 0;  // points of Sigma_lambda with |x^l| >= |x|
  double max_collapse_error = 0;
  bool passed(double tol = tol_geom) const {
    return max_involution_error < tol && max_ratio_residual < tol && shrink_violations == 0 &&
           max_collapse_error < tol;
  }
};

/// Random (x, lambda, direction) with x in the unit ball of R^N, N cycling
/// through 2..5, lambda uniform in [lambda_lo, lambda_hi]; plus the collapse
/// of a = -e/|e|^2 for `collapse_lambdas` evenly spaced lambda.
inline GeometrySuiteResult geometry_suite(long samples, std::uint64_t seed, double lambda_lo = 0.05,
                                          double lambda_hi = 0.95, int collapse_lambdas = 100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lam(lambda_lo, lambda_hi);
  GeometrySuiteResult res;
  for (long k = 0; k < samples; ++k) {
    const std::size_t dim = 2 + static_cast<std::size_t>(k % 4);
    const Point x = detail::random_ball_point(dim, rng);
    const PlaneParam p = plane_param(lam(rng), detail::random_direction(dim, rng));
    const Point y = reflect(x, p);
    res.max_involution_error = std::max(res.max_involution_error, distance(reflect(y, p), x));
    res.max_ratio_residual = std::max(res.max_ratio_residual, ratio_identity_residual(x, p));
    if (in_sigma(x, p)) {
      ++res.sigma_points;
      if (!(y.norm() < x.norm())) ++res.shrink_violations;
    }
    ++res.samples;
  }
  for (int k = 0; k < collapse_lambdas; ++k) {
    const double l = lambda_lo + (lambda_hi - lambda_lo) * k / std::max(1, collapse_lambdas - 1);
    const PlaneParam p = plane_param(l, detail::random_direction(2 + k % 4, rng));
    res.max_collapse_error = std::max(res.max_collapse_error, reflect(collapse_point(p), p).norm());
  }
  return res;
}

struct OperatorSuiteResult {
  long samples = 0;
  double max_invariance_residual = 0;     // analytic composition derivatives
  double max_invariance_residual_fd = 0;  // finite-difference cross-check
  int normal_checks = 0;
  double max_normal_error = 0;
  bool passed(double tol_invariance = 1e-8, double tol_normal = 1e-6) const {
    return max_invariance_residual < tol_invariance && max_normal_error < tol_normal;
  }
};

/// Invariance of the Laplace-Beltrami operator under the reflection for
/// v = exp(-|x|^2) + x_1, and the boundary relation dw/dn = -2 dv/dn on T_lambda
/// for v = |x|^2 and v = exp(-|x|^2) + x_1 at lambda in {0.25, 0.5, 0.75}.
inline OperatorSuiteResult operator_suite(long samples, std::uint64_t seed, double h = 1e-4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  OperatorSuiteResult res;
  const AnalyticFunction v = analytic::gaussian_plus_linear();
  for (long k = 0; k < samples; ++k) {
    const std::size_t dim = 2 + static_cast<std::size_t>(k % 4);
    const PlaneParam p = plane_param(lam(rng), detail::random_direction(dim, rng));
    Point x = detail::random_ball_point(dim, rng);
    // Keep away from the inversion center, where the composition is singular.
    while (distance(x, p.center()) < 0.1 * p.radius()) x = detail::random_ball_point(dim, rng);
    res.max_invariance_residual = std::max(res.max_invariance_residual, invariance_residual(v, x, p));
    if (k < 100) {
      res.max_invariance_residual_fd =
          std::max(res.max_invariance_residual_fd, invariance_residual(v, x, p, CompositionDerivatives::finite_difference));
    }
    ++res.samples;
  }
  const AnalyticFunction tests[] = {analytic::norm_squared(), analytic::gaussian_plus_linear()};
  for (const auto& f : tests) {
    for (double l : {0.25, 0.5, 0.75}) {
      for (std::size_t dim : {2u, 3u}) {
        const PlaneParam p = plane_param(l, dim);
        // Axis crossing and an off-axis point of T_lambda.
        Point off = p.center() + p.radius() * Point{std::cos(0.2), std::sin(0.2)};
        if (dim == 3) off = p.center() + p.radius() * Point{std::cos(0.2), 0.0, std::sin(0.2)};
        for (const Point& x0 : {l * Point::axis(dim, 0), off}) {
          const auto [lhs, rhs] = boundary_normal_relation(f, p, x0, h);
          res.max_normal_error = std::max(res.max_normal_error, std::abs(lhs - rhs));
          ++res.normal_checks;
        }
      }
    }
  }
  return res;
}

}  // namespace ellsym
