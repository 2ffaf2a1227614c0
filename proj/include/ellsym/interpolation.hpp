#pragma once

// Off-mesh evaluation of a Field by tensor-product Lagrange interpolation in
// (r, theta). Stencils that reach past the mesh use ghost cells:
//   r > 1: odd extension about r = 1 (homogeneous Dirichlet data),
//   r < 0: the row on the far side of the pole (theta + pi for the polar
//          grid, pi - theta for the axisymmetric one),
//   theta: periodic wrap (N = 2) or even reflection about the axis (N >= 3).

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ellsym/grid.hpp"

namespace ellsym {

enum class InterpolationScheme { bicubic, bilinear };

inline int interpolation_order(InterpolationScheme s) { return s == InterpolationScheme::bicubic ? 3 : 1; }

class FieldInterpolator {
 public:
  explicit FieldInterpolator(const Field& f, InterpolationScheme scheme = InterpolationScheme::bicubic)
      : field_(f), grid_(f.grid), scheme_(scheme) {}

  InterpolationScheme scheme() const { return scheme_; }

  /// Value at (r, theta); r in [0, 1 + tol_geom].
  double operator()(double r, double theta) const {
    if (r > 1.0 + 1e-9 || r < 0.0 || !std::isfinite(r) || !std::isfinite(theta)) {
      throw std::out_of_range("FieldInterpolator: point outside the mesh hull");
    }
    const double s = r / grid_.dr() - 0.5;
    const int i0 = static_cast<int>(std::floor(s));
    const double t = s - i0;
    if (scheme_ == InterpolationScheme::bilinear) {
      return (1.0 - t) * row_value(i0, theta) + t * row_value(i0 + 1, theta);
    }
    const auto w = cubic_weights(t);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += w[k] * row_value(i0 - 1 + k, theta);
    return acc;
  }

  double operator()(const Point& x) const {
    const auto [r, th] = grid_.polar(x);
    return (*this)(r, th);
  }

 private:
  static std::array<double, 4> cubic_weights(double t) {
    return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
  }

  double row_value(int i, double theta) const {
    const int nr = grid_.n_r();
    if (i >= nr) return -row_value(2 * nr - 1 - i, theta);
    if (i < 0) {
      const double across = grid_.periodic() ? theta + std::numbers::pi : std::numbers::pi - theta;
      return row_value(-1 - i, across);
    }
    const double s = theta / grid_.dtheta() - 0.5;
    const int j0 = static_cast<int>(std::floor(s));
    const double t = s - j0;
    if (scheme_ == InterpolationScheme::bilinear) {
      return (1.0 - t) * cell(i, j0) + t * cell(i, j0 + 1);
    }
    const auto w = cubic_weights(t);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += w[k] * cell(i, j0 - 1 + k);
    return acc;
  }

  double cell(int i, int j) const {
    const int nt = grid_.n_theta();
    if (grid_.periodic()) {
      j %= nt;
      if (j < 0) j += nt;
    } else {
      while (j < 0 || j >= nt) {
        if (j < 0) j = -1 - j;
        if (j >= nt) j = 2 * nt - 1 - j;
      }
    }
    return field_.values[grid_.index(i, j)];
  }

  Field field_;
  Grid grid_;
  InterpolationScheme scheme_;
};

}  // namespace ellsym
