#pragma once

// Weighted transforms and the moving-plane comparison functions:
//   v   = (1+|x|^2)^{(N-2)/2} u
//   w_l = v(x^l) - v(x)
//   z_l = (1+|x|^2)^{-(N-2)/2} w_l = ((1+|x^l|^2)/(1+|x|^2))^{(N-2)/2} u(x^l) - u(x)
// together with the conformal Laplace-Beltrami operator of the metric
// 4|dx|^2/(1+|x|^2)^2 and residual checks of the identities that drive the
// moving-plane argument.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ellsym/geometry.hpp"
#include "ellsym/grid.hpp"
#include "ellsym/interpolation.hpp"
#include "ellsym/laplacian.hpp"
#include "ellsym/nonlinearity.hpp"

namespace ellsym {

inline double conformal_weight(double r2, int dim) { return std::pow(1.0 + r2, weight_exponent(dim)); }

struct TransformedField {
  Field v;
};

inline TransformedField to_v(const Field& u) {
  TransformedField out{u};
  const Grid& g = u.grid;
  for (int i = 0; i < g.n_r(); ++i) {
    const double w = conformal_weight(g.r(i) * g.r(i), g.dim());
    for (int j = 0; j < g.n_theta(); ++j) out.v.at(i, j) *= w;
  }
  return out;
}

inline Field from_v(const TransformedField& tv) {
  Field u = tv.v;
  const Grid& g = u.grid;
  for (int i = 0; i < g.n_r(); ++i) {
    const double w = conformal_weight(g.r(i) * g.r(i), g.dim());
    for (int j = 0; j < g.n_theta(); ++j) u.at(i, j) /= w;
  }
  return u;
}

/// z_lambda sampled on the mesh cells of Sigma_lambda. Entries outside
/// Sigma_lambda are NaN.
struct ComparisonField {
  PlaneParam plane;
  Grid grid;
  double time = 0;
  InterpolationScheme scheme = InterpolationScheme::bicubic;
  int interp_order = 3;
  std::vector<char> in_sigma;
  std::vector<double> z;
  std::vector<double> w;
  std::vector<double> s_reflected;  // ((1+|x^l|^2)/(1+|x|^2))^{(N-2)/2} u(x^l)

  std::size_t count() const {
    std::size_t c = 0;
    for (char m : in_sigma) c += m != 0;
    return c;
  }
  double min_z() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k)
      if (in_sigma[k]) m = std::min(m, z[k]);
    return m;
  }
};

/// Evaluate z_lambda at an arbitrary point of the closed ball from an interpolated field.
inline double comparison_value(const FieldInterpolator& u, int dim, const Point& x, const PlaneParam& p) {
  const Point y = reflect(x, p);
  if (y.norm() > 1.0 + 1e-9) throw std::out_of_range("z_lambda: reflected point outside the mesh hull");
  const double a = std::pow((1.0 + y.norm2()) / (1.0 + x.norm2()), weight_exponent(dim));
  return a * u(y) - u(x);
}

inline ComparisonField z_lambda(const Field& u, const PlaneParam& p,
                                InterpolationScheme scheme = InterpolationScheme::bicubic) {
  const Grid& g = u.grid;
  if (p.dim() != static_cast<std::size_t>(g.dim())) throw std::invalid_argument("z_lambda: dimension mismatch");
  ComparisonField out;
  out.plane = p;
  out.grid = g;
  out.time = u.time;
  out.scheme = scheme;
  out.interp_order = interpolation_order(scheme);
  out.in_sigma.assign(g.size(), 0);
  out.z.assign(g.size(), std::numeric_limits<double>::quiet_NaN());
  out.w = out.z;
  out.s_reflected = out.z;
  FieldInterpolator interp(u, scheme);
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const Point x = g.point(i, j);
      if (!in_sigma(x, p)) continue;
      const std::size_t k = g.index(i, j);
      const Point y = reflect(x, p);
      if (y.norm() > 1.0 + 1e-9) throw std::out_of_range("z_lambda: reflected point outside the mesh hull");
      const double a = std::pow((1.0 + y.norm2()) / (1.0 + x.norm2()), weight_exponent(g.dim()));
      out.in_sigma[k] = 1;
      out.s_reflected[k] = a * interp(y);
      out.z[k] = out.s_reflected[k] - u.values[k];
      out.w[k] = conformal_weight(x.norm2(), g.dim()) * out.z[k];
    }
  }
  return out;
}

/// psi_lambda is z_lambda evaluated on an omega-limit candidate.
inline ComparisonField psi_lambda(const Field& phi, const PlaneParam& p,
                                  InterpolationScheme scheme = InterpolationScheme::bicubic) {
  return z_lambda(phi, p, scheme);
}

inline constexpr double c_lambda_eps_den = 1e-10;
inline constexpr double c_lambda_fd_step = 1e-6;

/// Difference quotient of f in u between the two arguments compared by z_lambda.
inline double difference_quotient(const NonlinearitySpec& f, double r, double s2, double s1, double t) {
  if (std::abs(s2 - s1) < c_lambda_eps_den) {
    const double mid = 0.5 * (s1 + s2);
    return (f(r, mid + c_lambda_fd_step, t) - f(r, mid - c_lambda_fd_step, t)) / (2.0 * c_lambda_fd_step);
  }
  return (f(r, s2, t) - f(r, s1, t)) / (s2 - s1);
}

/// c_lambda on the mesh cells of Sigma_lambda (NaN elsewhere).
inline std::vector<double> c_lambda(const ComparisonField& zf, const Field& u, const NonlinearitySpec& f) {
  const Grid& g = u.grid;
  std::vector<double> c(g.size(), std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      if (!zf.in_sigma[k]) continue;
      c[k] = difference_quotient(f, g.r(i), zf.s_reflected[k], u.values[k], u.time);
    }
  }
  return c;
}

inline std::vector<double> c_lambda(const Field& u, const PlaneParam& p, const NonlinearitySpec& f) {
  return c_lambda(z_lambda(u, p), u, f);
}

// ---------------------------------------------------------------------------
// Analytic test functions and the Laplace-Beltrami operator

struct AnalyticFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<double(const Point&)> laplacian;
};

namespace analytic {

inline AnalyticFunction constant(double c) {
  return {[c](const Point&) { return c; }, [](const Point& x) { return Point(x.dim()); },
          [](const Point&) { return 0.0; }};
}

inline AnalyticFunction coordinate(std::size_t k) {
  return {[k](const Point& x) { return x[k]; }, [k](const Point& x) { return Point::axis(x.dim(), k); },
          [](const Point&) { return 0.0; }};
}

inline AnalyticFunction norm_squared() {
  return {[](const Point& x) { return x.norm2(); }, [](const Point& x) { return 2.0 * x; },
          [](const Point& x) { return 2.0 * static_cast<double>(x.dim()); }};
}

/// exp(-|x|^2) + x_1
inline AnalyticFunction gaussian_plus_linear() {
  return {[](const Point& x) { return std::exp(-x.norm2()) + x[0]; },
          [](const Point& x) {
            Point g = (-2.0 * std::exp(-x.norm2())) * x;
            g[0] += 1.0;
            return g;
          },
          [](const Point& x) {
            const double n = static_cast<double>(x.dim());
            return std::exp(-x.norm2()) * (4.0 * x.norm2() - 2.0 * n);
          }};
}

}  // namespace analytic

/// ((1+|x|^2)/2)^2 (Lap v - 2(N-2)/(1+|x|^2) x . grad v)
inline double laplace_beltrami(const AnalyticFunction& v, const Point& x) {
  const double n = static_cast<double>(x.dim());
  const double q = 1.0 + x.norm2();
  return metric_weight(x) * (v.laplacian(x) - 2.0 * (n - 2.0) / q * dot(x, v.gradient(x)));
}

enum class CompositionDerivatives { analytic, finite_difference };

/// Laplace-Beltrami of the pulled-back function x -> v(x^lambda), evaluated at x.
inline double pulled_back_laplace_beltrami(const AnalyticFunction& v, const Point& x, const PlaneParam& p,
                                           CompositionDerivatives mode = CompositionDerivatives::analytic,
                                           double h = 1e-3) {
  const std::size_t n = x.dim();
  const double q = 1.0 + x.norm2();
  if (mode == CompositionDerivatives::finite_difference) {
    // Fourth-order central differences of the composition.
    auto comp = [&](const Point& z) { return v.value(reflect(z, p)); };
    const double c0 = comp(x);
    double lap = 0.0, drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Point e = Point::axis(n, i, h);
      const double p1 = comp(x + e), m1 = comp(x - e);
      const double p2 = comp(x + 2.0 * e), m2 = comp(x - 2.0 * e);
      lap += (-p2 + 16.0 * p1 - 30.0 * c0 + 16.0 * m1 - m2) / (12.0 * h * h);
      drift += x[i] * (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    }
    return metric_weight(x) * (lap - 2.0 * (static_cast<double>(n) - 2.0) / q * drift);
  }
  // Inversion y = e + R^2 X/|X|^2, X = x - e, has Jacobian k (I - 2 Xh Xh^T) with
  // k = R^2/|X|^2, so Lap_x(v o y) = k^2 Lap v(y) + grad v(y) . Lap_x y and
  // Lap_x y = -2(N-2) R^2 X/|X|^4. The hyperplane mirror has k = 1, Lap_x y = 0.
  const Point y = reflect(x, p);
  const Point gv = v.gradient(y);
  Point axis;
  double k = 1.0;
  double lap_comp = v.laplacian(y);
  if (p.is_hyperplane()) {
    axis = p.direction();
  } else {
    const Point X = x - p.center();
    const double x2 = X.norm2();
    const double r2 = p.radius() * p.radius();
    k = r2 / x2;
    axis = (1.0 / std::sqrt(x2)) * X;
    lap_comp = k * k * lap_comp - 2.0 * (static_cast<double>(n) - 2.0) * r2 / (x2 * x2) * dot(gv, X);
  }
  // grad_x (v o y) = J^T grad v(y), J symmetric.
  const Point grad_comp = k * (gv - (2.0 * dot(axis, gv)) * axis);
  return metric_weight(x) * (lap_comp - 2.0 * (static_cast<double>(n) - 2.0) / q * dot(x, grad_comp));
}

/// | Lap_g (v o reflect)(x) - (Lap_g v)(x^lambda) |
inline double invariance_residual(const AnalyticFunction& v, const Point& x, const PlaneParam& p,
                                CompositionDerivatives mode = CompositionDerivatives::analytic) {
  return std::abs(pulled_back_laplace_beltrami(v, x, p, mode) - laplace_beltrami(v, reflect(x, p)));
}

/// Compare dw_lambda/dn at a point of T_lambda (centered differences along the
/// outer normal of Sigma_lambda) with -2 dv/dn. Returns (lhs, rhs).
inline std::pair<double, double> boundary_normal_relation(const AnalyticFunction& v, const PlaneParam& p,
                                                          const Point& x0, double h) {
  if (p.is_hyperplane()) throw std::domain_error("boundary_normal_relation: lambda must be > 0");
  if (std::abs(sigma_level(x0, p)) > 1e-10) throw std::domain_error("boundary_normal_relation: x0 is not on T_lambda");
  if (!(h > 0.0 && h <= 1e-3)) throw std::domain_error("boundary_normal_relation: need 0 < h <= 1e-3");
  const Point X = x0 - p.center();
  const Point normal = (-1.0 / X.norm()) * X;
  auto w = [&](const Point& x) { return v.value(reflect(x, p)) - v.value(x); };
  const double lhs = (w(x0 + h * normal) - w(x0 - h * normal)) / (2.0 * h);
  const double rhs = -2.0 * dot(v.gradient(x0), normal);
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Discrete checks on solver output

/// Discrete Laplace-Beltrami of a mesh field: ((1+r^2)/2)^2 (L_h v - 2(N-2)/(1+r^2) r dv/dr).
inline std::vector<double> discrete_laplace_beltrami(const Field& v) {
  const Grid& g = v.grid;
  auto lap = laplacian_axisym(v);
  const int nr = g.n_r(), nt = g.n_theta();
  for (int i = 0; i < nr; ++i) {
    const double r = g.r(i);
    const double q = 1.0 + r * r;
    for (int j = 0; j < nt; ++j) {
      const double up = i + 1 < nr ? v.at(i + 1, j) : -v.at(i, j);
      double dn;
      if (i > 0) dn = v.at(i - 1, j);
      else dn = g.periodic() ? v.at(0, (j + nt / 2) % nt) : v.at(0, nt - 1 - j);
      const double vr = (up - dn) / (2.0 * g.dr());
      const std::size_t k = g.index(i, j);
      lap[k] = 0.25 * q * q * (lap[k] - 2.0 * (g.dim() - 2.0) / q * r * vr);
    }
  }
  return lap;
}

/// Pointwise residual of the transformed equation
///   ((1+r^2)/2)^2 v_t - Lap_g v - (1+r^2)^{(N+2)/2}/4 f(r, (1+r^2)^{-(N-2)/2} v, t) + N(N-2)/4 v
/// given v on the mesh and its time derivative. The outermost row is left NaN
/// because the Dirichlet ghost makes its truncation error O(1).
inline std::vector<double> transformed_equation_residual(const Field& v, const std::vector<double>& dvdt,
                                                         const NonlinearitySpec& f) {
  const Grid& g = v.grid;
  const double n = g.dim();
  auto lb = discrete_laplace_beltrami(v);
  std::vector<double> res(g.size(), std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i + 1 < g.n_r(); ++i) {
    const double r = g.r(i);
    const double q = 1.0 + r * r;
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double u = v.values[k] / conformal_weight(r * r, g.dim());
      res[k] = 0.25 * q * q * dvdt[k] - lb[k] - 0.25 * std::pow(q, 0.5 * (n + 2.0)) * f(r, u, v.time) +
               0.25 * n * (n - 2.0) * v.values[k];
    }
  }
  return res;
}

struct ComparisonResidualOptions {
  double c_res = 0.0;  // 0: 10 * max|u|
  double dudt_tolerance = 1e-10;
  F3Sampling f3_sampling{};
};

struct ComparisonResidualResult {
  std::vector<double> residual;  // NaN off the checked cells
  std::size_t checked = 0;
  double min_residual = std::numeric_limits<double>::infinity();
  double tol_disc = 0;
  bool f3_precondition_met = true;
  bool hypothesis_violated = false;  // u_next - u_prev < -tol somewhere
  bool passed() const { return f3_precondition_met && !hypothesis_violated && min_residual >= -tol_disc; }
  std::string status() const {
    if (!f3_precondition_met) return "F3 precondition not met";
    if (hypothesis_violated) return "hypothesis-violated";
    return min_residual >= -tol_disc ? "pass" : "fail";
  }
};

/// Discrete residual (z_next - z_prev)/dt - L_h z_next - c_lambda z_next on the
/// cells of Sigma_lambda whose whole stencil lies in Sigma_lambda.
inline ComparisonResidualResult comparison_residual_check(const Field& u_prev, const Field& u_next, const PlaneParam& p,
                                      const NonlinearitySpec& f, double dt, const ComparisonResidualOptions& opt = {}) {
  const Grid& g = u_next.grid;
  if (!(u_prev.grid == g)) throw std::invalid_argument("comparison_residual_check: grid mismatch");
  ComparisonResidualResult out;
  out.residual.assign(g.size(), std::numeric_limits<double>::quiet_NaN());
  out.f3_precondition_met = check_F3(f, g.dim(), opt.f3_sampling).verdict != F3Verdict::fail;
  if (!out.f3_precondition_met) return out;

  for (std::size_t k = 0; k < g.size(); ++k) {
    if (u_next.values[k] - u_prev.values[k] < -opt.dudt_tolerance * dt) out.hypothesis_violated = true;
  }
  const double c_res = opt.c_res > 0.0 ? opt.c_res : 10.0 * u_next.max_abs();
  out.tol_disc = c_res * (g.dr() * g.dr() + g.dtheta() * g.dtheta() + dt);

  const auto zp = z_lambda(u_prev, p);
  const auto zn = z_lambda(u_next, p);
  const auto c = c_lambda(zn, u_next, f);
  const PolarLaplacian op(g);
  const int nr = g.n_r(), nt = g.n_theta();
  auto in = [&](int i, int j) { return zn.in_sigma[g.index(i, j)] != 0; };
  for (int i = 1; i + 1 < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int jm = g.periodic() ? (j + nt - 1) % nt : std::max(j - 1, 0);
      const int jp = g.periodic() ? (j + 1) % nt : std::min(j + 1, nt - 1);
      if (!(in(i, j) && in(i - 1, j) && in(i + 1, j) && in(i, jm) && in(i, jp))) continue;
      const std::size_t k = g.index(i, j);
      auto z = [&](int a, int b) { return zn.z[g.index(a, b)]; };
      const double lap_r = op.radial_lo(i) * (z(i - 1, j) - z(i, j)) + op.radial_up(i) * (z(i + 1, j) - z(i, j));
      const double lap_t =
          op.inv_r2(i) * (op.angular_lo(j) * (z(i, jm) - z(i, j)) + op.angular_up(j) * (z(i, jp) - z(i, j)));
      const double r = (zn.z[k] - zp.z[k]) / dt - (lap_r + lap_t) - c[k] * zn.z[k];
      out.residual[k] = r;
      out.min_residual = std::min(out.min_residual, r);
      ++out.checked;
    }
  }
  return out;
}

}  // namespace ellsym
