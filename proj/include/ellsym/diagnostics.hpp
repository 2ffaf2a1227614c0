#pragma once

// Moving-plane measurements on omega-limit candidates: barrier verification,
// psi_lambda sweeps with lambda_0 estimation, Hopf-type normal derivatives,
// symmetry deviation, weighted radial monotonicity and the final verdict.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellsym/geometry.hpp"
#include "ellsym/grid.hpp"
#include "ellsym/interpolation.hpp"
#include "ellsym/nonlinearity.hpp"
#include "ellsym/solver.hpp"
#include "ellsym/transform.hpp"

namespace ellsym {

// ---------------------------------------------------------------------------
// Sine barrier on the annulus R < |x - e_lambda| < R + delta

struct BarrierSpec {
  double lambda = 0.5;
  double delta = 0.05;
  double m = 0.0;  // auxiliary exponent; make_barrier sets 1/(2 delta^2)
};

inline BarrierSpec make_barrier(double lambda, double delta) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("barrier: lambda must lie in (0,1)");
  if (!(delta > 0.0)) throw std::domain_error("barrier: delta must be positive");
  return {lambda, delta, 1.0 / (2.0 * delta * delta)};
}

namespace detail {

inline double barrier_argument(double rho, const BarrierSpec& s) {
  const double ring = (1.0 + s.lambda * s.lambda) / (2.0 * s.lambda);
  return (rho - ring) / s.delta;
}

}  // namespace detail

inline double barrier_phi(const Point& x, const BarrierSpec& s) {
  const PlaneParam p = plane_param(s.lambda, x.dim());
  const double a = detail::barrier_argument((x - p.center()).norm(), s);
  if (a < -1e-12 || a > 1.0 + 1e-12) throw std::domain_error("barrier_phi: point outside the annulus");
  return std::sin(a + std::numbers::pi / 2.0);
}

/// Delta phi / phi at distance rho from e_lambda: phi'' + (N-1) phi'/rho over phi.
inline double barrier_ratio(double rho, const BarrierSpec& s, int dim) {
  const double a = detail::barrier_argument(rho, s);
  const double phi = std::cos(a);
  const double d1 = -std::sin(a) / s.delta;
  const double d2 = -phi / (s.delta * s.delta);
  return (d2 + (dim - 1.0) * d1 / rho) / phi;
}

struct BarrierReport {
  double worst_ratio = -std::numeric_limits<double>::infinity();
  double bound = 0;  // -1/delta^2
  bool holds = true;
  int samples = 0;
  Point counterexample;  // first failing sample, empty if none
};

/// Samples annulus points inside the ball (stratified in |x - e_lambda|, random
/// angle off the sweep axis) and checks Delta phi / phi < -1/delta^2.
inline BarrierReport barrier_bound_check(const BarrierSpec& s, int dim, int samples = 1000,
                                         std::uint64_t seed = 1) {
  if (!(s.delta > 0.0 && s.delta <= 0.2)) throw std::domain_error("barrier_bound_check: need 0 < delta <= 0.2");
  if (dim < 2) throw std::domain_error("barrier_bound_check: dimension must be >= 2");
  const PlaneParam p = plane_param(s.lambda, static_cast<std::size_t>(dim));
  const Point d = p.direction();
  const Point side = Point::axis(dim, 1);
  const double ring = p.radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  BarrierReport rep;
  rep.bound = -1.0 / (s.delta * s.delta);
  auto at = [&](double rho, double alpha) { return p.center() + rho * (std::cos(alpha) * d + std::sin(alpha) * side); };
  for (int k = 0; k < samples; ++k) {
    const double rho = ring + s.delta * (k + 0.5) / samples;
    // Largest opening angle keeping the point in the ball.
    double lo = 0.0, hi = std::numbers::pi;
    if (at(rho, 0.0).norm() >= 1.0) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(rho, mid).norm() < 1.0 ? lo : hi) = mid;
    }
    const Point x = at(rho, lo * unit(rng));
    const double ratio = barrier_ratio((x - p.center()).norm(), s, dim);
    ++rep.samples;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (!(ratio < rep.bound) && rep.holds) {
      rep.holds = false;
      rep.counterexample = x;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Symmetry and monotonicity of a candidate

/// sup over radii of (max_theta phi - min_theta phi).
inline double symmetry_deviation(const Field& phi) {
  const Grid& g = phi.grid;
  double dev = 0.0;
  for (int i = 0; i < g.n_r(); ++i) {
    double lo = phi.at(i, 0), hi = lo;
    for (int j = 1; j < g.n_theta(); ++j) {
      lo = std::min(lo, phi.at(i, j));
      hi = std::max(hi, phi.at(i, j));
    }
    dev = std::max(dev, hi - lo);
  }
  return dev;
}

/// True when series[k+1] <= series[k] + floor for every k >= from.
inline bool non_increasing(const std::vector<double>& series, std::size_t from, double floor) {
  for (std::size_t k = from; k + 1 < series.size(); ++k)
    if (series[k + 1] > series[k] + floor) return false;
  return true;
}

enum class MonotonicityStatus { pass, fail, not_symmetric_enough };

inline const char* to_string(MonotonicityStatus s) {
  switch (s) {
    case MonotonicityStatus::pass: return "pass";
    case MonotonicityStatus::fail: return "fail";
    case MonotonicityStatus::not_symmetric_enough: return "not-symmetric-enough";
  }
  return "?";
}

struct MonotonicityReport {
  MonotonicityStatus status = MonotonicityStatus::fail;
  std::vector<double> radii;
  std::vector<double> profile;  // V(r_i)
  int first_violation = -1;     // index i with V(r_{i+1}) >= V(r_i)
  double symmetry_deviation = 0;
  double gate = 0;
};

/// V(r_i) = (1+r_i^2)^{(N-2)/2} * angular mean of phi, strictly decreasing in i.
/// The angular mean is only meaningful when the symmetry deviation is below `gate`.
inline MonotonicityReport weighted_monotonicity(const Field& phi, int dim, double gate) {
  const Grid& g = phi.grid;
  if (dim != g.dim()) throw std::invalid_argument("dimension mismatch");
  MonotonicityReport rep;
  rep.gate = gate;
  rep.symmetry_deviation = symmetry_deviation(phi);
  if (!(rep.symmetry_deviation < gate)) {
    rep.status = MonotonicityStatus::not_symmetric_enough;
    return rep;
  }
  const auto vol = cell_volumes(g);
  for (int i = 0; i < g.n_r(); ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) {
      num += vol[g.index(i, j)] * phi.at(i, j);
      den += vol[g.index(i, j)];
    }
    const double r = g.r(i);
    rep.radii.push_back(r);
    rep.profile.push_back(conformal_weight(r * r, dim) * num / den);
  }
  rep.status = MonotonicityStatus::pass;
  for (std::size_t i = 0; i + 1 < rep.profile.size(); ++i) {
    if (!(rep.profile[i + 1] - rep.profile[i] < 0.0)) {
      rep.status = MonotonicityStatus::fail;
      rep.first_violation = static_cast<int>(i);
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Moving-plane sweep

inline constexpr double default_lambda_step = 1.0 / 64.0;

/// k * step for k = 1, 2, ... while below 1.
inline std::vector<double> lambda_grid(double step = default_lambda_step) {
  if (!(step > 0.0 && step < 1.0)) throw std::invalid_argument("lambda_step must lie in (0,1)");
  std::vector<double> out;
  for (int k = 1; k * step < 1.0 - 1e-12; ++k) out.push_back(k * step);
  return out;
}

struct SweepReport {
  Point direction;
  double lambda_step = default_lambda_step;
  double tol_psi = 0;
  std::vector<double> lambdas;
  std::vector<double> min_psi;            // NaN where skipped
  std::vector<double> normal_derivative;  // outer d psi/dn at the axis crossing of T_lambda, NaN if unavailable
  std::vector<std::size_t> cells;         // mesh cells in Sigma_lambda
  std::vector<std::string> notes;
  double lambda0_est = 1.0;
  double min_psi_zero = 0;  // lambda = 0 terminal check
  bool lambda_zero_pass = false;
  bool hopf_pass = true;  // d psi/dn < 0 wherever min psi > tol_psi
  double symmetry_deviation = 0;
  std::string monotonicity = "not-evaluated";
};

namespace detail {

inline void check_sweep_direction(const Grid& g, const Point& dir) {
  if (dir.dim() != static_cast<std::size_t>(g.dim())) throw std::invalid_argument("dimension mismatch");
  if (std::abs(dir.norm() - 1.0) > 1e-10) throw std::invalid_argument("sweep direction must be a unit vector");
  for (std::size_t k = 2; k < dir.dim(); ++k)
    if (dir[k] != 0.0) throw std::invalid_argument("sweep direction must lie in the mesh plane");
  if (g.dim() >= 3 && dir[1] != 0.0) {
    throw std::invalid_argument("axisymmetric grids only support the symmetry axis as sweep direction");
  }
}

}  // namespace detail

/// Outer normal derivative of psi_lambda at lambda * direction on T_lambda,
/// from one-sided second-order differences along the inward normal.
inline double hopf_derivative(const FieldInterpolator& u, int dim, const PlaneParam& p, double h) {
  const Point d = p.direction();
  const Point x0 = p.lambda() * d;
  auto psi = [&](double s) { return comparison_value(u, dim, x0 + s * d, p); };
  const double inward = (-3.0 * psi(0.0) + 4.0 * psi(h) - psi(2.0 * h)) / (2.0 * h);
  return -inward;
}

inline SweepReport moving_plane_sweep(const Field& phi, const Point& direction, const std::vector<double>& lambdas,
                                      double tol_psi, double lambda_step = default_lambda_step) {
  const Grid& g = phi.grid;
  detail::check_sweep_direction(g, direction);
  SweepReport rep;
  rep.direction = direction;
  rep.lambda_step = lambda_step;
  rep.tol_psi = tol_psi;
  rep.lambdas = lambdas;
  FieldInterpolator interp(phi);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double h = g.dr();
  for (double lam : lambdas) {
    if (!(lam > 0.0 && lam < 1.0)) throw std::invalid_argument("lambda grid must lie in (0,1)");
    const PlaneParam p = plane_param(lam, direction);
    double mn = nan, dn = nan;
    std::size_t count = 0;
    try {
      const auto zf = psi_lambda(phi, p);
      count = zf.count();
      if (count == 0) {
        rep.notes.push_back("lambda=" + std::to_string(lam) + " skipped: Sigma_lambda holds no mesh cell");
      } else {
        mn = zf.min_z();
        if (lam + 2.0 * h < 1.0) {
          dn = hopf_derivative(interp, g.dim(), p, h);
          if (mn > tol_psi && !(dn < 0.0)) rep.hopf_pass = false;
        }
      }
    } catch (const std::out_of_range& e) {
      rep.notes.push_back("lambda=" + std::to_string(lam) + " skipped: " + e.what());
    }
    rep.min_psi.push_back(mn);
    rep.normal_derivative.push_back(dn);
    rep.cells.push_back(count);
  }

  // Smallest grid lambda from which every evaluated lambda passes.
  rep.lambda0_est = 1.0;
  for (std::size_t k = lambdas.size(); k-- > 0;) {
    if (std::isnan(rep.min_psi[k])) continue;
    if (rep.min_psi[k] < -tol_psi) break;
    rep.lambda0_est = lambdas[k];
  }

  const auto z0 = psi_lambda(phi, plane_param(0.0, direction));
  rep.min_psi_zero = z0.count() ? z0.min_z() : 0.0;
  rep.lambda_zero_pass = rep.min_psi_zero >= -tol_psi;
  return rep;
}

inline SweepReport moving_plane_sweep(const Field& phi, const Point& direction, double lambda_step, double tol_psi) {
  return moving_plane_sweep(phi, direction, lambda_grid(lambda_step), tol_psi, lambda_step);
}

/// Default sweep directions: +x1 and -x1, plus a rotated direction on full-circle grids.
inline std::vector<Point> default_directions(const Grid& g, bool include_rotated = false) {
  std::vector<Point> out{Point::axis(g.dim(), 0), Point::axis(g.dim(), 0, -1.0)};
  if (include_rotated && g.periodic()) out.push_back(Point{std::cos(1.0), std::sin(1.0)});
  return out;
}

// ---------------------------------------------------------------------------
// Theorem-level classification

enum class TheoremClass { trivial_limit, symmetric_monotone, hypotheses_violated, inconclusive };

inline const char* to_string(TheoremClass c) {
  switch (c) {
    case TheoremClass::trivial_limit: return "trivial_limit";
    case TheoremClass::symmetric_monotone: return "symmetric_monotone";
    case TheoremClass::hypotheses_violated: return "hypotheses_violated";
    case TheoremClass::inconclusive: return "inconclusive";
  }
  return "?";
}

struct VerdictInputs {
  F3Verdict f3 = F3Verdict::pass_strict;
  bool f1_ok = true;
  OmegaLimit omega;
  std::vector<MonitorRecord> log;
  std::vector<SweepReport> sweeps;
  MonotonicityReport monotonicity;
  double eps_omega = 0;  // absolute
  double tol_sym = 0;    // absolute
  double lambda_step = default_lambda_step;
  double positivity_tolerance = 0;  // absolute
  double dudt_tolerance = 1e-10;
  bool monotone_time_expected = false;  // judge the u_t >= 0 monitor
};

struct TheoremVerdict {
  TheoremClass cls = TheoremClass::inconclusive;
  std::string reason;
};

inline TheoremVerdict theorem_verdict(const VerdictInputs& in) {
  if (in.f3 == F3Verdict::fail) return {TheoremClass::hypotheses_violated, "F3 check failed"};
  if (!in.f1_ok) return {TheoremClass::hypotheses_violated, "F1 Lipschitz estimate unstable under refinement"};
  if (!in.omega.converged) return {TheoremClass::inconclusive, "omega-limit not converged"};
  if (in.omega.phi.max_abs() < in.eps_omega) return {TheoremClass::trivial_limit, "sup|phi| below eps_omega"};
  for (const auto& m : in.log) {
    if (m.min_u < -in.positivity_tolerance) return {TheoremClass::hypotheses_violated, "positivity monitor flagged"};
    if (in.monotone_time_expected && m.min_dudt < -in.dudt_tolerance) {
      return {TheoremClass::hypotheses_violated, "u_t >= 0 monitor flagged"};
    }
  }
  const double dev = symmetry_deviation(in.omega.phi);
  if (!(dev < in.tol_sym)) return {TheoremClass::inconclusive, "symmetry deviation above tol_sym"};
  if (in.monotonicity.status != MonotonicityStatus::pass) {
    return {TheoremClass::inconclusive, std::string("weighted monotonicity: ") + to_string(in.monotonicity.status)};
  }
  if (in.sweeps.empty()) return {TheoremClass::inconclusive, "no sweep directions evaluated"};
  for (const auto& s : in.sweeps) {
    if (s.lambda0_est > in.lambda_step * (1.0 + 1e-9)) {
      return {TheoremClass::inconclusive, "lambda0_est above the grid step"};
    }
  }
  return {TheoremClass::symmetric_monotone, "all checks passed"};
}

}  // namespace ellsym
