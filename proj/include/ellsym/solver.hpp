#pragma once

// Time integration of  u_t - Lap u = f(|x|, u, t)  in B_1(0), u = 0 on the
// sphere, by alternating-direction implicit splitting: implicit radial lines,
// then implicit angular rings (periodic for N = 2). The reaction is explicit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellsym/grid.hpp"
#include "ellsym/laplacian.hpp"
#include "ellsym/nonlinearity.hpp"
#include "ellsym/tridiagonal.hpp"

namespace ellsym {

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(long step, double t)
      : std::runtime_error("non-finite value at step " + std::to_string(step) + " (t = " + std::to_string(t) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

enum class AdiScheme {
  peaceman_rachford,  // second order in time; f at t + dt/2 from u^n and the intermediate stage
  douglas,            // first order, monotone amplification factors
};

inline const char* to_string(AdiScheme s) { return s == AdiScheme::douglas ? "douglas" : "peaceman_rachford"; }

inline AdiScheme adi_scheme_from_string(const std::string& s) {
  if (s == "peaceman_rachford") return AdiScheme::peaceman_rachford;
  if (s == "douglas") return AdiScheme::douglas;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

struct Monitors {
  double min_u = 0;
  double max_u = 0;
  double min_dudt = 0;
  double max_grad = 0;
  double boundary_max = 0;
};

struct RunState {
  Field field;
  long step_index = 0;
  Monitors monitors;
};

/// Largest |u| extrapolated to r = 1 from the three outermost cells.
inline double boundary_extrapolation_max(const Field& u) {
  const Grid& g = u.grid;
  const int n = g.n_r();
  double m = 0.0;
  for (int j = 0; j < g.n_theta(); ++j) {
    const double b = (15.0 * u.at(n - 1, j) - 10.0 * u.at(n - 2, j) + 3.0 * u.at(n - 3, j)) / 8.0;
    m = std::max(m, std::abs(b));
  }
  return m;
}

/// max |grad u| by centered differences with the same ghost cells as the operator.
inline double max_gradient(const Field& u) {
  const Grid& g = u.grid;
  const int nr = g.n_r(), nt = g.n_theta();
  double m = 0.0;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double up = i + 1 < nr ? u.at(i + 1, j) : -u.at(i, j);
      double dn;
      if (i > 0) dn = u.at(i - 1, j);
      else dn = g.periodic() ? u.at(0, (j + nt / 2) % nt) : u.at(0, nt - 1 - j);
      const double ur = (up - dn) / (2.0 * g.dr());
      const int jm = g.periodic() ? (j + nt - 1) % nt : std::max(j - 1, 0);
      const int jp = g.periodic() ? (j + 1) % nt : std::min(j + 1, nt - 1);
      const double span = g.periodic() || (j > 0 && j < nt - 1) ? 2.0 : 1.0;
      const double ut = (u.at(i, jp) - u.at(i, jm)) / (span * g.dtheta());
      m = std::max(m, std::hypot(ur, ut / g.r(i)));
    }
  }
  return m;
}

class AdiStepper {
 public:
  AdiStepper(const Grid& g, NonlinearitySpec f, double dt, AdiScheme scheme = AdiScheme::peaceman_rachford)
      : grid_(g), op_(g), f_(std::move(f)), dt_(dt), scheme_(scheme) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const std::size_t n = g.size();
    lap_r_.resize(n);
    lap_t_.resize(n);
    stage_.resize(n);
    rhs_.resize(n);
    react_.resize(n);
  }

  double dt() const { return dt_; }
  AdiScheme scheme() const { return scheme_; }
  const NonlinearitySpec& nonlinearity() const { return f_; }
  const PolarLaplacian& laplacian() const { return op_; }

  RunState initial_state(Field u0) const {
    RunState s{std::move(u0), 0, {}};
    s.monitors = observe(s.field, s.field, 0.0);
    s.monitors.min_dudt = 0.0;
    return s;
  }

  RunState step(const RunState& state) {
    const Field& un = state.field;
    if (!(un.grid == grid_)) throw std::invalid_argument("AdiStepper: grid mismatch");
    const double t = un.time;
    const double th = t + 0.5 * dt_;
    const std::size_t n = grid_.size();
    const auto& u = un.values;

    op_.apply_angular(u, lap_t_);
    evaluate_reaction(u, th, react_);

    Field next(grid_, t + dt_);
    if (scheme_ == AdiScheme::peaceman_rachford) {
      const double h = 0.5 * dt_;
      for (std::size_t k = 0; k < n; ++k) rhs_[k] = u[k] + h * lap_t_[k] + h * react_[k];
      solve_radial(h, rhs_, stage_);
      op_.apply_radial(stage_, lap_r_);
      evaluate_reaction(stage_, th, react_);
      for (std::size_t k = 0; k < n; ++k) rhs_[k] = stage_[k] + h * lap_r_[k] + h * react_[k];
      solve_angular(h, rhs_, next.values);
    } else {
      for (std::size_t k = 0; k < n; ++k) rhs_[k] = u[k] + dt_ * lap_t_[k] + dt_ * react_[k];
      solve_radial(dt_, rhs_, stage_);
      for (std::size_t k = 0; k < n; ++k) rhs_[k] = stage_[k] - dt_ * lap_t_[k];
      solve_angular(dt_, rhs_, next.values);
    }

    for (double v : next.values) {
      if (!std::isfinite(v)) throw BlowUpError(state.step_index + 1, next.time);
    }
    RunState out{std::move(next), state.step_index + 1, {}};
    out.monitors = observe(out.field, un, dt_);
    return out;
  }

 private:
  void evaluate_reaction(const std::vector<double>& u, double t, std::vector<double>& out) const {
    for (int i = 0; i < grid_.n_r(); ++i) {
      const double r = grid_.r(i);
      for (int j = 0; j < grid_.n_theta(); ++j) {
        const std::size_t k = grid_.index(i, j);
        out[k] = f_(r, u[k], t);
      }
    }
  }

  // (I - c Lr) x = rhs along every radial line.
  void solve_radial(double c, const std::vector<double>& rhs, std::vector<double>& x) {
    const int nr = grid_.n_r(), nt = grid_.n_theta();
    a_.resize(nr);
    b_.resize(nr);
    cc_.resize(nr);
    d_.resize(nr);
    sol_.resize(nr);
    for (int i = 0; i < nr; ++i) {
      a_[i] = -c * op_.radial_lo(i);
      b_[i] = 1.0 - c * op_.radial_diag(i);
      cc_[i] = -c * op_.radial_up(i);
    }
    for (int j = 0; j < nt; ++j) {
      for (int i = 0; i < nr; ++i) d_[i] = rhs[grid_.index(i, j)];
      solve_tridiagonal(a_, b_, cc_, d_, sol_, scratch_);
      for (int i = 0; i < nr; ++i) x[grid_.index(i, j)] = sol_[i];
    }
  }

  // (I - c Ltheta) x = rhs along every ring.
  void solve_angular(double c, const std::vector<double>& rhs, std::vector<double>& x) {
    const int nr = grid_.n_r(), nt = grid_.n_theta();
    a_.resize(nt);
    b_.resize(nt);
    cc_.resize(nt);
    for (int i = 0; i < nr; ++i) {
      const double s = c * op_.inv_r2(i);
      for (int j = 0; j < nt; ++j) {
        a_[j] = -s * op_.angular_lo(j);
        cc_[j] = -s * op_.angular_up(j);
        b_[j] = 1.0 + s * (op_.angular_lo(j) + op_.angular_up(j));
      }
      std::span<const double> d(rhs.data() + grid_.index(i, 0), nt);
      std::span<double> out(x.data() + grid_.index(i, 0), nt);
      if (grid_.periodic()) cyclic_.solve(a_, b_, cc_, d, out);
      else solve_tridiagonal(a_, b_, cc_, d, out, scratch_);
    }
  }

  static Monitors observe(const Field& now, const Field& before, double dt) {
    Monitors m;
    m.min_u = std::numeric_limits<double>::infinity();
    m.max_u = -std::numeric_limits<double>::infinity();
    m.min_dudt = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < now.values.size(); ++k) {
      m.min_u = std::min(m.min_u, now.values[k]);
      m.max_u = std::max(m.max_u, now.values[k]);
      if (dt > 0.0) m.min_dudt = std::min(m.min_dudt, (now.values[k] - before.values[k]) / dt);
    }
    m.max_grad = max_gradient(now);
    m.boundary_max = boundary_extrapolation_max(now);
    return m;
  }

  Grid grid_;
  PolarLaplacian op_;
  NonlinearitySpec f_;
  double dt_;
  AdiScheme scheme_;
  std::vector<double> lap_r_, lap_t_, stage_, rhs_, react_;
  std::vector<double> a_, b_, cc_, d_, sol_, scratch_;
  CyclicTridiagonal cyclic_;
};

// ---------------------------------------------------------------------------
// Initial conditions

/// First zero of J_nu, by bisection on std::cyl_bessel_j.
inline double bessel_first_zero(double nu) {
  double lo = 0.5 + nu, hi = lo;
  while (std::cyl_bessel_j(nu, hi) > 0.0) hi += 0.25;
  lo = hi - 0.25;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::cyl_bessel_j(nu, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Principal Dirichlet eigenvalue of the unit ball in R^N.
inline double principal_eigenvalue(int dim) {
  const double j = bessel_first_zero(0.5 * dim - 1.0);
  return j * j;
}

struct InitialCondition {
  std::string name = "skewed";
  std::map<std::string, double> params;
};

inline std::vector<std::string> initial_condition_names() {
  return {"zero", "radial_mode", "parabola", "skewed"};
}

/// Build u0 on the grid.
///   zero:        0
///   radial_mode: amp * principal radial Dirichlet eigenfunction, normalized to 1 at the origin
///   parabola:    amp * (1 - r^2)
///   skewed:      amp * (1 - r^2) (1 + beta x_1)
inline Field make_initial_field(const Grid& g, const InitialCondition& ic) {
  std::map<std::string, double> p;
  if (ic.name == "zero") {
  } else if (ic.name == "radial_mode" || ic.name == "parabola") {
    p = {{"amp", 1.0}};
  } else if (ic.name == "skewed") {
    p = {{"amp", 0.02}, {"beta", 0.3}};
  } else {
    throw std::invalid_argument("unknown initial condition '" + ic.name + "'");
  }
  for (const auto& [k, v] : ic.params) {
    auto it = p.find(k);
    if (it == p.end()) throw std::invalid_argument("initial condition '" + ic.name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("parameter '" + k + "' must be finite");
    it->second = v;
  }
  if (ic.name == "zero") return Field(g);
  const double amp = p["amp"];
  if (ic.name == "parabola") return sample(g, [amp](const Point& x) { return amp * (1.0 - x.norm2()); });
  if (ic.name == "skewed") {
    const double beta = p["beta"];
    return sample(g, [amp, beta](const Point& x) { return amp * (1.0 - x.norm2()) * (1.0 + beta * x[0]); });
  }
  const double nu = 0.5 * g.dim() - 1.0;
  const double j = bessel_first_zero(nu);
  const double norm = std::tgamma(nu + 1.0) * std::pow(2.0 / j, nu);
  return sample(g, [=](const Point& x) {
    const double r = x.norm();
    return amp * norm * std::cyl_bessel_j(nu, j * r) / std::pow(r, nu);
  });
}

// ---------------------------------------------------------------------------
// Runs

struct RunConfig {
  int dim = 2;
  int n_r = 64;
  int n_theta = 64;
  double dt = 1e-3;
  double t_end = 10.0;
  double snapshot_every = 0.1;
  AdiScheme scheme = AdiScheme::peaceman_rachford;
  std::string nonlinearity = "f3_logistic";
  std::map<std::string, double> nonlinearity_params;
  InitialCondition initial;
  std::uint64_t seed = 1;
  int holder_pairs = 256;

  Grid grid() const { return Grid(dim, n_r, n_theta); }
  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
    if (!(snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
    (void)grid();
  }
};

struct MonitorRecord {
  long step = 0;
  double t = 0;
  double min_u = 0;
  double max_u = 0;
  double min_dudt = 0;  // over the steps since the previous record
  double max_grad = 0;
  double boundary_max = 0;
  double holder_quotient = 0;  // against the previous snapshot
};

struct RunResult {
  std::vector<Field> snapshots;
  std::vector<MonitorRecord> log;
  NonlinearitySpec nonlinearity;
  double holder_alpha = 0.5;
};

/// Sampled |u(x,t) - u(y,s)| / (|x-y|^alpha + |t-s|^{alpha/2}) between two snapshots.
inline double holder_quotient(const Field& a, const Field& b, double alpha, int pairs, std::mt19937_64& rng) {
  const Grid& g = a.grid;
  std::uniform_int_distribution<int> ri(0, g.n_r() - 1), rj(0, g.n_theta() - 1);
  const double dt = std::abs(a.time - b.time);
  double best = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const int i1 = ri(rng), j1 = rj(rng), i2 = ri(rng), j2 = rj(rng);
    const double dx = distance(g.point(i1, j1), g.point(i2, j2));
    const double den = std::pow(dx, alpha) + std::pow(dt, 0.5 * alpha);
    if (den == 0.0) continue;
    best = std::max(best, std::abs(a.at(i1, j1) - b.at(i2, j2)) / den);
  }
  return best;
}

inline RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const Grid g = cfg.grid();
  RunResult res;
  res.nonlinearity = catalog::make(cfg.nonlinearity, cfg.nonlinearity_params, cfg.dim);
  res.holder_alpha = res.nonlinearity.declared_alpha;
  AdiStepper stepper(g, res.nonlinearity, cfg.dt, cfg.scheme);
  std::mt19937_64 rng(cfg.seed);

  RunState state = stepper.initial_state(make_initial_field(g, cfg.initial));
  const long total = std::lround(cfg.t_end / cfg.dt);
  const long every = std::max(1L, std::lround(cfg.snapshot_every / cfg.dt));

  auto record = [&](const RunState& s, double min_dudt) {
    MonitorRecord m{s.step_index, s.field.time, s.monitors.min_u, s.monitors.max_u, min_dudt,
                    s.monitors.max_grad, s.monitors.boundary_max, 0.0};
    if (!res.snapshots.empty()) {
      m.holder_quotient = holder_quotient(s.field, res.snapshots.back(), res.holder_alpha, cfg.holder_pairs, rng);
    }
    res.log.push_back(m);
    res.snapshots.push_back(s.field);
  };

  record(state, 0.0);
  double min_dudt = std::numeric_limits<double>::infinity();
  for (long n = 1; n <= total; ++n) {
    state = stepper.step(state);
    min_dudt = std::min(min_dudt, state.monitors.min_dudt);
    if (n % every == 0 || n == total) {
      record(state, min_dudt);
      min_dudt = std::numeric_limits<double>::infinity();
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// omega-limit detection

struct OmegaLimit {
  bool converged = false;
  Field phi;                   // latest snapshot when converged
  double difference = 0;       // sup |u(t_last) - u(t_last - T_w)|
  double detection_time = -1;  // first snapshot time at which the window test passed (-1: never)
};

namespace detail {

// Index of the latest snapshot at least `window` older than snapshot k, or -1.
inline long window_partner(const std::vector<Field>& s, std::size_t k, double window) {
  const double target = s[k].time - window + 1e-9 * std::max(1.0, window);
  for (long m = static_cast<long>(k) - 1; m >= 0; --m) {
    if (s[m].time <= target) return m;
  }
  return -1;
}

inline double sup_difference(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

}  // namespace detail

inline OmegaLimit omega_limit(const std::vector<Field>& snapshots, double window, double eps_omega) {
  OmegaLimit out;
  if (snapshots.size() < 2) return out;
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const long m = detail::window_partner(snapshots, k, window);
    if (m < 0) continue;
    const double d = detail::sup_difference(snapshots[k], snapshots[m]);
    if (d < eps_omega && out.detection_time < 0.0) out.detection_time = snapshots[k].time;
    if (k + 1 == snapshots.size()) {
      out.difference = d;
      out.converged = d < eps_omega;
    }
  }
  if (out.converged) out.phi = snapshots.back();
  return out;
}

/// Largest |u| over a sequence of snapshots; the scale for relative tolerances.
inline double peak_magnitude(const std::vector<Field>& snapshots) {
  double m = 0.0;
  for (const auto& s : snapshots) m = std::max(m, s.max_abs());
  return m;
}

}  // namespace ellsym
