#pragma once

// Post-processing of a run: hypothesis checks on the reaction term,
// omega-limit detection, moving-plane diagnostics, the time series of
// symmetry measures and the structured run report.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ellsym/diagnostics.hpp"
#include "ellsym/io.hpp"
#include "ellsym/nonlinearity.hpp"
#include "ellsym/solver.hpp"

namespace ellsym {

inline constexpr double dudt_tolerance = 1e-10;
inline constexpr double f2_tau = 1.0;

struct HypothesisChecks {
  F1Report f1;
  F2Report f2;
  F3Report f3;
  F3Report f3_refined;
};

inline HypothesisChecks check_hypotheses(const NonlinearitySpec& f) {
  HypothesisChecks h;
  h.f1 = check_F1(f, f.declared_M);
  h.f2 = check_F2(f, f2_tau);
  h.f3 = check_F3(f, f.dim);
  h.f3_refined = check_F3(f, f.dim, F3Sampling{}.refined());
  return h;
}

/// Absolute tolerances derived from a run; every verdict echoes them.
struct Tolerances {
  double peak = 0;
  double eps_omega = 0;
  double tol_psi = 0;
  double tol_sym = 0;
  double monotonicity_gate = 0;
  double positivity = 0;
  double deviation_floor = 0;  // roundoff slack for the non-increasing check
};

struct Analysis {
  HypothesisChecks hypotheses;
  Tolerances tol;
  OmegaLimit omega;
  MonotonicityReport monotonicity;
  std::vector<SweepReport> sweeps;
  std::vector<TimeseriesRow> series;
  bool deviation_non_increasing = false;  // over the last half of the run
  TheoremVerdict verdict;
};

/// The snapshot sweep for the time series uses the first configured direction only.
inline std::vector<TimeseriesRow> symmetry_timeseries(const RunResult& res, const AppConfig& cfg, double tol_psi) {
  std::vector<TimeseriesRow> rows;
  const Point dir = direction_from_string(cfg.diagnostics.directions.front(), cfg.run.dim);
  const auto lambdas = lambda_grid(cfg.diagnostics.lambda_step);
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    const Field& s = res.snapshots[k];
    const auto sw = moving_plane_sweep(s, dir, lambdas, tol_psi, cfg.diagnostics.lambda_step);
    rows.push_back({s.time, symmetry_deviation(s), res.log[k].min_dudt, res.log[k].min_u, sw.lambda0_est});
  }
  return rows;
}

inline Analysis analyze(const RunResult& res, const AppConfig& cfg) {
  Analysis a;
  const DiagnosticsConfig& d = cfg.diagnostics;
  a.hypotheses = check_hypotheses(res.nonlinearity);

  Tolerances& t = a.tol;
  t.peak = peak_magnitude(res.snapshots);
  t.eps_omega = d.eps_omega * t.peak;
  t.tol_psi = d.tol_psi > 0.0 ? d.tol_psi : 10.0 * t.eps_omega;
  t.monotonicity_gate = 10.0 * t.eps_omega;
  t.positivity = 0.0;
  t.deviation_floor = 64.0 * std::numeric_limits<double>::epsilon() * t.peak;

  a.omega = omega_limit(res.snapshots, d.omega_window, t.eps_omega);
  a.series = symmetry_timeseries(res, cfg, t.tol_psi);
  std::vector<double> dev;
  for (const auto& r : a.series) dev.push_back(r.symmetry_deviation);
  a.deviation_non_increasing = non_increasing(dev, dev.size() / 2, t.deviation_floor);

  if (a.omega.converged) {
    t.tol_sym = d.tol_sym * a.omega.phi.max_abs();
    a.monotonicity = weighted_monotonicity(a.omega.phi, cfg.run.dim, t.monotonicity_gate);
    for (const auto& name : d.directions) {
      auto sw = moving_plane_sweep(a.omega.phi, direction_from_string(name, cfg.run.dim), d.lambda_step, t.tol_psi);
      sw.symmetry_deviation = a.monotonicity.symmetry_deviation;
      sw.monotonicity = to_string(a.monotonicity.status);
      a.sweeps.push_back(std::move(sw));
    }
  }

  VerdictInputs in;
  in.f3 = a.hypotheses.f3.verdict == F3Verdict::fail || a.hypotheses.f3_refined.verdict == F3Verdict::fail
              ? F3Verdict::fail
              : a.hypotheses.f3.verdict;
  in.f1_ok = !a.hypotheses.f1.violated();
  in.omega = a.omega;
  in.log = res.log;
  in.sweeps = a.sweeps;
  in.monotonicity = a.monotonicity;
  in.eps_omega = t.eps_omega;
  in.tol_sym = t.tol_sym;
  in.lambda_step = d.lambda_step;
  in.positivity_tolerance = t.positivity;
  in.dudt_tolerance = dudt_tolerance;
  in.monotone_time_expected = d.monotone_time;
  a.verdict = theorem_verdict(in);
  return a;
}

struct MonitorSummary {
  double min_u = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double min_dudt = std::numeric_limits<double>::infinity();
  double max_grad = 0;
  double boundary_max = 0;
  double holder_quotient = 0;
};

inline MonitorSummary summarize(const std::vector<MonitorRecord>& log) {
  MonitorSummary s;
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& m = log[k];
    s.min_u = std::min(s.min_u, m.min_u);
    s.max_u = std::max(s.max_u, m.max_u);
    if (k > 0) s.min_dudt = std::min(s.min_dudt, m.min_dudt);
    s.max_grad = std::max(s.max_grad, m.max_grad);
    s.boundary_max = std::max(s.boundary_max, m.boundary_max);
    s.holder_quotient = std::max(s.holder_quotient, m.holder_quotient);
  }
  return s;
}

inline nlohmann::json run_report(const AppConfig& cfg, const RunResult& res, const Analysis& a,
                                 const std::vector<std::string>& files) {
  using nlohmann::json;
  const auto& h = a.hypotheses;
  const auto ms = summarize(res.log);
  const auto& t = a.tol;
  auto f3_json = [](const F3Report& r) {
    return json{{"verdict", to_string(r.verdict)}, {"margin", r.margin}, {"tie_tolerance", r.tie_tolerance},
                {"worst_pair", {{"r1", r.r1}, {"r2", r.r2}, {"s", r.s}, {"t", r.t}}}};
  };
  json sweeps = json::array();
  for (const auto& s : a.sweeps) sweeps.push_back(to_json(s));
  return {
      {"config", {{"text", write_config(cfg)}, {"nonlinearity", res.nonlinearity.name}, {"params", res.nonlinearity.params}}},
      {"monitors",
       {{"min_u", ms.min_u},
        {"max_u", ms.max_u},
        {"min_dudt", detail::finite_or_null(ms.min_dudt)},
        {"max_grad", ms.max_grad},
        {"boundary_max", ms.boundary_max},
        {"holder_quotient", ms.holder_quotient},
        {"holder_alpha", res.holder_alpha}}},
      {"hypotheses",
       {{"F1",
         {{"constant", h.f1.constant},
          {"constant_refined", h.f1.constant_refined},
          {"stability_ratio_limit", 1.1},
          {"M", res.nonlinearity.declared_M},
          {"pass", !h.f1.violated()}}},
        {"F2",
         {{"tau", h.f2.tau},
          {"eps0", h.f2.eps0},
          {"alpha", h.f2.alpha},
          {"constant", h.f2.constant},
          {"constant_refined", h.f2.constant_refined},
          {"declared_H", h.f2.declared_H},
          {"stable", h.f2.stable},
          {"exceeds_declared", h.f2.exceeds_declared}}},
        {"F3", f3_json(h.f3)},
        {"F3_refined", f3_json(h.f3_refined)},
        {"positivity", {{"min_u", ms.min_u}, {"tolerance", t.positivity}, {"pass", ms.min_u >= -t.positivity}}},
        {"u_t_nonnegative",
         {{"min_dudt", detail::finite_or_null(ms.min_dudt)},
          {"tolerance", dudt_tolerance},
          {"pass", !(ms.min_dudt < -dudt_tolerance)},
          {"enforced_in_verdict", cfg.diagnostics.monotone_time}}},
        {"gradient_bound", {{"max_grad", ms.max_grad}, {"pass", std::isfinite(ms.max_grad)}}}}},
      {"diagnostics",
       {{"tolerances",
         {{"peak", t.peak},
          {"eps_omega", t.eps_omega},
          {"eps_omega_relative", cfg.diagnostics.eps_omega},
          {"omega_window", cfg.diagnostics.omega_window},
          {"tol_psi", t.tol_psi},
          {"tol_sym", t.tol_sym},
          {"monotonicity_gate", t.monotonicity_gate},
          {"deviation_floor", t.deviation_floor},
          {"lambda_step", cfg.diagnostics.lambda_step}}},
        {"omega_limit",
         {{"converged", a.omega.converged},
          {"difference", a.omega.difference},
          {"detection_time", a.omega.detection_time},
          {"sup_phi", a.omega.converged ? a.omega.phi.max_abs() : 0.0}}},
        {"symmetry_deviation_non_increasing", a.deviation_non_increasing},
        {"monotonicity", to_json(a.monotonicity)},
        {"sweeps", sweeps}}},
      {"theorem_verdict", {{"class", to_string(a.verdict.cls)}, {"reason", a.verdict.reason}}},
      {"files", files},
  };
}

}  // namespace ellsym
