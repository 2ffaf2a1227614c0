// Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage or
// configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ellsym/analysis.hpp"
#include "ellsym/diagnostics.hpp"
#include "ellsym/io.hpp"
#include "ellsym/nonlinearity.hpp"
#include "ellsym/solver.hpp"
#include "ellsym/validation.hpp"

namespace fs = std::filesystem;
using namespace ellsym;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_check = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu.txt", k);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) throw UsageError("cannot write " + p.string());
  os << text;
}

int validate_geometry(long samples, std::uint64_t seed) {
  const auto r = geometry_suite(samples, seed);
  std::printf("samples %ld (Sigma points %ld)\n", r.samples, r.sigma_points);
  std::printf("max involution error %.3e\n", r.max_involution_error);
  std::printf("max ratio-identity residual %.3e\n", r.max_ratio_residual);
  std::printf("shrink violations %ld\n", r.shrink_violations);
  std::printf("max collapse error %.3e\n", r.max_collapse_error);
  if (!r.passed()) {
    std::printf("FAIL: geometry identities exceed %.0e\n", tol_geom);
    return exit_check;
  }
  std::printf("PASS\n");
  return exit_pass;
}

int validate_operator(long samples, std::uint64_t seed) {
  const auto r = operator_suite(samples, seed);
  std::printf("samples %ld\n", r.samples);
  std::printf("max Laplace-Beltrami invariance residual %.3e (finite-difference cross-check %.3e)\n",
              r.max_invariance_residual, r.max_invariance_residual_fd);
  std::printf("normal-derivative checks %d, max error %.3e\n", r.normal_checks, r.max_normal_error);
  if (!r.passed()) {
    std::printf("FAIL: operator residuals above tolerance\n");
    return exit_check;
  }
  std::printf("PASS\n");
  return exit_pass;
}

int check_nonlinearity(const std::string& config) {
  const AppConfig cfg = load_config(config);
  const auto f = catalog::make(cfg.run.nonlinearity, cfg.run.nonlinearity_params, cfg.run.dim);
  const auto h = check_hypotheses(f);
  std::printf("nonlinearity %s (N=%d)\n", f.name.c_str(), f.dim);
  std::printf("F1 Lipschitz on [-%g,%g]: %.6g, refined %.6g, %s\n", f.declared_M, f.declared_M, h.f1.constant,
              h.f1.constant_refined, h.f1.violated() ? "unstable" : "stable");
  std::printf("F2 Hoelder alpha=%g near tau=%g (eps0=%g): %.6g, refined %.6g, declared H=%g%s\n", h.f2.alpha,
              h.f2.tau, h.f2.eps0, h.f2.constant, h.f2.constant_refined, h.f2.declared_H,
              h.f2.exceeds_declared ? " (exceeded)" : "");
  std::printf("F3 %s (margin %.3e, tie tolerance %.1e); refined %s\n", to_string(h.f3.verdict), h.f3.margin,
              h.f3.tie_tolerance, to_string(h.f3_refined.verdict));
  if (h.f3.verdict == F3Verdict::fail || h.f3_refined.verdict == F3Verdict::fail) {
    std::printf("FAIL: F3 violated at r1=%g r2=%g s=%g t=%g\n", h.f3.r1, h.f3.r2, h.f3.s, h.f3.t);
    return exit_check;
  }
  if (h.f1.violated()) {
    std::printf("FAIL: F1 Lipschitz estimate unstable under refinement\n");
    return exit_check;
  }
  return exit_pass;
}

int simulate(const std::string& config, const std::string& out) {
  const AppConfig cfg = load_config(config);
  const fs::path dir(out);
  fs::create_directories(dir / "snapshots");
  const RunResult res = run(cfg.run);
  write_text(dir / "config.ini", write_config(cfg));
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    save_snapshot((dir / "snapshots" / snapshot_name(k)).string(), res.snapshots[k]);
  }
  std::ofstream mon(dir / "monitor.csv");
  write_monitor_csv(mon, res.log);
  const auto s = summarize(res.log);
  std::printf("steps %ld, snapshots %zu, t_end %g\n", res.log.back().step, res.snapshots.size(), res.log.back().t);
  std::printf("min u %.6g, max u %.6g, min discrete u_t %.3e, max |grad u| %.6g\n", s.min_u, s.max_u, s.min_dudt,
              s.max_grad);
  return exit_pass;
}

int sweep(const std::string& snapshot, const std::string& direction, double lambda_step, double tol_psi,
          const std::string& config, const std::string& out) {
  const Field phi = load_snapshot(snapshot);
  if (!config.empty() && load_config(config).run.dim != phi.grid.dim()) throw UsageError("dimension mismatch");
  const Point dir = direction_from_string(direction, phi.grid.dim());
  if (tol_psi <= 0.0) tol_psi = 10.0 * 1e-6 * phi.max_abs();
  auto rep = moving_plane_sweep(phi, dir, lambda_step, tol_psi);
  const auto mono = weighted_monotonicity(phi, phi.grid.dim(), 1e-3 * std::max(phi.max_abs(), 1e-300));
  rep.symmetry_deviation = mono.symmetry_deviation;
  rep.monotonicity = to_string(mono.status);
  const std::string text = to_json(rep).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_text(out, text);
  std::fprintf(stderr, "lambda0_est %g (step %g), lambda=0 check %s\n", rep.lambda0_est, lambda_step,
               rep.lambda_zero_pass ? "pass" : "fail");
  if (rep.lambda0_est > lambda_step * (1.0 + 1e-9) || !rep.lambda_zero_pass) {
    std::fprintf(stderr, "FAIL: psi_lambda negative beyond the first grid plane\n");
    return exit_check;
  }
  return exit_pass;
}

int report(const std::string& out) {
  const fs::path dir(out);
  const AppConfig cfg = load_config((dir / "config.ini").string());
  RunResult res;
  res.nonlinearity = catalog::make(cfg.run.nonlinearity, cfg.run.nonlinearity_params, cfg.run.dim);
  res.holder_alpha = res.nonlinearity.declared_alpha;
  {
    std::ifstream is(dir / "monitor.csv");
    if (!is) throw UsageError("cannot read " + (dir / "monitor.csv").string());
    res.log = read_monitor_csv(is, (dir / "monitor.csv").string());
  }
  for (std::size_t k = 0; k < res.log.size(); ++k) {
    Field f = load_snapshot((dir / "snapshots" / snapshot_name(k)).string());
    if (f.grid.dim() != cfg.run.dim) throw UsageError("dimension mismatch");
    res.snapshots.push_back(std::move(f));
  }
  if (res.snapshots.empty()) throw UsageError("no snapshots in " + dir.string());

  const Analysis a = analyze(res, cfg);
  std::vector<std::string> files{"config.ini", "monitor.csv", "timeseries.csv", "report.json"};
  {
    std::ofstream ts(dir / "timeseries.csv");
    write_timeseries_csv(ts, a.series);
  }
  for (std::size_t k = 0; k < a.sweeps.size(); ++k) {
    const std::string name = "sweep_" + cfg.diagnostics.directions[k] + ".json";
    write_text(dir / name, to_json(a.sweeps[k]).dump(2) + "\n");
    files.push_back(name);
  }
  files.push_back("snapshots/ (" + std::to_string(res.snapshots.size()) + " files)");
  write_text(dir / "report.json", run_report(cfg, res, a, files).dump(2) + "\n");
  std::printf("theorem verdict: %s (%s)\n", to_string(a.verdict.cls), a.verdict.reason.c_str());
  const bool ok = a.verdict.cls == TheoremClass::symmetric_monotone || a.verdict.cls == TheoremClass::trivial_limit;
  return ok ? exit_pass : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-plane symmetry checks for reaction-diffusion on the unit ball"};
  app.require_subcommand(1);

  long samples = 0;
  std::uint64_t seed = 7;
  std::string config, out, snapshot, direction = "x1";
  double lambda_step = default_lambda_step, tol_psi = 0.0;

  auto* vg = app.add_subcommand("validate-geometry", "Reflection and chart identities on random samples");
  vg->add_option("--samples", samples, "number of random (x, lambda) samples")->default_val(100000);
  vg->add_option("--seed", seed, "random seed")->default_val(7);

  auto* vo = app.add_subcommand("validate-operator", "Operator invariance and boundary normal-derivative checks");
  vo->add_option("--samples", samples, "number of random (x, lambda) samples")->default_val(1000);
  vo->add_option("--seed", seed, "random seed")->default_val(7);

  auto* cn = app.add_subcommand("check-nonlinearity", "F1/F2/F3 reports for the configured reaction term");
  cn->add_option("--config", config, "configuration file")->required();

  auto* sim = app.add_subcommand("simulate", "Run the solver and write snapshots and the monitor log");
  sim->add_option("--config", config, "configuration file")->required();
  sim->add_option("--out", out, "output directory")->required();

  auto* sw = app.add_subcommand("sweep", "Moving-plane sweep of a saved field");
  sw->add_option("--snapshot", snapshot, "snapshot file")->required();
  sw->add_option("--direction", direction, "x1, -x1 or angle:<radians> (N = 2)");
  sw->add_option("--lambda-step", lambda_step, "lambda grid step");
  sw->add_option("--tol-psi", tol_psi, "absolute tolerance on min psi (default 1e-5 * sup|phi|)");
  sw->add_option("--config", config, "configuration the snapshot must match");
  sw->add_option("--out", out, "write the JSON report here instead of stdout");

  auto* rp = app.add_subcommand("report", "Aggregate a simulate directory into a run report and verdict");
  rp->add_option("--out", out, "directory written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*vg) return validate_geometry(samples, seed);
    if (*vo) return validate_operator(samples, seed);
    if (*cn) return check_nonlinearity(config);
    if (*sim) return simulate(config, out);
    if (*sw) return sweep(snapshot, direction, lambda_step, tol_psi, config, out);
    if (*rp) return report(out);
  } catch (const BlowUpError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_check;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  }
  return exit_usage;
}
