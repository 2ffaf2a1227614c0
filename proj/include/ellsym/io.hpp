#pragma once

// Plain-text persistence: snapshots, run configuration files, CSV series and
// JSON reports.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ellsym/diagnostics.hpp"
#include "ellsym/grid.hpp"
#include "ellsym/solver.hpp"

namespace ellsym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Shortest text with 17 significant digits; strtod reads it back bit-exactly.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

inline bool parse_long(const std::string& s, long& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Snapshots: header `N n_r n_theta time`, then n_r*n_theta rows `i j r theta u`.

inline void write_snapshot(std::ostream& os, const Field& f) {
  const Grid& g = f.grid;
  os << g.dim() << ' ' << g.n_r() << ' ' << g.n_theta() << ' ' << fmt_double(f.time) << '\n';
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j)
      os << i << ' ' << j << ' ' << fmt_double(g.r(i)) << ' ' << fmt_double(g.theta(j)) << ' '
         << fmt_double(f.at(i, j)) << '\n';
}

inline Field read_snapshot(std::istream& is, const std::string& source = "snapshot") {
  std::string line;
  int ln = 0;
  auto tokens = [](const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> t;
    for (std::string w; ss >> w;) t.push_back(w);
    return t;
  };
  while (std::getline(is, line)) {
    ++ln;
    if (!detail::trim(line).empty()) break;
  }
  auto h = tokens(line);
  long dim = 0, nr = 0, nt = 0;
  double time = 0;
  if (h.size() != 4 || !detail::parse_long(h[0], dim) || !detail::parse_long(h[1], nr) ||
      !detail::parse_long(h[2], nt) || !detail::parse_double(h[3], time)) {
    throw ParseError(source, ln, "malformed header, expected 'N n_r n_theta time'");
  }
  Grid g;
  try {
    g = Grid(static_cast<int>(dim), static_cast<int>(nr), static_cast<int>(nt));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, ln, e.what());
  }
  Field f(g, time);
  const std::size_t expected = g.size();
  std::size_t rows = 0;
  while (rows < expected && std::getline(is, line)) {
    ++ln;
    auto t = tokens(line);
    if (t.empty()) continue;
    long i = 0, j = 0;
    double r = 0, th = 0, u = 0;
    if (t.size() != 5 || !detail::parse_long(t[0], i) || !detail::parse_long(t[1], j) ||
        !detail::parse_double(t[2], r) || !detail::parse_double(t[3], th) || !detail::parse_double(t[4], u)) {
      throw ParseError(source, ln, "malformed row, expected 'i j r theta u'");
    }
    const long ei = static_cast<long>(rows) / nt, ej = static_cast<long>(rows) % nt;
    if (i != ei || j != ej) {
      throw ParseError(source, ln, "row index (" + t[0] + "," + t[1] + ") out of order");
    }
    if (std::abs(r - g.r(static_cast<int>(i))) > 1e-12 || std::abs(th - g.theta(static_cast<int>(j))) > 1e-12) {
      throw ParseError(source, ln, "coordinates do not match the grid");
    }
    if (!std::isfinite(u)) throw ParseError(source, ln, "non-finite value");
    f.at(static_cast<int>(i), static_cast<int>(j)) = u;
    ++rows;
  }
  if (rows != expected) {
    throw ParseError(source, ln,
                     "expected n_r·n_theta rows (" + std::to_string(expected) + "), found " + std::to_string(rows));
  }
  while (std::getline(is, line)) {
    ++ln;
    if (!detail::trim(line).empty()) throw ParseError(source, ln, "trailing data after the last row");
  }
  return f;
}

inline void save_snapshot(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_snapshot(os, f);
  if (!os) throw std::runtime_error("write failed for " + path);
}

inline Field load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_snapshot(is, path);
}

// ---------------------------------------------------------------------------
// Configuration files

struct DiagnosticsConfig {
  double lambda_step = default_lambda_step;
  double eps_omega = 1e-6;      // relative to the run's peak |u|
  double tol_psi = 0;           // absolute; 0 means 10 * eps_omega * peak
  double tol_sym = 1e-3;        // relative to sup|phi|
  double omega_window = 0.5;
  bool monotone_time = false;   // judge the u_t >= 0 monitor in the verdict
  std::vector<std::string> directions{"x1", "-x1"};
};

struct AppConfig {
  RunConfig run;
  DiagnosticsConfig diagnostics;
};

/// Sweep direction from its config/CLI name: x1, -x1 or angle:<radians> (N = 2).
inline Point direction_from_string(const std::string& s, int dim) {
  if (s == "x1" || s == "+x1") return Point::axis(dim, 0);
  if (s == "-x1") return Point::axis(dim, 0, -1.0);
  if (s.rfind("angle:", 0) == 0 && dim == 2) {
    double a = 0;
    if (detail::parse_double(s.substr(6), a) && std::isfinite(a)) return Point{std::cos(a), std::sin(a)};
  }
  throw std::invalid_argument("unknown direction '" + s + "'");
}

namespace detail {

struct ConfigBuilder {
  std::string source;
  AppConfig cfg;
  bool dim_seen = false;

  [[noreturn]] void fail(int ln, const std::string& msg) const { throw ParseError(source, ln, msg); }

  double number(int ln, const std::string& key, const std::string& v) const {
    double x = 0;
    if (!parse_double(v, x)) fail(ln, "invalid value for " + key + ": '" + v + "'");
    if (!std::isfinite(x)) fail(ln, key + " must be finite");
    return x;
  }
  long integer(int ln, const std::string& key, const std::string& v) const {
    long x = 0;
    if (!parse_long(v, x)) fail(ln, "invalid integer for " + key + ": '" + v + "'");
    return x;
  }
  double positive(int ln, const std::string& key, const std::string& v) const {
    const double x = number(ln, key, v);
    if (!(x > 0.0)) fail(ln, key + " must be positive");
    return x;
  }

  void set(const std::string& section, int ln, const std::string& key, const std::string& v) {
    RunConfig& r = cfg.run;
    DiagnosticsConfig& d = cfg.diagnostics;
    if (section == "grid") {
      if (key == "dimension") {
        r.dim = static_cast<int>(integer(ln, key, v));
        if (r.dim < 2) fail(ln, "dimension must be >= 2");
        dim_seen = true;
      } else if (key == "n_r") {
        r.n_r = static_cast<int>(integer(ln, key, v));
        if (r.n_r < 16) fail(ln, "n_r must be >= 16");
      } else if (key == "n_theta") {
        r.n_theta = static_cast<int>(integer(ln, key, v));
        if (r.n_theta < 8) fail(ln, "n_theta must be >= 8");
      } else {
        fail(ln, "unknown key '" + key + "' in [grid]");
      }
    } else if (section == "run") {
      if (key == "dt") r.dt = positive(ln, key, v);
      else if (key == "t_end") r.t_end = positive(ln, key, v);
      else if (key == "snapshot_every") r.snapshot_every = positive(ln, key, v);
      else if (key == "seed") {
        const long s = integer(ln, key, v);
        if (s < 0) fail(ln, "seed must be non-negative");
        r.seed = static_cast<std::uint64_t>(s);
      } else if (key == "holder_pairs") {
        r.holder_pairs = static_cast<int>(integer(ln, key, v));
        if (r.holder_pairs < 0) fail(ln, "holder_pairs must be non-negative");
      } else if (key == "scheme") {
        try {
          r.scheme = adi_scheme_from_string(v);
        } catch (const std::invalid_argument& e) {
          fail(ln, e.what());
        }
      } else {
        fail(ln, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "nonlinearity") {
      if (key == "name") r.nonlinearity = v;
      else if (key.rfind("params.", 0) == 0 && key.size() > 7) r.nonlinearity_params[key.substr(7)] = number(ln, key, v);
      else fail(ln, "unknown key '" + key + "' in [nonlinearity]");
    } else if (section == "initial") {
      if (key == "ic_name") r.initial.name = v;
      else if (key.rfind("ic_params.", 0) == 0 && key.size() > 10) r.initial.params[key.substr(10)] = number(ln, key, v);
      else fail(ln, "unknown key '" + key + "' in [initial]");
    } else if (section == "diagnostics") {
      if (key == "lambda_step") {
        d.lambda_step = positive(ln, key, v);
        if (!(d.lambda_step < 1.0)) fail(ln, "lambda_step must lie in (0,1)");
      } else if (key == "tol_psi") {
        d.tol_psi = number(ln, key, v);
        if (d.tol_psi < 0.0) fail(ln, "tol_psi must be non-negative");
      } else if (key == "eps_omega") d.eps_omega = positive(ln, key, v);
      else if (key == "tol_sym") d.tol_sym = positive(ln, key, v);
      else if (key == "omega_window") d.omega_window = positive(ln, key, v);
      else if (key == "monotone_time") {
        if (v != "true" && v != "false") fail(ln, "monotone_time must be true or false");
        d.monotone_time = v == "true";
      } else if (key == "directions") {
        d.directions.clear();
        std::istringstream ss(v);
        for (std::string w; std::getline(ss, w, ',');) {
          w = trim(w);
          if (w.empty()) fail(ln, "empty entry in directions");
          d.directions.push_back(w);
        }
        if (d.directions.empty()) fail(ln, "directions must not be empty");
      } else {
        fail(ln, "unknown key '" + key + "' in [diagnostics]");
      }
    } else {
      fail(ln, "key '" + key + "' outside a known section");
    }
  }
};

}  // namespace detail

/// Grammar: `[section]` headers and `key = value` lines; `#` starts a comment.
/// Sections [grid], [run], [nonlinearity], [initial], [diagnostics].
inline AppConfig parse_config(std::istream& is, const std::string& source = "config") {
  static const std::vector<std::string> sections{"grid", "run", "nonlinearity", "initial", "diagnostics"};
  detail::ConfigBuilder b{source, {}, false};
  std::string section, line;
  std::map<std::string, int> seen;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') b.fail(ln, "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        b.fail(ln, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) b.fail(ln, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) b.fail(ln, "missing key");
    if (value.empty()) b.fail(ln, "missing value for " + key);
    if (section.empty()) b.fail(ln, "key '" + key + "' before any section");
    const std::string full = section + "." + key;
    if (seen.count(full)) b.fail(ln, "duplicate key '" + key + "' (first on line " + std::to_string(seen[full]) + ")");
    seen[full] = ln;
    b.set(section, ln, key, value);
  }

  AppConfig& c = b.cfg;
  auto line_of = [&](const std::string& k) { return seen.count(k) ? seen[k] : 0; };
  try {
    (void)c.run.grid();
  } catch (const std::invalid_argument& e) {
    b.fail(line_of("grid.n_theta"), e.what());
  }
  try {
    (void)catalog::make(c.run.nonlinearity, c.run.nonlinearity_params, c.run.dim);
  } catch (const std::exception& e) {
    b.fail(line_of("nonlinearity.name"), e.what());
  }
  try {
    (void)make_initial_field(Grid(c.run.dim, 16, 8), c.run.initial);
  } catch (const std::exception& e) {
    b.fail(line_of("initial.ic_name"), e.what());
  }
  for (const auto& d : c.diagnostics.directions) {
    try {
      detail::check_sweep_direction(c.run.grid(), direction_from_string(d, c.run.dim));
    } catch (const std::exception& e) {
      b.fail(line_of("diagnostics.directions"), e.what());
    }
  }
  return c;
}

inline AppConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return parse_config(is, path);
}

/// Canonical text form; parse_config(write_config(c)) == c.
inline std::string write_config(const AppConfig& c) {
  std::ostringstream os;
  const RunConfig& r = c.run;
  os << "[grid]\ndimension = " << r.dim << "\nn_r = " << r.n_r << "\nn_theta = " << r.n_theta << "\n\n";
  os << "[run]\ndt = " << fmt_double(r.dt) << "\nt_end = " << fmt_double(r.t_end)
     << "\nsnapshot_every = " << fmt_double(r.snapshot_every) << "\nseed = " << r.seed
     << "\nholder_pairs = " << r.holder_pairs << "\nscheme = " << to_string(r.scheme) << "\n\n";
  os << "[nonlinearity]\nname = " << r.nonlinearity << '\n';
  for (const auto& [k, v] : r.nonlinearity_params) os << "params." << k << " = " << fmt_double(v) << '\n';
  os << "\n[initial]\nic_name = " << r.initial.name << '\n';
  for (const auto& [k, v] : r.initial.params) os << "ic_params." << k << " = " << fmt_double(v) << '\n';
  const DiagnosticsConfig& d = c.diagnostics;
  os << "\n[diagnostics]\nlambda_step = " << fmt_double(d.lambda_step) << "\neps_omega = " << fmt_double(d.eps_omega)
     << "\ntol_psi = " << fmt_double(d.tol_psi) << "\ntol_sym = " << fmt_double(d.tol_sym)
     << "\nomega_window = " << fmt_double(d.omega_window) << "\nmonotone_time = " << (d.monotone_time ? "true" : "false")
     << "\ndirections = ";
  for (std::size_t k = 0; k < d.directions.size(); ++k) os << (k ? "," : "") << d.directions[k];
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* monitor_csv_header = "step,t,min_u,max_u,min_dudt,max_grad,boundary_max,holder_quotient";

inline void write_monitor_csv(std::ostream& os, const std::vector<MonitorRecord>& log) {
  os << monitor_csv_header << '\n';
  for (const auto& m : log) {
    os << m.step << ',' << fmt_double(m.t) << ',' << fmt_double(m.min_u) << ',' << fmt_double(m.max_u) << ','
       << fmt_double(m.min_dudt) << ',' << fmt_double(m.max_grad) << ',' << fmt_double(m.boundary_max) << ','
       << fmt_double(m.holder_quotient) << '\n';
  }
}

inline std::vector<MonitorRecord> read_monitor_csv(std::istream& is, const std::string& source = "monitor.csv") {
  std::string line;
  int ln = 1;
  if (!std::getline(is, line) || detail::trim(line) != monitor_csv_header) {
    throw ParseError(source, ln, std::string("expected header '") + monitor_csv_header + "'");
  }
  std::vector<MonitorRecord> log;
  while (std::getline(is, line)) {
    ++ln;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(detail::trim(c));
    if (cells.size() != 8) throw ParseError(source, ln, "expected 8 columns");
    MonitorRecord m;
    double* fields[] = {&m.t, &m.min_u, &m.max_u, &m.min_dudt, &m.max_grad, &m.boundary_max, &m.holder_quotient};
    if (!detail::parse_long(cells[0], m.step)) throw ParseError(source, ln, "invalid step");
    for (int k = 0; k < 7; ++k)
      if (!detail::parse_double(cells[k + 1], *fields[k])) throw ParseError(source, ln, "invalid number");
    log.push_back(m);
  }
  return log;
}

struct TimeseriesRow {
  double t = 0;
  double symmetry_deviation = 0;
  double min_dudt = 0;
  double min_u = 0;
  double lambda0_est = 0;
};

inline void write_timeseries_csv(std::ostream& os, const std::vector<TimeseriesRow>& rows) {
  os << "t,symmetry_deviation,min_dudt,min_u,lambda0_est\n";
  for (const auto& r : rows) {
    os << fmt_double(r.t) << ',' << fmt_double(r.symmetry_deviation) << ',' << fmt_double(r.min_dudt) << ','
       << fmt_double(r.min_u) << ',' << fmt_double(r.lambda0_est) << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

inline nlohmann::json array_or_null(const std::vector<double>& v) {
  auto a = nlohmann::json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

}  // namespace detail

inline nlohmann::json to_json(const SweepReport& s) {
  return {
      {"direction", s.direction.coords()},
      {"lambda_step", s.lambda_step},
      {"tol_psi", s.tol_psi},
      {"lambda_grid", s.lambdas},
      {"min_psi", detail::array_or_null(s.min_psi)},
      {"normal_derivative", detail::array_or_null(s.normal_derivative)},
      {"cells", s.cells},
      {"notes", s.notes},
      {"lambda0_est", s.lambda0_est},
      {"lambda_zero", {{"min_psi", s.min_psi_zero}, {"pass", s.lambda_zero_pass}}},
      {"hopf_pass", s.hopf_pass},
      {"verdicts", {{"symmetry_deviation", s.symmetry_deviation}, {"monotonicity", s.monotonicity}}},
  };
}

inline nlohmann::json to_json(const MonotonicityReport& m) {
  return {{"status", to_string(m.status)},
          {"gate", m.gate},
          {"symmetry_deviation", m.symmetry_deviation},
          {"first_violation", m.first_violation},
          {"radii", m.radii},
          {"profile", m.profile}};
}

}  // namespace ellsym
