#pragma once

// Reaction terms f(r, u, t) and sampled checks of the standing hypotheses:
//   (F1) Lipschitz in u, uniformly in (r, t) on |u| <= M;
//   (F2) Hoelder in (r, t) with exponents (alpha, alpha/2) on time windows;
//   (F3) g(r, s, t) = (1+r^2)^{(N+2)/2} f(r, (1+r^2)^{-(N-2)/2} s, t)
//        decreasing in r for every s > 0 and t >= 0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsym {

using ReactionFn = std::function<double(double r, double u, double t)>;

struct NonlinearitySpec {
  std::string name;
  int dim = 2;
  ReactionFn eval;
  std::map<std::string, double> params;
  double declared_alpha = 0.5;
  double declared_H = 10.0;
  double declared_eps0 = 0.1;
  double declared_M = 2.0;
  /// Closed form of g(r, s, t) when the catalog entry is built from one.
  std::function<double(double r, double s, double t)> g_closed;
  /// True when F3 is expected to fail for this entry (documents intent only).
  bool expects_f3 = true;

  double operator()(double r, double u, double t) const { return eval(r, u, t); }
};

/// Weight exponent (N-2)/2 of the transform u -> v.
inline double weight_exponent(int dim) { return 0.5 * (dim - 2); }

inline double g_transform(const NonlinearitySpec& f, double r, double s, double t, int dim) {
  const double q = 1.0 + r * r;
  return std::pow(q, 0.5 * (dim + 2)) * f(r, std::pow(q, -weight_exponent(dim)) * s, t);
}

namespace catalog {

inline std::vector<std::string> names() {
  return {"zero", "f3_logistic", "f3_source_only", "f3_time", "violates_f3_linear"};
}

namespace detail {

inline std::map<std::string, double> with_defaults(const std::string& name,
                                                   const std::map<std::string, double>& given) {
  std::map<std::string, double> p = {{"alpha", 0.5}, {"H", 10.0}, {"eps0", 0.1}, {"M", 2.0}};
  if (name == "f3_logistic" || name == "f3_time") {
    p.insert({{"kappa_a", 1.0}, {"kappa_g", 2.0}, {"K", 1.0}});
  } else if (name == "f3_source_only") {
    p.insert({"kappa_a", 1.0});
  } else if (name == "violates_f3_linear") {
    p.insert({"kappa", 1.0});
  } else if (name != "zero") {
    throw std::invalid_argument("unknown nonlinearity '" + name + "'");
  }
  for (const auto& [k, v] : given) {
    auto it = p.find(k);
    if (it == p.end()) throw std::invalid_argument("nonlinearity '" + name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("parameter '" + k + "' must be finite");
    it->second = v;
  }
  if (!(p["alpha"] > 0.0 && p["alpha"] < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(p["eps0"] > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(p["M"] > 0.0)) throw std::invalid_argument("M must be positive");
  if (p.count("K") && !(p["K"] > 0.0)) throw std::invalid_argument("K must be positive");
  return p;
}

}  // namespace detail

/// Build a catalog entry for dimension N.
///   f3_logistic:    f = (1+r^2)^{-(N+2)/2} [ka (2 - r^2) + kg s (1 - s/K)],  s = (1+r^2)^{(N-2)/2} u
///   f3_source_only: the kg = 0 case
///   f3_time:        f3_logistic with the logistic term scaled by b(t) = 1 - exp(-t)/2
///   violates_f3_linear: f = kappa u
///   zero:           f = 0
inline NonlinearitySpec make(const std::string& name, const std::map<std::string, double>& given, int dim) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  NonlinearitySpec f;
  f.name = name;
  f.dim = dim;
  f.params = detail::with_defaults(name, given);
  f.declared_alpha = f.params["alpha"];
  f.declared_H = f.params["H"];
  f.declared_eps0 = f.params["eps0"];
  f.declared_M = f.params["M"];

  const double up = 0.5 * (dim + 2);
  const double down = weight_exponent(dim);

  if (name == "zero") {
    f.eval = [](double, double, double) { return 0.0; };
    f.g_closed = [](double, double, double) { return 0.0; };
  } else if (name == "violates_f3_linear") {
    const double kappa = f.params["kappa"];
    f.eval = [kappa](double, double u, double) { return kappa * u; };
    f.g_closed = [kappa, up, down](double r, double s, double) {
      return kappa * std::pow(1.0 + r * r, up - down) * s;
    };
    f.expects_f3 = false;
  } else {
    const double ka = f.params["kappa_a"];
    const double kg = f.params.count("kappa_g") ? f.params["kappa_g"] : 0.0;
    const double cap = f.params.count("K") ? f.params["K"] : 1.0;
    const bool timed = name == "f3_time";
    auto b = [timed](double t) { return timed ? 1.0 - 0.5 * std::exp(-t) : 1.0; };
    auto g = [ka, kg, cap, b](double r, double s, double t) {
      return ka * (2.0 - r * r) + b(t) * kg * s * (1.0 - s / cap);
    };
    f.g_closed = g;
    f.eval = [g, up, down](double r, double u, double t) {
      const double q = 1.0 + r * r;
      return std::pow(q, -up) * g(r, std::pow(q, down) * u, t);
    };
  }
  return f;
}

}  // namespace catalog

enum class F3Verdict { pass_strict, pass_nonstrict, fail };

inline const char* to_string(F3Verdict v) {
  switch (v) {
    case F3Verdict::pass_strict: return "pass_strict";
    case F3Verdict::pass_nonstrict: return "pass_nonstrict";
    case F3Verdict::fail: return "fail";
  }
  return "?";
}

struct F3Sampling {
  int n_r = 32;
  int n_s = 16;
  int n_t = 16;
  double s_max = 0.0;  // 0: use M * 2^{(N-2)/2}
  double t_max = 10.0;

  F3Sampling refined() const { return {2 * n_r, 2 * n_s, 2 * n_t, s_max, t_max}; }
};

struct F3Report {
  F3Verdict verdict = F3Verdict::pass_strict;
  double r1 = 0, r2 = 0, s = 0, t = 0;  // worst adjacent pair, r1 < r2
  double margin = 0;                     // g(r2) - g(r1) at the worst pair
  double tie_tolerance = 0;
};

inline F3Report check_F3(const NonlinearitySpec& f, int dim, const F3Sampling& samp = {}) {
  if (samp.n_r < 16 || samp.n_s < 16 || samp.n_t < 16) {
    throw std::invalid_argument("check_F3: need at least 16 samples per axis");
  }
  const double s_max = samp.s_max > 0.0 ? samp.s_max : f.declared_M * std::pow(2.0, weight_exponent(dim));
  F3Report rep;
  rep.margin = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int is = 0; is < samp.n_s; ++is) {
    const double s = s_max * (is + 1.0) / samp.n_s;
    for (int it = 0; it < samp.n_t; ++it) {
      const double t = samp.t_max * it / (samp.n_t - 1.0);
      double prev = g_transform(f, 0.5 / samp.n_r, s, t, dim);
      scale = std::max(scale, std::abs(prev));
      for (int ir = 1; ir < samp.n_r; ++ir) {
        const double r2 = (ir + 0.5) / samp.n_r;
        const double cur = g_transform(f, r2, s, t, dim);
        scale = std::max(scale, std::abs(cur));
        const double diff = cur - prev;
        if (diff > rep.margin) {
          rep.margin = diff;
          rep.r1 = (ir - 0.5) / samp.n_r;
          rep.r2 = r2;
          rep.s = s;
          rep.t = t;
        }
        prev = cur;
      }
    }
  }
  rep.tie_tolerance = 1e-12 * std::max(1.0, scale);
  if (rep.margin > rep.tie_tolerance) rep.verdict = F3Verdict::fail;
  else if (rep.margin >= -rep.tie_tolerance) rep.verdict = F3Verdict::pass_nonstrict;
  else rep.verdict = F3Verdict::pass_strict;
  return rep;
}

struct F1Report {
  double constant = 0;          // sampled Lipschitz constant at the base resolution
  double constant_refined = 0;  // same at doubled resolution
  bool stable = true;           // refined / base < 1.1
  bool violated() const { return !stable || !std::isfinite(constant_refined); }
};

namespace detail {

inline double sampled_lipschitz(const NonlinearitySpec& f, double M, int n_u, int n_r, int n_t, double t_max) {
  double best = 0.0;
  for (int ir = 0; ir < n_r; ++ir) {
    const double r = (ir + 0.5) / n_r;
    for (int it = 0; it < n_t; ++it) {
      const double t = n_t > 1 ? t_max * it / (n_t - 1.0) : 0.0;
      double u_prev = -M;
      double f_prev = f(r, u_prev, t);
      for (int k = 1; k < n_u; ++k) {
        const double u = -M + 2.0 * M * k / (n_u - 1.0);
        const double fu = f(r, u, t);
        best = std::max(best, std::abs(fu - f_prev) / (u - u_prev));
        u_prev = u;
        f_prev = fu;
      }
    }
  }
  return best;
}

}  // namespace detail

struct F1Sampling {
  int n_u = 64;
  int n_r = 16;
  int n_t = 8;
  double t_max = 10.0;
};

inline F1Report check_F1(const NonlinearitySpec& f, double M, const F1Sampling& samp = {}) {
  if (!(M > 0.0)) throw std::invalid_argument("check_F1: M must be positive");
  F1Report rep;
  rep.constant = detail::sampled_lipschitz(f, M, samp.n_u, samp.n_r, samp.n_t, samp.t_max);
  rep.constant_refined =
      detail::sampled_lipschitz(f, M, 2 * samp.n_u, 2 * samp.n_r, 2 * samp.n_t, samp.t_max);
  if (rep.constant == 0.0) rep.stable = rep.constant_refined == 0.0;
  else rep.stable = rep.constant_refined / rep.constant < 1.1;
  return rep;
}

struct F2Report {
  double tau = 0;
  double eps0 = 0;
  double alpha = 0;
  double constant = 0;
  double constant_refined = 0;
  bool stable = true;
  double declared_H = 0;
  bool exceeds_declared = false;
};

struct F2Sampling {
  int n_r = 12;
  int n_t = 12;
  int n_u = 6;
};

namespace detail {

inline double sampled_hoelder(const NonlinearitySpec& f, double tau, double eps0, double alpha, double M,
                              const F2Sampling& s) {
  struct Node { double r, t; };
  std::vector<Node> nodes;
  for (int ir = 0; ir < s.n_r; ++ir)
    for (int it = 0; it < s.n_t; ++it)
      nodes.push_back({(ir + 0.5) / s.n_r, tau - eps0 + 2.0 * eps0 * it / (s.n_t - 1.0)});
  double best = 0.0;
  std::vector<double> vals(nodes.size());
  for (int iu = 0; iu < s.n_u; ++iu) {
    const double u = M * (iu + 1.0) / s.n_u;
    for (std::size_t k = 0; k < nodes.size(); ++k) vals[k] = f(nodes[k].r, u, nodes[k].t);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        const double den = std::pow(std::abs(nodes[a].r - nodes[b].r), alpha) +
                           std::pow(std::abs(nodes[a].t - nodes[b].t), 0.5 * alpha);
        best = std::max(best, std::abs(vals[a] - vals[b]) / den);
      }
    }
  }
  return best;
}

}  // namespace detail

inline F2Report check_F2(const NonlinearitySpec& f, double tau, const F2Sampling& samp = {}) {
  const double eps0 = f.declared_eps0;
  if (!(tau > eps0)) throw std::invalid_argument("check_F2: tau must exceed eps0");
  F2Report rep;
  rep.tau = tau;
  rep.eps0 = eps0;
  rep.alpha = f.declared_alpha;
  rep.declared_H = f.declared_H;
  rep.constant = detail::sampled_hoelder(f, tau, eps0, f.declared_alpha, f.declared_M, samp);
  F2Sampling fine{2 * samp.n_r, 2 * samp.n_t, samp.n_u};
  rep.constant_refined = detail::sampled_hoelder(f, tau, eps0, f.declared_alpha, f.declared_M, fine);
  if (rep.constant == 0.0) rep.stable = rep.constant_refined == 0.0;
  else rep.stable = rep.constant_refined / rep.constant < 1.1;
  rep.exceeds_declared = std::max(rep.constant, rep.constant_refined) > rep.declared_H;
  return rep;
}

}  // namespace ellsym
