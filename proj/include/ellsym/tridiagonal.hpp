#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ellsym {

/// Thomas algorithm for a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i.
/// a[0] and c[n-1] are ignored. Requires a diagonally dominant system.
inline void solve_tridiagonal(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                              std::span<const double> d, std::span<double> x, std::vector<double>& scratch) {
  const std::size_t n = b.size();
  if (n == 0 || a.size() != n || c.size() != n || d.size() != n || x.size() != n) {
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  }
  scratch.resize(n);
  double denom = b[0];
  scratch[0] = c[0] / denom;
  x[0] = d[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = b[i] - a[i] * scratch[i - 1];
    scratch[i] = c[i] / denom;
    x[i] = (d[i] - a[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

/// Periodic tridiagonal system: a[0] couples x[n-1] into row 0 and c[n-1]
/// couples x[0] into row n-1. Sherman-Morrison on top of the Thomas solve.
class CyclicTridiagonal {
 public:
  void solve(std::span<const double> a, std::span<const double> b, std::span<const double> c,
             std::span<const double> d, std::span<double> x) {
    const std::size_t n = b.size();
    if (n < 3) throw std::invalid_argument("CyclicTridiagonal: need at least 3 unknowns");
    const double gamma = -b[0];
    const double alpha = c[n - 1];  // bottom-left corner
    const double beta = a[0];       // top-right corner
    bb_.assign(b.begin(), b.end());
    bb_[0] = b[0] - gamma;
    bb_[n - 1] = b[n - 1] - alpha * beta / gamma;
    u_.assign(n, 0.0);
    u_[0] = gamma;
    u_[n - 1] = alpha;
    z_.resize(n);
    solve_tridiagonal(a, bb_, c, d, x, scratch_);
    solve_tridiagonal(a, bb_, c, u_, z_, scratch_);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z_[0] + beta * z_[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z_[i];
  }

 private:
  std::vector<double> bb_, u_, z_, scratch_;
};

}  // namespace ellsym
