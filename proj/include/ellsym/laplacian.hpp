#pragma once

// Second-order finite-volume Laplacian on the cell-centered (r, theta) mesh.
//
//   L u = r^{1-N} d/dr (r^{N-1} du/dr) + r^{-2} sin^{2-N}(th) d/dth (sin^{N-2}(th) du/dth)
//
// which is u_rr + (N-1) u_r / r + (u_thth + (N-2) cot(th) u_th) / r^2 for the
// axisymmetric reduction and u_rr + u_r/r + u_thth/r^2 for N = 2. Cell
// volumes are integrated exactly so that quadratics are reproduced up to the
// pole. The radial face at r = 0 has weight 0^{N-1} = 0, so the across-pole
// neighbour (theta + pi, resp. pi - theta) enters the innermost row with zero
// coefficient. At r = 1 the ghost value -u_{n-1} enforces u = 0 on the face.

#include <cmath>
#include <span>
#include <vector>

#include "ellsym/grid.hpp"

namespace ellsym {

class PolarLaplacian {
 public:
  explicit PolarLaplacian(const Grid& g) : grid_(g) {
    const int n = g.dim();
    const int nr = g.n_r();
    const int nt = g.n_theta();
    const double dr2 = g.dr() * g.dr();
    r_lo_.resize(nr);
    r_up_.resize(nr);
    r_diag_.resize(nr);
    for (int i = 0; i < nr; ++i) {
      const double rm = g.r_face(i), rp = g.r_face(i + 1);
      const double vol = (std::pow(rp, n) - std::pow(rm, n)) / (n * g.dr());
      r_lo_[i] = std::pow(rm, n - 1) / (dr2 * vol);
      r_up_[i] = std::pow(rp, n - 1) / (dr2 * vol);
      r_diag_[i] = -(r_lo_[i] + r_up_[i]);
    }
    r_diag_[nr - 1] -= r_up_[nr - 1];  // ghost u_n = -u_{n-1}

    const double dt2 = g.dtheta() * g.dtheta();
    t_lo_.resize(nt);
    t_up_.resize(nt);
    for (int j = 0; j < nt; ++j) {
      if (g.periodic()) {
        t_lo_[j] = t_up_[j] = 1.0 / dt2;
        continue;
      }
      const double tm = g.theta_face(j), tp = g.theta_face(j + 1);
      const double vol = detail::sin_power_integral(n - 2, tm, tp) / g.dtheta();
      const double bm = j == 0 ? 0.0 : std::pow(std::sin(tm), n - 2);
      const double bp = j == nt - 1 ? 0.0 : std::pow(std::sin(tp), n - 2);
      t_lo_[j] = bm / (dt2 * vol);
      t_up_[j] = bp / (dt2 * vol);
    }
    inv_r2_.resize(nr);
    for (int i = 0; i < nr; ++i) inv_r2_[i] = 1.0 / (g.r(i) * g.r(i));
  }

  const Grid& grid() const { return grid_; }

  // Radial stencil of row i: lo * u_{i-1} + diag * u_i + up * u_{i+1}.
  double radial_lo(int i) const { return r_lo_[i]; }
  double radial_up(int i) const { return r_up_[i]; }
  double radial_diag(int i) const { return r_diag_[i]; }

  // Angular stencil at (i, j): inv_r2(i) * (lo_j (u_{j-1} - u_j) + up_j (u_{j+1} - u_j)).
  double angular_lo(int j) const { return t_lo_[j]; }
  double angular_up(int j) const { return t_up_[j]; }
  double inv_r2(int i) const { return inv_r2_[i]; }

  void apply_radial(std::span<const double> u, std::span<double> out) const {
    const int nr = grid_.n_r(), nt = grid_.n_theta();
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) {
        const std::size_t k = grid_.index(i, j);
        double acc = r_diag_[i] * u[k];
        if (i > 0) acc += r_lo_[i] * u[k - nt];
        if (i < nr - 1) acc += r_up_[i] * u[k + nt];
        out[k] = acc;
      }
    }
  }

  void apply_angular(std::span<const double> u, std::span<double> out) const {
    const int nr = grid_.n_r(), nt = grid_.n_theta();
    for (int i = 0; i < nr; ++i) {
      const std::size_t row = grid_.index(i, 0);
      for (int j = 0; j < nt; ++j) {
        const int jm = grid_.periodic() ? (j + nt - 1) % nt : (j > 0 ? j - 1 : j);
        const int jp = grid_.periodic() ? (j + 1) % nt : (j < nt - 1 ? j + 1 : j);
        const double uj = u[row + j];
        out[row + j] = inv_r2_[i] * (t_lo_[j] * (u[row + jm] - uj) + t_up_[j] * (u[row + jp] - uj));
      }
    }
  }

  std::vector<double> apply(std::span<const double> u) const {
    std::vector<double> a(u.size()), b(u.size());
    apply_radial(u, a);
    apply_angular(u, b);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
  }

 private:
  Grid grid_;
  std::vector<double> r_lo_, r_up_, r_diag_;
  std::vector<double> t_lo_, t_up_;
  std::vector<double> inv_r2_;
};

/// Discrete Laplacian of a field with homogeneous Dirichlet data at r = 1.
inline std::vector<double> laplacian_axisym(const Field& field) {
  return PolarLaplacian(field.grid).apply(field.values);
}

}  // namespace ellsym
