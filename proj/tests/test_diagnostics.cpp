#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ellsym/diagnostics.hpp"

using namespace ellsym;

TEST(Barrier, RingValues) {
  const auto s = make_barrier(0.5, 0.05);
  EXPECT_DOUBLE_EQ(s.m, 1.0 / (2.0 * 0.05 * 0.05));
  const auto p = plane_param(0.5, 2);
  EXPECT_NEAR(barrier_phi(p.center() + 1.25 * Point{1.0, 0.0}, s), 1.0, 1e-15);
  EXPECT_NEAR(barrier_phi(p.center() + 1.30 * Point{1.0, 0.0}, s), std::cos(1.0), 1e-12);
  EXPECT_NEAR(std::cos(1.0), 0.540302, 1e-6);
  const double mid = barrier_phi(p.center() + 1.275 * Point{1.0, 0.0}, s);
  EXPECT_GT(mid, std::cos(1.0));
  EXPECT_LT(mid, 1.0);
  EXPECT_THROW(barrier_phi(p.center() + 1.2 * Point{1.0, 0.0}, s), std::domain_error);
  EXPECT_THROW(barrier_phi(p.center() + 1.4 * Point{1.0, 0.0}, s), std::domain_error);
}

TEST(Barrier, WorkedRatio) {
  const auto s = make_barrier(0.5, 0.05);
  const double expected = (-400.0 * std::cos(0.5) - std::sin(0.5) / (1.275 * 0.05)) / std::cos(0.5);
  EXPECT_NEAR(barrier_ratio(1.275, s, 2), expected, 1e-10);
  EXPECT_NEAR(barrier_ratio(1.275, s, 2), -408.57, 0.005);
}

TEST(Barrier, RatioMatchesFiniteDifferenceLaplacian) {
  const auto s = make_barrier(0.4, 0.1);
  const auto p = plane_param(0.4, 3);
  const Point x = p.center() + (p.radius() + 0.05) * Point{std::cos(0.1), std::sin(0.1), 0.0};
  const double h = 1e-4;
  double lap = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const Point e = Point::axis(3, k, h);
    lap += (barrier_phi(x + e, s) - 2.0 * barrier_phi(x, s) + barrier_phi(x - e, s)) / (h * h);
  }
  EXPECT_NEAR(lap / barrier_phi(x, s), barrier_ratio((x - p.center()).norm(), s, 3), 1e-3);
}

TEST(Barrier, BoundHoldsOnTheParameterTable) {
  for (double delta : {0.01, 0.05, 0.1})
    for (double lambda : {0.2, 0.5, 0.8})
      for (int dim : {2, 3}) {
        const auto rep = barrier_bound_check(make_barrier(lambda, delta), dim, 1000);
        EXPECT_TRUE(rep.holds) << delta << " " << lambda << " " << dim;
        EXPECT_EQ(rep.samples, 1000);
        EXPECT_LT(rep.worst_ratio, rep.bound);
        if (delta == 0.1) {
          EXPECT_LT(rep.worst_ratio, -100.0);
        }
      }
}

TEST(Barrier, ThreeDimensionsIsMoreNegative) {
  const auto s = make_barrier(0.5, 0.05);
  for (double rho : {1.26, 1.275, 1.29}) EXPECT_LT(barrier_ratio(rho, s, 3), barrier_ratio(rho, s, 2));
}

TEST(Barrier, RejectsWideAnnulus) {
  EXPECT_THROW(barrier_bound_check(make_barrier(0.5, 0.3), 2), std::domain_error);
  EXPECT_THROW(make_barrier(0.0, 0.1), std::domain_error);
}

TEST(SymmetryDeviation, Examples) {
  const Grid g(2, 64, 64);
  EXPECT_LT(symmetry_deviation(sample(g, [](const Point& x) { return std::exp(-x.norm2()); })), 1e-15);
  EXPECT_EQ(symmetry_deviation(Field(g)), 0.0);
  // (1-r^2)(1 + 0.5 r cos(theta)): spread r(1-r^2), maximal 2/(3 sqrt 3) at r = 1/sqrt 3.
  const Field f = sample(g, [](const Point& x) { return (1.0 - x.norm2()) * (1.0 + 0.5 * x[0]); });
  EXPECT_NEAR(symmetry_deviation(f), 2.0 / (3.0 * std::sqrt(3.0)), 2e-3);
}

TEST(SymmetryDeviation, InvariantUnderAngularShift) {
  const Grid g(2, 32, 32);
  const Field f = sample(g, [](const Point& x) { return (1.0 - x.norm2()) * (1.0 + 0.5 * x[0] * x[1]); });
  Field shifted = f;
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) shifted.at(i, j) = f.at(i, (j + 5) % g.n_theta());
  EXPECT_EQ(symmetry_deviation(shifted), symmetry_deviation(f));
}

TEST(WeightedMonotonicity, Examples) {
  const Grid g3(3, 64, 16);
  const auto pass3 = weighted_monotonicity(
      sample(g3, [](const Point& x) { return (1.0 - x.norm2()) / std::sqrt(1.0 + x.norm2()); }), 3, 1e-8);
  EXPECT_EQ(pass3.status, MonotonicityStatus::pass);
  for (std::size_t i = 0; i < pass3.radii.size(); ++i)
    EXPECT_NEAR(pass3.profile[i], 1.0 - pass3.radii[i] * pass3.radii[i], 1e-14);

  const Grid g2(2, 64, 16);
  const auto fail2 = weighted_monotonicity(
      sample(g2, [](const Point& x) { return (1.0 + 0.1 * std::sin(5.0 * x.norm())) * (1.0 - x.norm2() * x.norm2() * x.norm2()); }),
      2, 1e-8);
  EXPECT_EQ(fail2.status, MonotonicityStatus::fail);
  EXPECT_EQ(fail2.first_violation, 0);

  const auto para = weighted_monotonicity(sample(g2, [](const Point& x) { return 0.7 * (1.0 - x.norm2()); }), 2, 1e-8);
  EXPECT_EQ(para.status, MonotonicityStatus::pass);
  EXPECT_THROW(weighted_monotonicity(Field(g2), 3, 1e-8), std::invalid_argument);
}

TEST(WeightedMonotonicity, GateBlocksAsymmetricFields) {
  const Grid g(2, 32, 32);
  const Field f = sample(g, [](const Point& x) { return (1.0 - x.norm2()) * (1.0 + 0.5 * x[0]); });
  EXPECT_EQ(weighted_monotonicity(f, 2, 1e-3).status, MonotonicityStatus::not_symmetric_enough);
}

namespace {

Field decreasing_radial(int dim) {
  return sample(Grid(dim, 64, dim == 2 ? 64 : 32), [dim](const Point& x) {
    return (1.0 - x.norm2()) * std::pow(1.0 + x.norm2(), -weight_exponent(dim));
  });
}

}  // namespace

TEST(Sweep, RadialDecreasingProfile) {
  for (int dim : {2, 3}) {
    const Field phi = decreasing_radial(dim);
    for (const Point& d : default_directions(phi.grid, true)) {
      const auto rep = moving_plane_sweep(phi, d, 1.0 / 64.0, 1e-8);
      EXPECT_DOUBLE_EQ(rep.lambda0_est, 1.0 / 64.0);
      EXPECT_TRUE(rep.lambda_zero_pass);
      EXPECT_TRUE(rep.hopf_pass);
      for (double m : rep.min_psi)
        if (!std::isnan(m)) {
          EXPECT_GT(m, 0.0);
        }
      EXPECT_LT(rep.normal_derivative[16], 0.0);
    }
  }
}

TEST(Sweep, SkewedProfileHasPositiveLambdaZero) {
  for (int dim : {2, 3}) {
    const Field phi = sample(Grid(dim, 64, 32), [dim](const Point& x) {
      return (1.0 - x.norm2()) * (1.0 + 0.5 * x[0]) * std::pow(1.0 + x.norm2(), -weight_exponent(dim));
    });
    const auto rep = moving_plane_sweep(phi, Point::axis(dim, 0), 1.0 / 64.0, 1e-6);
    EXPECT_GT(rep.lambda0_est, 1.0 / 64.0);
    EXPECT_LT(rep.min_psi.front(), -1e-6);
    EXPECT_FALSE(rep.lambda_zero_pass);
  }
}

TEST(Sweep, ZeroFieldIsTrivial) {
  const Field phi(Grid(2, 32, 32));
  const auto rep = moving_plane_sweep(phi, Point{1.0, 0.0}, 1.0 / 64.0, 1e-12);
  EXPECT_DOUBLE_EQ(rep.lambda0_est, 1.0 / 64.0);
  for (double m : rep.min_psi)
    if (!std::isnan(m)) {
      EXPECT_EQ(m, 0.0);
    }
}

TEST(Sweep, RefiningTheLambdaGridCannotRaiseTheEstimate) {
  const Field phi = sample(Grid(2, 64, 32), [](const Point& x) { return (1.0 - x.norm2()) * (1.0 + 0.3 * x[0]); });
  for (const Point& d : {Point{1.0, 0.0}, Point{-1.0, 0.0}}) {
    const double coarse = moving_plane_sweep(phi, d, 1.0 / 16.0, 1e-6).lambda0_est;
    const double fine = moving_plane_sweep(phi, d, 1.0 / 64.0, 1e-6).lambda0_est;
    EXPECT_LE(fine, coarse);
  }
}

TEST(Sweep, SkipsPlanesWithoutMeshCells) {
  const Field phi = decreasing_radial(2);
  const auto rep = moving_plane_sweep(phi, Point{1.0, 0.0}, std::vector<double>{0.5, 0.9999}, 1e-8);
  EXPECT_TRUE(std::isnan(rep.min_psi[1]));
  EXPECT_EQ(rep.notes.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.lambda0_est, 0.5);
}

TEST(Sweep, AxisymmetricGridsOnlyAcceptTheAxis) {
  const Field phi = decreasing_radial(3);
  EXPECT_THROW(moving_plane_sweep(phi, Point{0.0, 1.0, 0.0}, 0.25, 1e-8), std::invalid_argument);
  EXPECT_THROW(moving_plane_sweep(phi, Point{1.0, 0.0}, 0.25, 1e-8), std::invalid_argument);
  EXPECT_NO_THROW(moving_plane_sweep(phi, Point{-1.0, 0.0, 0.0}, 0.25, 1e-8));
}

namespace {

VerdictInputs symmetric_inputs() {
  VerdictInputs in;
  in.omega.converged = true;
  in.omega.phi = decreasing_radial(2);
  in.eps_omega = 1e-8;
  in.tol_sym = 1e-4;
  in.monotonicity = weighted_monotonicity(in.omega.phi, 2, 1e-7);
  in.sweeps.push_back(moving_plane_sweep(in.omega.phi, Point{1.0, 0.0}, 1.0 / 64.0, 1e-7));
  in.log.push_back(MonitorRecord{0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0});
  return in;
}

}  // namespace

TEST(TheoremVerdict, Classes) {
  auto in = symmetric_inputs();
  EXPECT_EQ(theorem_verdict(in).cls, TheoremClass::symmetric_monotone);

  auto trivial = in;
  trivial.omega.phi = Field(in.omega.phi.grid);
  EXPECT_EQ(theorem_verdict(trivial).cls, TheoremClass::trivial_limit);

  auto f3 = in;
  f3.f3 = F3Verdict::fail;
  EXPECT_EQ(theorem_verdict(f3).cls, TheoremClass::hypotheses_violated);

  auto neg = in;
  neg.log.back().min_u = -0.1;
  EXPECT_EQ(theorem_verdict(neg).cls, TheoremClass::hypotheses_violated);

  auto dudt = in;
  dudt.log.back().min_dudt = -1.0;
  EXPECT_EQ(theorem_verdict(dudt).cls, TheoremClass::symmetric_monotone);
  dudt.monotone_time_expected = true;
  EXPECT_EQ(theorem_verdict(dudt).cls, TheoremClass::hypotheses_violated);

  auto open = in;
  open.omega.converged = false;
  EXPECT_EQ(theorem_verdict(open).cls, TheoremClass::inconclusive);

  auto high = in;
  high.sweeps.front().lambda0_est = 0.5;
  EXPECT_EQ(theorem_verdict(high).cls, TheoremClass::inconclusive);
}
