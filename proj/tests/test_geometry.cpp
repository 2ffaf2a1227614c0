#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ellsym/geometry.hpp"
#include "ellsym/validation.hpp"

using namespace ellsym;

namespace {

// Independent oracle: the inversion written out for the first axis in plain doubles.
Point oracle_reflect_axis(const Point& x, double l) {
  const double e1 = (1.0 - l * l) / (-2.0 * l);
  const double R = (1.0 + l * l) / (2.0 * l);
  double d2 = (x[0] - e1) * (x[0] - e1);
  for (std::size_t k = 1; k < x.dim(); ++k) d2 += x[k] * x[k];
  Point y(x.dim());
  y[0] = e1 + R * R * (x[0] - e1) / d2;
  for (std::size_t k = 1; k < x.dim(); ++k) y[k] = R * R * x[k] / d2;
  return y;
}

}  // namespace

TEST(PlaneParam, CenterAndRadiusAtHalf) {
  const auto p = plane_param(0.5, Point{1.0, 0.0});
  EXPECT_DOUBLE_EQ(p.center()[0], -0.75);
  EXPECT_DOUBLE_EQ(p.center()[1], 0.0);
  EXPECT_DOUBLE_EQ(p.radius(), 1.25);
  EXPECT_FALSE(p.is_hyperplane());
}

TEST(PlaneParam, ApproachesUnitSphereNearOne) {
  const auto p = plane_param(1.0 - 1e-9, 2);
  EXPECT_NEAR(p.center().norm(), 0.0, 1e-8);
  EXPECT_NEAR(p.radius(), 1.0, 1e-8);
}

TEST(PlaneParam, ZeroIsHyperplane) {
  const auto p = plane_param(0.0, 3);
  EXPECT_TRUE(p.is_hyperplane());
  EXPECT_TRUE(std::isinf(p.radius()));
}

TEST(PlaneParam, RejectsInvalidInput) {
  EXPECT_THROW(plane_param(1.0, 2), std::domain_error);
  EXPECT_THROW(plane_param(-0.1, 2), std::domain_error);
  EXPECT_THROW(plane_param(0.5, Point{1.0, 1.0}), std::domain_error);
}

TEST(InSigma, Examples) {
  const auto p = plane_param(0.5, 2);
  EXPECT_TRUE(in_sigma(Point{0.8, 0.0}, p));
  for (double l : {0.1, 0.5, 0.9}) EXPECT_FALSE(in_sigma(Point{l, 0.0}, plane_param(l, 2)));
  EXPECT_TRUE(in_sigma(Point{0.3, 0.4}, plane_param(0.0, 2)));
  EXPECT_FALSE(in_sigma(Point{-0.3, 0.4}, plane_param(0.0, 2)));
}

TEST(Reflect, Examples) {
  const auto p = plane_param(0.5, 2);
  const Point y = reflect(Point{0.8, 0.0}, p);
  EXPECT_NEAR(y[0], -0.75 + 1.5625 / 1.55, 1e-15);
  EXPECT_NEAR(y[0], 0.25806451612903225, 1e-15);
  EXPECT_NEAR(y[1], 0.0, 1e-15);
  EXPECT_NEAR(reflect(Point{4.0 / 3.0, 0.0}, p).norm(), 0.0, 1e-15);
  const Point m = reflect(Point{0.3, 0.4}, plane_param(0.0, 2));
  EXPECT_DOUBLE_EQ(m[0], -0.3);
  EXPECT_DOUBLE_EQ(m[1], 0.4);
}

TEST(Reflect, CenterIsSingular) {
  const auto p = plane_param(0.5, 2);
  EXPECT_THROW(reflect(p.center(), p), std::domain_error);
}

TEST(Reflect, MatchesAxisOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t dim = 2 + k % 3;
    const double l = lam(rng);
    const Point x = detail::random_ball_point(dim, rng);
    const Point a = reflect(x, plane_param(l, dim));
    const Point b = oracle_reflect_axis(x, l);
    EXPECT_LT(distance(a, b), 1e-13);
  }
}

TEST(Reflect, FixesPointsOfTheSphere) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const std::size_t dim = 2 + k % 3;
    const auto p = plane_param(0.05 + 0.9 * (k / 500.0), detail::random_direction(dim, rng));
    const Point x = p.center() + p.radius() * detail::random_direction(dim, rng);
    EXPECT_LT(distance(reflect(x, p), x), 1e-12);
  }
}

TEST(Reflect, RegionExchangeAndNormDecrease) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  int inside = 0;
  for (int k = 0; k < 20000; ++k) {
    const std::size_t dim = 2 + k % 4;
    const auto p = plane_param(lam(rng), detail::random_direction(dim, rng));
    const Point x = detail::random_ball_point(dim, rng);
    if (!in_sigma(x, p)) continue;
    ++inside;
    const Point y = reflect(x, p);
    EXPECT_LT(y.norm(), x.norm());
    EXPECT_FALSE(in_sigma(y, p));
    EXPECT_LT(y.norm(), 1.0);
  }
  EXPECT_GT(inside, 1000);
}

TEST(Reflect, RotationEquivariance) {
  // Rotation in the (x2, x3) plane fixes the first axis.
  std::mt19937_64 rng(3);
  const double a = 0.7;
  auto rot = [a](const Point& x) {
    Point y = x;
    y[1] = std::cos(a) * x[1] - std::sin(a) * x[2];
    y[2] = std::sin(a) * x[1] + std::cos(a) * x[2];
    return y;
  };
  for (int k = 0; k < 1000; ++k) {
    const auto p = plane_param(0.05 + 0.9 * k / 1000.0, 3);
    const Point x = detail::random_ball_point(3, rng);
    EXPECT_LT(distance(reflect(rot(x), p), rot(reflect(x, p))), 1e-12);
  }
}

TEST(Reflect, ArbitraryDirectionMatchesRotatedAxis) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 1000; ++k) {
    const double phi = 6.0 * k / 1000.0;
    const Point d{std::cos(phi), std::sin(phi)};
    const double l = 0.05 + 0.9 * ((k * 37) % 1000) / 1000.0;
    const Point x = detail::random_ball_point(2, rng);
    // Rotate x so that d becomes the first axis, reflect there, rotate back.
    const Point xr{std::cos(phi) * x[0] + std::sin(phi) * x[1], -std::sin(phi) * x[0] + std::cos(phi) * x[1]};
    const Point yr = oracle_reflect_axis(xr, l);
    const Point y{std::cos(phi) * yr[0] - std::sin(phi) * yr[1], std::sin(phi) * yr[0] + std::cos(phi) * yr[1]};
    EXPECT_LT(distance(reflect(x, plane_param(l, d)), y), 1e-12);
  }
}

TEST(RatioIdentity, WorkedPoint) {
  const auto p = plane_param(0.5, 2);
  const Point x{0.8, 0.0};
  const Point y = reflect(x, p);
  EXPECT_NEAR((1.0 + x.norm2()) / (1.0 + y.norm2()), 1.5376, 1e-12);
  EXPECT_LT(ratio_identity_residual(x, p), 1e-12);
  EXPECT_THROW(ratio_identity_residual(x, plane_param(0.0, 2)), std::domain_error);
}

TEST(RatioIdentity, OnTheSphereBothSidesAreOne) {
  const auto p = plane_param(0.4, 2);
  const Point x = p.center() + p.radius() * Point{std::cos(0.1), std::sin(0.1)};
  EXPECT_LT(ratio_identity_residual(x, p), 1e-12);
  EXPECT_NEAR(reflect(x, p).norm(), x.norm(), 1e-12);
}

TEST(CollapsePoint, ReflectsToOrigin) {
  for (int k = 1; k < 100; ++k) {
    const auto p = plane_param(k / 100.0, 3);
    EXPECT_LT(reflect(collapse_point(p), p).norm(), 1e-12);
  }
}

TEST(Stereographic, PolesAndBoundary) {
  const Point o = stereographic(SpherePoint({0.0, 0.0, 1.0}));
  EXPECT_DOUBLE_EQ(o.norm(), 0.0);
  const double eps = 1e-9;
  const Point b = stereographic(SpherePoint({std::sqrt(1.0 - eps * eps), 0.0, eps}));
  EXPECT_NEAR(b[0], 1.0, 1e-8);
  EXPECT_LT(b.norm(), 1.0);
}

TEST(Stereographic, RoundTrip) {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Point x = detail::random_ball_point(2 + k % 4, rng);
    worst = std::max(worst, distance(stereographic(stereographic_inv(x)), x));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Stereographic, RejectsInvalidInput) {
  EXPECT_THROW(SpherePoint({0.0, 1.0, 0.0}), std::domain_error);
  EXPECT_THROW(SpherePoint({0.0, 0.6, -0.8}), std::domain_error);
  EXPECT_THROW(SpherePoint({0.0, 0.5, 0.5}), std::domain_error);
  EXPECT_THROW(stereographic_inv(Point{1.0, 0.0}), std::domain_error);
}

TEST(GeometrySuite, PassesOnRandomSamples) {
  const auto r = geometry_suite(20000, 42);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.sigma_points, 0);
}
