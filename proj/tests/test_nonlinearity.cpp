#include <cmath>

#include <gtest/gtest.h>

#include "ellsym/nonlinearity.hpp"

using namespace ellsym;

TEST(GTransform, LogisticTemplateCancelsWeights) {
  for (int dim : {2, 3, 5}) {
    const auto f = catalog::make("f3_logistic", {{"kappa_a", 0.7}, {"kappa_g", 1.3}, {"K", 2.0}}, dim);
    for (double r : {0.05, 0.4, 0.95})
      for (double s : {-1.0, 0.0, 0.6, 2.5})
        for (double t : {0.0, 3.0}) {
          const double direct = 0.7 * (2.0 - r * r) + 1.3 * s * (1.0 - s / 2.0);
          EXPECT_NEAR(g_transform(f, r, s, t, dim), direct, 1e-12);
          EXPECT_NEAR(f.g_closed(r, s, t), direct, 1e-15);
        }
  }
}

TEST(GTransform, LinearInThreeDimensions) {
  const auto f = catalog::make("violates_f3_linear", {{"kappa", 1.5}}, 3);
  for (double r : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(g_transform(f, r, 0.8, 0.0, 3), 1.5 * std::pow(1.0 + r * r, 2.0) * 0.8, 1e-13);
  }
}

TEST(GTransform, ZeroEntry) {
  const auto f = catalog::make("zero", {}, 4);
  EXPECT_EQ(g_transform(f, 0.3, 1.0, 1.0, 4), 0.0);
}

TEST(GTransform, TimeFactor) {
  const auto f = catalog::make("f3_time", {}, 2);
  const double s = 0.4, r = 0.3;
  for (double t : {0.0, 1.0, 5.0}) {
    const double b = 1.0 - 0.5 * std::exp(-t);
    EXPECT_NEAR(g_transform(f, r, s, t, 2), (2.0 - r * r) + b * 2.0 * s * (1.0 - s), 1e-13);
  }
}

TEST(Catalog, RejectsUnknownEntriesAndParameters) {
  EXPECT_THROW(catalog::make("cubic", {}, 2), std::invalid_argument);
  EXPECT_THROW(catalog::make("f3_logistic", {{"kappa", 1.0}}, 2), std::invalid_argument);
  EXPECT_THROW(catalog::make("zero", {{"alpha", 1.5}}, 2), std::invalid_argument);
  EXPECT_EQ(catalog::names().size(), 5u);
}

TEST(CheckF3, Verdicts) {
  for (int dim : {2, 3}) {
    EXPECT_EQ(check_F3(catalog::make("f3_logistic", {}, dim), dim).verdict, F3Verdict::pass_strict);
    EXPECT_EQ(check_F3(catalog::make("f3_source_only", {}, dim), dim).verdict, F3Verdict::pass_strict);
    EXPECT_EQ(check_F3(catalog::make("f3_time", {}, dim), dim).verdict, F3Verdict::pass_strict);
    EXPECT_EQ(check_F3(catalog::make("zero", {}, dim), dim).verdict, F3Verdict::pass_nonstrict);
    const auto bad = check_F3(catalog::make("violates_f3_linear", {{"kappa", 1.0}}, dim), dim);
    EXPECT_EQ(bad.verdict, F3Verdict::fail);
    EXPECT_GT(bad.margin, 0.0);
    EXPECT_GT(bad.s, 0.0);
    EXPECT_LT(bad.r1, bad.r2);
  }
}

TEST(CheckF3, ConstantInRadiusIsNonstrict) {
  NonlinearitySpec f;
  f.dim = 2;
  f.eval = [](double r, double, double) { return 3.0 / std::pow(1.0 + r * r, 2.0); };
  EXPECT_EQ(check_F3(f, 2).verdict, F3Verdict::pass_nonstrict);
}

TEST(CheckF3, StableUnderRefinement) {
  const F3Sampling fine = F3Sampling{}.refined();
  for (const auto& name : catalog::names()) {
    for (int dim : {2, 3}) {
      const auto f = catalog::make(name, {}, dim);
      EXPECT_EQ(check_F3(f, dim).verdict, check_F3(f, dim, fine).verdict) << name;
    }
  }
}

TEST(CheckF3, RejectsCoarseSampling) {
  EXPECT_THROW(check_F3(catalog::make("zero", {}, 2), 2, F3Sampling{8, 16, 16}), std::invalid_argument);
}

TEST(CheckF1, Examples) {
  const auto lin = check_F1(catalog::make("violates_f3_linear", {{"kappa", 2.5}}, 2), 2.0);
  EXPECT_NEAR(lin.constant, 2.5, 1e-12);
  EXPECT_FALSE(lin.violated());
  const auto zero = check_F1(catalog::make("zero", {}, 2), 2.0);
  EXPECT_EQ(zero.constant, 0.0);
  EXPECT_FALSE(zero.violated());
}

TEST(CheckF1, LogisticBound) {
  // f_u = (1+r^2)^{-2} kg (1 - 2u/K) for N = 2; on [-M, M] the sup is at r -> 0, u = -M.
  const double M = 2.0;
  const auto rep = check_F1(catalog::make("f3_logistic", {}, 2), M);
  const double bound = 2.0 * (1.0 + 2.0 * M);
  EXPECT_LE(rep.constant_refined, bound);
  EXPECT_GT(rep.constant_refined, 0.9 * bound);
  EXPECT_TRUE(rep.stable);
}

TEST(CheckF1, DetectsNonLipschitzTerm) {
  NonlinearitySpec f;
  f.dim = 2;
  f.eval = [](double, double u, double) { return std::cbrt(u); };
  EXPECT_TRUE(check_F1(f, 1.0).violated());
}

TEST(CheckF2, Examples) {
  for (const char* name : {"f3_logistic", "f3_source_only"}) {
    const auto rep = check_F2(catalog::make(name, {}, 2), 1.0);
    EXPECT_TRUE(std::isfinite(rep.constant));
    EXPECT_GT(rep.constant, 0.0);
    EXPECT_TRUE(rep.stable) << name;
  }
  EXPECT_EQ(check_F2(catalog::make("violates_f3_linear", {}, 2), 1.0).constant, 0.0);
  const auto timed = check_F2(catalog::make("f3_time", {}, 3), 0.5);
  EXPECT_TRUE(std::isfinite(timed.constant_refined));
  EXPECT_THROW(check_F2(catalog::make("zero", {}, 2), 0.05), std::invalid_argument);
}
