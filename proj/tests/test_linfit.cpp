#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

namespace gaussfit {
namespace {

using testing::long_tail;
using testing::rel_err;

void expect_coeffs_near(const LogPolyCoeffs& got, const LogPolyCoeffs& want, double rel) {
  EXPECT_LT(rel_err(got.a, want.a), rel);
  EXPECT_LT(rel_err(got.b, want.b), rel);
  EXPECT_LT(rel_err(got.c, want.c), rel);
}

TEST(WeightedLsSolve, RecoversNoiselessLongTail) {
  const SampledSignal s = testing::noiseless(long_tail());
  const LogPolyCoeffs k = weighted_ls_solve(s, WeightVector::ones(s.size()), 1e-300);
  expect_coeffs_near(k, coeffs_from_params(long_tail()), 1e-6);
}

TEST(WeightedLsSolve, UniformWeightScaleCancels) {
  const SampledSignal s = testing::noisy(long_tail(), 12.0, 3);
  const double floor = default_clamp_floor(s);
  const LogPolyCoeffs unit = weighted_ls_solve(s, WeightVector::ones(s.size()), floor);
  for (double kappa : {1e-8, 0.37, 5.0, 1e12}) {
    const LogPolyCoeffs scaled =
        weighted_ls_solve(s, WeightVector(std::vector<double>(s.size(), kappa)), floor);
    EXPECT_EQ(scaled, unit) << "kappa=" << kappa;
  }
}

TEST(WeightedLsSolve, TwoPositiveWeightsAreSingular) {
  const SampledSignal s = testing::noiseless(long_tail());
  std::vector<double> w(s.size(), 0.0);
  w[10] = 1.0;
  w[500] = 2.0;
  try {
    weighted_ls_solve(s, WeightVector(w), 1e-300);
    FAIL() << "expected SingularSystem";
  } catch (const FitError& e) {
    EXPECT_EQ(e.code(), Errc::SingularSystem);
  }
}

TEST(WeightVector, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(WeightVector({1.0, -1.0, 1.0}), FitError);
  EXPECT_THROW(WeightVector({1.0, INFINITY, 1.0}), FitError);
}

TEST(WeightedLsSolve, NormalEquationResidualIsOrthogonal) {
  const CounterStream rng(11);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + trial;
    std::vector<double> y(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform(1000 * trial + 2 * i, 0.1, 3.0);
      w[i] = rng.uniform(1000 * trial + 2 * i + 1, 0.2, 2.0);
    }
    const SampledSignal s(y, 0.25, -2.0);
    const LogPolyCoeffs k = weighted_ls_solve(s, WeightVector(w), 1e-12);
    double g0 = 0.0, g1 = 0.0, g2 = 0.0, w2sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s.x(i);
      const double r = std::log(y[i]) - (k.a + k.b * x + k.c * x * x);
      const double w2 = w[i] * w[i];
      g0 += w2 * r;
      g1 += w2 * r * x;
      g2 += w2 * r * x * x;
      w2sum += w2;
    }
    EXPECT_LT(std::abs(g0), 1e-8 * w2sum);
    EXPECT_LT(std::abs(g1), 1e-8 * w2sum);
    EXPECT_LT(std::abs(g2), 1e-8 * w2sum);
  }
}

TEST(LsFit, RecoversNoiselessParameters) {
  const GaussianParams truth{1.0, 6.0, 1.3};
  const FitResult r = ls_fit(testing::noiseless(truth), 1e-300);
  EXPECT_LT(rel_err(r.params.A, truth.A), 1e-6);
  EXPECT_LT(rel_err(r.params.mu, truth.mu), 1e-6);
  EXPECT_LT(rel_err(r.params.sigma, truth.sigma), 1e-6);
  ASSERT_TRUE(r.coeffs.has_value());
  expect_coeffs_near(*r.coeffs, coeffs_from_params(truth), 1e-6);
}

TEST(LsFit, HandlesShiftedOrigin) {
  const GaussianParams truth{3.0, 1001.5, 0.4};
  std::vector<double> y;
  for (int n = 0; n < 200; ++n) y.push_back(eval_gaussian(truth, 1000.0 + 0.01 * n));
  const SampledSignal s(y, 0.01, 1000.0);
  const FitResult r = ls_fit(s, 1e-300);
  EXPECT_NEAR(r.params.mu, 1001.5, 1e-7);
  EXPECT_NEAR(r.params.sigma, 0.4, 1e-8);
  EXPECT_NEAR(r.params.A, 3.0, 1e-8);
}

TEST(LsFit, UnitWeightWlsMatchesExactly) {
  const SampledSignal s = testing::noisy({1.0, 5.0, 1.5}, 20.0, 8);
  const double floor = default_clamp_floor(s);
  const FitResult r = ls_fit(s, floor);
  EXPECT_EQ(weighted_ls_solve(s, WeightVector::ones(s.size()), floor), *r.coeffs);
}

TEST(WeightsFromParams, ReconstructsGaussian) {
  const SampledSignal s = testing::noiseless(long_tail());
  const LogPolyCoeffs k = coeffs_from_params(long_tail());
  const WeightVector w = weights_from_params(k, s);
  EXPECT_NEAR(w[900], 1.0, 1e-12);
  for (std::size_t n = 0; n < s.size(); ++n) {
    EXPECT_NEAR(w[n], eval_gaussian(long_tail(), s.x(n)), 1e-12);
  }
  const double kappa = 3.5;
  const WeightVector scaled = weights_from_params({k.a + std::log(kappa), k.b, k.c}, s);
  for (std::size_t n = 0; n < s.size(); n += 50) {
    EXPECT_NEAR(scaled[n], kappa * w[n], 1e-12 * kappa);
  }
}

TEST(WeightsFromParams, OverflowBecomesZero) {
  const SampledSignal s({1.0, 1.0, 1.0}, 1.0);
  const WeightVector w = weights_from_params({800.0, 0.0, -0.1}, s);
  EXPECT_EQ(w[0], 0.0);
}

TEST(WlsIterate, NoiselessOneIterationIsExact) {
  const SampledSignal s = testing::noiseless(long_tail());
  std::vector<double> w(s.size());
  for (std::size_t n = 0; n < w.size(); ++n) w[n] = 0.5 + 0.001 * static_cast<double>(n % 7);
  const auto [fit, trace] = wls_iterate(s, WeightVector(w), 1, 1e-300);
  EXPECT_EQ(trace.size(), 1u);
  EXPECT_LT(rel_err(fit.params.A, 1.0), 1e-6);
  EXPECT_LT(rel_err(fit.params.mu, 9.0), 1e-6);
  EXPECT_LT(rel_err(fit.params.sigma, 1.3), 1e-6);
}

TEST(WlsIterate, NoiselessTraceIsFixedPoint) {
  const SampledSignal s = testing::noiseless({1.0, 6.0, 1.3});
  const auto [fit, trace] = wls_iterate(s, WeightVector::ones(s.size()), 6, 1e-300);
  ASSERT_EQ(trace.size(), 6u);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_NEAR(trace.coeffs[i].a, trace.coeffs[0].a, 1e-9);
    EXPECT_NEAR(trace.coeffs[i].b, trace.coeffs[0].b, 1e-9);
    EXPECT_NEAR(trace.coeffs[i].c, trace.coeffs[0].c, 1e-9);
  }
}

TEST(WlsIterate, ZeroIterationsRejected) {
  const SampledSignal s = testing::noiseless(long_tail());
  EXPECT_THROW(wls_iterate(s, WeightVector::ones(s.size()), 0, 1e-300), FitError);
}

TEST(WlsIterate, FailureCarriesIteration) {
  // ln y convex in x: the first solve already has c > 0.
  std::vector<double> y;
  for (int n = 0; n < 20; ++n) y.push_back(std::exp(0.01 * n * n));
  const SampledSignal s(y, 1.0);
  try {
    wls_iterate(s, WeightVector::ones(s.size()), 3, 1e-12);
    FAIL() << "expected InvalidWidth";
  } catch (const FitError& e) {
    EXPECT_EQ(e.code(), Errc::InvalidWidth);
    EXPECT_EQ(e.iteration(), 0);
    EXPECT_EQ(e.stage(), "wls");
    EXPECT_FALSE(e.partial().has_value());
  }
}

TEST(WlsIterate, ScaleEquivariance) {
  const SampledSignal s = testing::noiseless({1.0, 6.0, 1.3});
  const SampledSignal s2 = s.scaled(4.0);
  const auto [a, ta] = wls_iterate(s, WeightVector::ones(s.size()), 3, 1e-300);
  const auto [b, tb] = wls_iterate(s2, WeightVector::ones(s.size()), 3, 1e-300);
  EXPECT_NEAR(b.coeffs->a, a.coeffs->a + std::log(4.0), 1e-9);
  EXPECT_NEAR(b.coeffs->b, a.coeffs->b, 1e-9);
  EXPECT_NEAR(b.coeffs->c, a.coeffs->c, 1e-9);
}

}  // namespace
}  // namespace gaussfit
