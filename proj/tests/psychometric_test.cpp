/* Copyright 2026 The MCIL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "core/psychometric.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

namespace mcil::psychometric {
namespace {

using Models = std::vector<ObserverModel>;

Models FromSigmas(std::initializer_list<double> sigmas) {
  Models m;
  for (double s : sigmas) m.push_back({s, 0.0});
  return m;
}

void ExpectErrorCode(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(CumulativeGaussian, CenterIsOneHalf) { EXPECT_EQ(CumulativeGaussian(0.0), 0.5); }

TEST(CumulativeGaussian, MatchesQuadratureOracle) {
  EXPECT_NEAR(CumulativeGaussian(1.6449), 0.95, 1e-4);
  for (double z : {-6.0, -3.0, -1.6449, -0.3, 0.25, 1.0, 1.6449, 2.5, 4.0}) {
    EXPECT_NEAR(CumulativeGaussian(z), oracle::NormalCdfQuadrature(z), 1e-12) << z;
  }
}

TEST(CumulativeGaussian, ReflectionIdentity) {
  EXPECT_NEAR(CumulativeGaussian(-3.0), 1.0 - CumulativeGaussian(3.0), 1e-12);
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double z = rng.Uniform(-8.0, 8.0);
    EXPECT_NEAR(CumulativeGaussian(-z), 1.0 - CumulativeGaussian(z), 1e-12);
  }
}

TEST(CumulativeGaussian, MonotoneOnRandomPairs) {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.Uniform(-10.0, 10.0), b = rng.Uniform(-10.0, 10.0);
    if (a > b) std::swap(a, b);
    EXPECT_LE(CumulativeGaussian(a), CumulativeGaussian(b));
  }
}

TEST(CumulativeGaussian, RejectsNonFinite) {
  ExpectErrorCode(ErrorCode::kInvalidArgument,
                  [] { CumulativeGaussian(std::numeric_limits<double>::quiet_NaN()); });
  ExpectErrorCode(ErrorCode::kInvalidArgument,
                  [] { CumulativeGaussian(std::numeric_limits<double>::infinity()); });
}

TEST(Probit, InvertsCumulativeGaussian) {
  EXPECT_EQ(Probit(0.5), 0.0);
  for (double z : {-6.0, -5.0, -2.0, -0.5, 0.1, 1.0, 3.0}) {
    EXPECT_NEAR(Probit(CumulativeGaussian(z)), z, 1e-9) << z;
  }
  // Near 1 a double resolves H(z) only to about 1e-16, so the upper tail
  // is limited by the input rather than the inverse.
  EXPECT_NEAR(Probit(CumulativeGaussian(6.0)), 6.0, 2e-8);
}

TEST(PsychometricResponse, Examples) {
  EXPECT_EQ(PsychometricResponse({1.0, 0.0}, 0.0), 0.5);
  EXPECT_NEAR(PsychometricResponse({2.0, 1.0}, 1.0), oracle::NormalCdfQuadrature(1.0), 1e-12);
  EXPECT_NEAR(PsychometricResponse({2.0, 1.0}, 1.0), 0.8413, 1e-4);
  EXPECT_EQ(PsychometricResponse({1.0, 0.0}, std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_NEAR(PsychometricResponse({1.0, 0.0}, 1e6), 1.0, 1e-15);
}

TEST(PsychometricResponse, EqualsShiftedScaledCdf) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const ObserverModel m{rng.Uniform(0.1, 10.0), rng.Uniform(-2.0, 2.0)};
    const double dc = rng.Uniform(-5.0, 5.0);
    EXPECT_DOUBLE_EQ(PsychometricResponse(m, dc), CumulativeGaussian((dc + m.bias) / m.sigma));
  }
}

TEST(PsychometricResponse, RejectsInvalidSigma) {
  ExpectErrorCode(ErrorCode::kInvalidArgument, [] { PsychometricResponse({0.0, 0.0}, 0.0); });
  ExpectErrorCode(ErrorCode::kInvalidArgument, [] { PsychometricResponse({-1.0, 0.0}, 0.0); });
}

TEST(Slope, Examples) {
  EXPECT_NEAR(Slope({1.0, 0.0}), 0.398942, 1e-6);
  EXPECT_NEAR(Slope({2.0, 0.0}), 0.199471, 1e-6);
  EXPECT_NEAR(Slope({1.0, 0.0}), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double s = rng.Uniform(0.1, 10.0);
    EXPECT_EQ(Slope({2.0 * s, 0.0}), Slope({s, 0.0}) / 2.0);
  }
}

TEST(JointWeights, Examples) {
  const auto equal = JointWeights(FromSigmas({3.7, 3.7}));
  EXPECT_EQ(equal[0], 0.5);
  EXPECT_EQ(equal[1], 0.5);
  const auto w = JointWeights(FromSigmas({1.0, 2.0}));
  EXPECT_NEAR(w[0], 0.8, 1e-12);
  EXPECT_NEAR(w[1], 0.2, 1e-12);
  for (double v : JointWeights(FromSigmas({1.0, 1.0, 1.0}))) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(JointWeights, DecreasingInOwnSigma) {
  double previous = 1.0;
  for (double s = 0.5; s < 5.0; s += 0.25) {
    const double w0 = JointWeights(FromSigmas({s, 1.0, 2.0}))[0];
    EXPECT_LT(w0, previous);
    EXPECT_GT(w0, 0.0);
    previous = w0;
  }
}

TEST(JointWeights, NeedsTwoObservers) {
  ExpectErrorCode(ErrorCode::kInvalidArgument, [] { JointWeights(FromSigmas({1.0})); });
  ExpectErrorCode(ErrorCode::kInvalidArgument, [] { JointModel(FromSigmas({1.0})); });
  ExpectErrorCode(ErrorCode::kInvalidArgument, [] { JointSlopeApprox(FromSigmas({1.0})); });
}

TEST(JointModel, Examples) {
  const Models a{{2.0, 0.0}, {2.0, 1.0}};
  const auto ja = JointModel(a);
  EXPECT_NEAR(ja.sigma, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ja.bias, 0.5, 1e-15);

  EXPECT_NEAR(JointVariance(FromSigmas({1.0, 2.0})), 0.8, 1e-12);
  EXPECT_EQ(JointVarianceClosedForm(FromSigmas({1.0, 2.0})), 0.8);

  for (int n = 2; n <= 7; ++n) {
    const double c = 1.7;
    const Models same(static_cast<std::size_t>(n), {c, 0.0});
    EXPECT_NEAR(JointVariance(same), c * c / n, 1e-14);
  }
}

TEST(JointSlopeApprox, Examples) {
  // Slopes 3 and 4 correspond to sigma = 1 / (3 sqrt(2 pi)) and 1 / (4 sqrt(2 pi)).
  const double root = std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(JointSlopeApprox(FromSigmas({1.0 / (3.0 * root), 1.0 / (4.0 * root)})), 5.0, 1e-12);
  EXPECT_NEAR(JointSlopeApprox(FromSigmas({1.0, 1e9})), Slope({1.0, 0.0}), 1e-12);
  EXPECT_NEAR(JointSlopeApprox(FromSigmas({1.0, 1.0})), 0.564190, 1e-6);
}

// Random observer sets as in the acceptance suite, plus the exact-slope bound.
TEST(JointProperties, RandomObserverSets) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.Below(6);
    Models models(n);
    for (auto& m : models) m = {rng.Uniform(0.1, 10.0), rng.Uniform(-2.0, 2.0)};
    const auto w = JointWeights(models);
    double sum = 0.0, min_var = INFINITY, max_slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += w[i];
      EXPECT_GT(w[i], 0.0);
      EXPECT_LT(w[i], 1.0);
      min_var = std::min(min_var, models[i].sigma * models[i].sigma);
      max_slope = std::max(max_slope, Slope(models[i]));
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    const double var = JointVariance(models);
    EXPECT_LE(var, min_var + 1e-12);
    const double closed = JointVarianceClosedForm(models);
    EXPECT_LE(std::abs(var - closed), 1e-10 * closed);
    EXPECT_GE(JointSlopeApprox(models), max_slope - 1e-12);
    EXPECT_GE(Slope(JointModel(models)), max_slope - 1e-12);
  }
}

TEST(FitCurve, RecoversNoiselessModel) {
  const ObserverModel truth{1.5, 0.3};
  std::vector<CurvePoint> points;
  for (double dc : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    points.push_back({dc, PsychometricResponse(truth, dc), 10});
  }
  const auto fit = FitCurve(points);
  EXPECT_NEAR(fit.model.sigma, 1.5, 1e-6);
  EXPECT_NEAR(fit.model.bias, 0.3, 1e-6);
  EXPECT_EQ(fit.points_used, 5u);
  EXPECT_GE(fit.residual, 0.0);
}

TEST(FitCurve, RecoversRandomModels) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const ObserverModel truth{rng.Uniform(0.3, 5.0), rng.Uniform(-2.0, 2.0)};
    std::vector<CurvePoint> points;
    for (int k = 0; k < 6; ++k) {
      const double dc = -truth.bias + truth.sigma * (k - 2.5) * 0.8;
      points.push_back({dc, PsychometricResponse(truth, dc), 1 + rng.Below(50)});
    }
    const auto fit = FitCurve(points);
    EXPECT_NEAR(fit.model.sigma, truth.sigma, 1e-6);
    EXPECT_NEAR(fit.model.bias, truth.bias, 1e-6);
  }
}

TEST(FitCurve, TwoPointsForceTheLine) {
  const std::vector<CurvePoint> points{{0.0, 0.5, 1}, {1.0, CumulativeGaussian(1.0), 1}};
  const auto fit = FitCurve(points);
  EXPECT_NEAR(fit.model.sigma, 1.0, 1e-9);
  EXPECT_NEAR(fit.model.bias, 0.0, 1e-9);
}

TEST(FitCurve, Errors) {
  ExpectErrorCode(ErrorCode::kNonMonotoneData, [] {
    FitCurve(std::vector<CurvePoint>{{0.0, 0.5, 1}, {1.0, 0.5, 1}, {2.0, 0.5, 1}});
  });
  ExpectErrorCode(ErrorCode::kDegenerateFit, [] {
    FitCurve(std::vector<CurvePoint>{{1.0, 0.2, 1}, {1.0, 0.8, 1}});
  });
  ExpectErrorCode(ErrorCode::kNonMonotoneData, [] {
    FitCurve(std::vector<CurvePoint>{{0.0, 0.9, 1}, {1.0, 0.6, 1}});
  });
}

TEST(FitCurve, ClampsExtremeAccuracies) {
  const auto fit = FitCurve(std::vector<CurvePoint>{{0.0, 0.0, 1}, {1.0, 1.0, 1}});
  EXPECT_TRUE(std::isfinite(fit.model.sigma));
  EXPECT_NEAR(1.0 / fit.model.sigma, 2.0 * Probit(1.0 - kFitClamp), 1e-9);
}

double Tolerance3Sigma(double p, std::size_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

TEST(SimulateJointCurve, NegligiblePartnerFollowsSoloCurve) {
  const Models models{{1.0, 0.0}, {1e6, 0.0}};
  const std::vector<double> grid{-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto points = SimulateJointCurve(models, grid, 20000, 5);
  for (const auto& p : points) {
    const double expected = PsychometricResponse({1.0, 0.0}, p.delta_c);
    EXPECT_NEAR(p.accuracy, expected, Tolerance3Sigma(expected, 20000) + 1e-3);
    EXPECT_EQ(p.count, 20000u);
  }
}

TEST(SimulateJointCurve, MidpointAtMinusJointBias) {
  const Models models{{2.0, 0.0}, {2.0, 1.0}};
  const double dc = -JointModel(models).bias;
  const auto points = SimulateJointCurve(models, std::vector<double>{dc}, 100000, 6);
  EXPECT_NEAR(points[0].accuracy, 0.5, Tolerance3Sigma(0.5, 100000));
}

TEST(SimulateJointCurve, MatchesClosedFormAtOneGridPoint) {
  const Models models = FromSigmas({1.0, 2.0});
  const auto joint = JointModel(models);
  const auto points = SimulateJointCurve(models, std::vector<double>{1.0}, 100000, 7);
  EXPECT_NEAR(points[0].accuracy, CumulativeGaussian((1.0 + joint.bias) / joint.sigma), 0.005);
}

TEST(SimulateJointCurve, DeterministicGivenSeed) {
  const Models models = FromSigmas({1.0, 3.0, 0.5});
  const std::vector<double> grid{-1.0, 0.0, 0.5};
  const auto a = SimulateJointCurve(models, grid, 5000, 42);
  const auto b = SimulateJointCurve(models, grid, 5000, 42);
  const auto c = SimulateJointCurve(models, grid, 5000, 43);
  bool any_difference = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(a[i].accuracy, b[i].accuracy);
    any_difference = any_difference || a[i].accuracy != c[i].accuracy;
  }
  EXPECT_TRUE(any_difference);
}

TEST(SimulateJointCurve, Preconditions) {
  const Models models = FromSigmas({1.0, 2.0});
  ExpectErrorCode(ErrorCode::kInvalidArgument,
                  [&] { SimulateJointCurve(models, std::vector<double>{}, 10, 0); });
  ExpectErrorCode(ErrorCode::kInvalidArgument,
                  [&] { SimulateJointCurve(models, std::vector<double>{0.0}, 0, 0); });
}

}  // namespace
}  // namespace mcil::psychometric
