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

#ifndef MCIL_CORE_PSYCHOMETRIC_HPP_
#define MCIL_CORE_PSYCHOMETRIC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcil::psychometric {

// Cumulative-Gaussian observer: P(dc) = H((dc + bias) / sigma).
// sigma and bias are in clarity units; sigma must be positive.
struct ObserverModel {
  double sigma = 1.0;
  double bias = 0.0;
};

void Validate(const ObserverModel& model);

// Standard normal CDF, evaluated through erfc.
double CumulativeGaussian(double z);

// Inverse of CumulativeGaussian on (0, 1).
double Probit(double p);

double PsychometricResponse(const ObserverModel& model, double delta_c);

// Maximum slope of the psychometric curve, 1 / sqrt(2 pi sigma^2).
double Slope(const ObserverModel& model);

// Inverse-variance weights of the optimally interacting group. Requires at
// least two observers.
std::vector<double> JointWeights(std::span<const ObserverModel> models);

// sum w_i^2 sigma_i^2 with the JointWeights.
double JointVariance(std::span<const ObserverModel> models);

// Fused observer: bias = sum w_i b_i, sigma^2 = sum w_i^2 sigma_i^2.
ObserverModel JointModel(std::span<const ObserverModel> models);

// Product-over-sum form of the joint variance, computed without weights.
// Algebraically equal to JointModel(models).sigma^2.
double JointVarianceClosedForm(std::span<const ObserverModel> models);

// sqrt(sum_i Slope(model_i)^2).
double JointSlopeApprox(std::span<const ObserverModel> models);

struct CurvePoint {
  double delta_c = 0.0;
  double accuracy = 0.0;
  std::size_t count = 1;
};

struct CurveFit {
  ObserverModel model;
  double residual = 0.0;  // count-weighted squared probit residual
  std::size_t points_used = 0;
};

// Accuracies are clamped to [1e-6, 1 - 1e-6] before the probit transform.
inline constexpr double kFitClamp = 1e-6;

// Count-weighted least squares of probit(accuracy) on delta_c. The fitted
// line has slope 1/sigma and intercept bias/sigma.
// Throws kDegenerateFit when all delta_c coincide and kNonMonotoneData when
// the fitted slope is not positive.
CurveFit FitCurve(std::span<const CurvePoint> points);

// Monte Carlo check of the fused decision rule: each observer reports a
// confidence ~ N(dc + b_i, sigma_i^2); the group answers correctly when the
// JointWeights-weighted sum is positive. Returned points carry
// count = trials_per_point.
std::vector<CurvePoint> SimulateJointCurve(std::span<const ObserverModel> models,
                                           std::span<const double> delta_c_grid,
                                           std::size_t trials_per_point,
                                           std::uint64_t seed);

}  // namespace mcil::psychometric

#endif  // MCIL_CORE_PSYCHOMETRIC_HPP_
