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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace mcil::psychometric {

namespace {

void RequireGroup(std::span<const ObserverModel> models) {
  Require(models.size() >= 2, "joint model needs at least two observers, got " +
                                  std::to_string(models.size()));
  for (const auto& m : models) Validate(m);
}

// Acklam's rational approximation; relative error about 1e-9 before the
// Halley step in Probit.
double ProbitInitial(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

void Validate(const ObserverModel& model) {
  Require(std::isfinite(model.sigma) && model.sigma > 0.0,
          "observer sigma must be positive and finite");
  Require(std::isfinite(model.bias), "observer bias must be finite");
}

double CumulativeGaussian(double z) {
  Require(std::isfinite(z), "cumulative_gaussian: argument must be finite");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double Probit(double p) {
  Require(p > 0.0 && p < 1.0, "probit: probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  double x = ProbitInitial(p);
  // One Halley step brings the estimate to full double precision.
  const double e = CumulativeGaussian(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double PsychometricResponse(const ObserverModel& model, double delta_c) {
  Validate(model);
  Require(!std::isnan(delta_c), "psychometric_response: delta_c is NaN");
  if (std::isinf(delta_c)) return delta_c > 0 ? 1.0 : 0.0;
  return CumulativeGaussian((delta_c + model.bias) / model.sigma);
}

double Slope(const ObserverModel& model) {
  Validate(model);
  return 1.0 / std::sqrt(2.0 * std::numbers::pi * model.sigma * model.sigma);
}

std::vector<double> JointWeights(std::span<const ObserverModel> models) {
  RequireGroup(models);
  // prod_j s_j^2 / (s_i^2 sum_j prod_k s_k^2 / s_j^2) reduces to normalized
  // inverse variances; this form cannot overflow for large groups.
  std::vector<double> weights;
  weights.reserve(models.size());
  double total = 0.0;
  for (const auto& m : models) {
    const double precision = 1.0 / (m.sigma * m.sigma);
    weights.push_back(precision);
    total += precision;
  }
  for (auto& w : weights) w /= total;
  return weights;
}

double JointVariance(std::span<const ObserverModel> models) {
  const std::vector<double> weights = JointWeights(models);
  double variance = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    variance += weights[i] * weights[i] * models[i].sigma * models[i].sigma;
  }
  return variance;
}

ObserverModel JointModel(std::span<const ObserverModel> models) {
  const std::vector<double> weights = JointWeights(models);
  double bias = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) bias += weights[i] * models[i].bias;
  return ObserverModel{std::sqrt(JointVariance(models)), bias};
}

double JointVarianceClosedForm(std::span<const ObserverModel> models) {
  RequireGroup(models);
  double product = 1.0;
  for (const auto& m : models) product *= m.sigma * m.sigma;
  double denominator = 0.0;
  for (const auto& m : models) denominator += product / (m.sigma * m.sigma);
  return product / denominator;
}

double JointSlopeApprox(std::span<const ObserverModel> models) {
  RequireGroup(models);
  double sum = 0.0;
  for (const auto& m : models) {
    const double s = Slope(m);
    sum += s * s;
  }
  return std::sqrt(sum);
}

CurveFit FitCurve(std::span<const CurvePoint> points) {
  Require(points.size() >= 2, "fit_curve needs at least two points");
  double w_sum = 0.0, x_mean = 0.0, y_mean = 0.0;
  std::vector<double> ys;
  ys.reserve(points.size());
  for (const auto& p : points) {
    Require(std::isfinite(p.delta_c), "fit_curve: delta_c must be finite");
    Require(std::isfinite(p.accuracy) && p.accuracy >= 0.0 && p.accuracy <= 1.0,
            "fit_curve: accuracy must lie in [0, 1]");
    Require(p.count > 0, "fit_curve: point counts must be positive");
    const double acc = std::clamp(p.accuracy, kFitClamp, 1.0 - kFitClamp);
    ys.push_back(Probit(acc));
    const double w = static_cast<double>(p.count);
    w_sum += w;
    x_mean += w * p.delta_c;
  }
  x_mean /= w_sum;
  for (std::size_t i = 0; i < points.size(); ++i) {
    y_mean += static_cast<double>(points[i].count) * ys[i];
  }
  y_mean /= w_sum;

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double w = static_cast<double>(points[i].count);
    const double dx = points[i].delta_c - x_mean;
    sxx += w * dx * dx;
    sxy += w * dx * (ys[i] - y_mean);
  }
  if (!(sxx > 0.0)) {
    Fail(ErrorCode::kDegenerateFit, "fit_curve: all delta_c values are equal");
  }
  const double line_slope = sxy / sxx;
  if (!(line_slope > 0.0)) {
    Fail(ErrorCode::kNonMonotoneData,
         "fit_curve: accuracy does not increase with clarity (slope " +
             std::to_string(line_slope) + ")");
  }
  const double intercept = y_mean - line_slope * x_mean;

  CurveFit fit;
  fit.model.sigma = 1.0 / line_slope;
  fit.model.bias = intercept * fit.model.sigma;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = ys[i] - intercept - line_slope * points[i].delta_c;
    fit.residual += static_cast<double>(points[i].count) * r * r;
  }
  fit.points_used = points.size();
  return fit;
}

std::vector<CurvePoint> SimulateJointCurve(std::span<const ObserverModel> models,
                                           std::span<const double> delta_c_grid,
                                           std::size_t trials_per_point,
                                           std::uint64_t seed) {
  Require(!delta_c_grid.empty(), "simulate_joint_curve: grid is empty");
  Require(trials_per_point >= 1, "simulate_joint_curve: trials must be >= 1");
  const std::vector<double> weights = JointWeights(models);

  std::vector<CurvePoint> curve;
  curve.reserve(delta_c_grid.size());
  for (std::size_t g = 0; g < delta_c_grid.size(); ++g) {
    const double dc = delta_c_grid[g];
    Require(std::isfinite(dc), "simulate_joint_curve: grid values must be finite");
    Rng rng(DeriveSeed(seed, g));
    std::size_t correct = 0;
    for (std::size_t t = 0; t < trials_per_point; ++t) {
      double fused = 0.0;
      for (std::size_t i = 0; i < models.size(); ++i) {
        const double confidence = dc + models[i].bias + models[i].sigma * rng.Normal();
        fused += weights[i] * confidence;
      }
      if (fused > 0.0) ++correct;
    }
    curve.push_back({dc,
                     static_cast<double>(correct) / static_cast<double>(trials_per_point),
                     trials_per_point});
  }
  return curve;
}

}  // namespace mcil::psychometric
