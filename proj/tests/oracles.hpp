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

// Independent reference computations used by the tests. None of these call
// into the library.

#ifndef MCIL_TESTS_ORACLES_HPP_
#define MCIL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace mcil::oracle {

// Standard normal CDF by composite Simpson quadrature of the density on
// [0, |z|], added to or subtracted from 1/2.
inline double NormalCdfQuadrature(double z, int intervals = 20000) {
  const double a = std::abs(z);
  if (a == 0.0) return 0.5;
  const double h = a / intervals;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double sum = pdf(0.0) + pdf(a);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * pdf(i * h);
  const double half = sum * h / 3.0;
  return z > 0 ? 0.5 + half : 0.5 - half;
}

// Fleiss kappa from first principles: observed agreement is the share of
// agreeing ordered rater pairs per item, chance agreement the probability
// that two ratings drawn from the pooled marginal distribution coincide.
inline double KappaByPairs(const std::vector<std::vector<int>>& table, int raters) {
  const std::size_t categories = table.front().size();
  double observed = 0.0;
  std::vector<double> marginal(categories, 0.0);
  for (const auto& row : table) {
    // Expand the row into individual ratings and count agreeing pairs.
    std::vector<int> ratings;
    for (std::size_t j = 0; j < categories; ++j) {
      for (int v = 0; v < row[j]; ++v) ratings.push_back(static_cast<int>(j));
      marginal[j] += row[j];
    }
    long agree = 0, pairs = 0;
    for (std::size_t a = 0; a < ratings.size(); ++a) {
      for (std::size_t b = 0; b < ratings.size(); ++b) {
        if (a == b) continue;
        ++pairs;
        agree += ratings[a] == ratings[b];
      }
    }
    observed += static_cast<double>(agree) / static_cast<double>(pairs);
  }
  observed /= static_cast<double>(table.size());
  double chance = 0.0;
  const double total = static_cast<double>(table.size()) * raters;
  for (double m : marginal) chance += (m / total) * (m / total);
  if (chance >= 1.0) return 1.0;
  return (observed - chance) / (1.0 - chance);
}

// True when some direction on a fine angular grid separates the two labeled
// point sets in the plane by a threshold on the projection.
inline bool LinearlySeparable2d(const std::vector<std::array<double, 2>>& points,
                                const std::vector<int>& labels, int directions = 7200) {
  for (int k = 0; k < directions; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / directions;
    const double ux = std::cos(angle), uy = std::sin(angle);
    double max0 = -INFINITY, min1 = INFINITY;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double p = ux * points[i][0] + uy * points[i][1];
      if (labels[i] == 0) {
        max0 = std::max(max0, p);
      } else {
        min1 = std::min(min1, p);
      }
    }
    if (max0 < min1) return true;
  }
  return false;
}

}  // namespace mcil::oracle

#endif  // MCIL_TESTS_ORACLES_HPP_
