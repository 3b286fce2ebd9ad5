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

#ifndef MCIL_CORE_BATCH_HPP_
#define MCIL_CORE_BATCH_HPP_

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "core/data.hpp"

namespace mcil {

// feature_dim x n, one column per sample.
inline Eigen::MatrixXd FeatureMatrix(const data::Dataset& dataset) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dataset.feature_dim()),
                    static_cast<Eigen::Index>(dataset.size()));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& f = dataset[i].features;
    for (std::size_t j = 0; j < f.size(); ++j) {
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = f[j];
    }
  }
  return m;
}

inline Eigen::MatrixXd OneHotMatrix(std::span<const int> labels, int num_classes) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(num_classes, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    m(labels[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return m;
}

}  // namespace mcil

#endif  // MCIL_CORE_BATCH_HPP_
