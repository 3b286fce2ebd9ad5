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

#include "core/labeling.hpp"

#include <cmath>

#include "core/batch.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace mcil::labeling {

VoteRecord CountVotes(std::span<const int> predicted_classes, int num_classes) {
  Require(num_classes >= 1, "vote: class count must be positive");
  Require(!predicted_classes.empty(), "vote: no votes cast");
  VoteRecord record;
  record.counts.assign(static_cast<std::size_t>(num_classes), 0);
  for (int c : predicted_classes) {
    Require(c >= 0 && c < num_classes,
            "vote: class " + std::to_string(c) + " outside [0, " + std::to_string(num_classes) + ")");
    ++record.counts[static_cast<std::size_t>(c)];
  }
  record.total = static_cast<int>(predicted_classes.size());
  return record;
}

AmbiguousLabel Vote(std::span<const int> predicted_classes, int num_classes) {
  const VoteRecord record = CountVotes(predicted_classes, num_classes);
  AmbiguousLabel label;
  label.probabilities.reserve(record.counts.size());
  for (int c : record.counts) {
    label.probabilities.push_back(static_cast<double>(c) / record.total);
  }
  return label;
}

std::vector<ConstructedLabel> ConstructLabels(std::span<const nn::Network> classifiers,
                                              const data::Dataset& pool, VoteMode mode) {
  Require(classifiers.size() >= 2, "construct_labels: need at least two classifiers");
  const int k = pool.num_classes();
  for (const auto& net : classifiers) {
    Require(net.input_dim() == pool.feature_dim(),
            "construct_labels: classifier '" + net.spec().name + "' expects " +
                std::to_string(net.input_dim()) + " features, pool has " +
                std::to_string(pool.feature_dim()));
    Require(net.output_dim() == static_cast<std::size_t>(k),
            "construct_labels: classifier '" + net.spec().name + "' has " +
                std::to_string(net.output_dim()) + " outputs, pool has " + std::to_string(k) +
                " classes");
  }
  const Eigen::MatrixXd inputs = FeatureMatrix(pool);
  const std::size_t n = pool.size();
  std::vector<ConstructedLabel> out(n);

  if (mode == VoteMode::kHard) {
    std::vector<std::vector<int>> predictions;
    predictions.reserve(classifiers.size());
    for (const auto& net : classifiers) predictions.push_back(nn::PredictBatch(net, inputs));
    std::vector<int> ballots(classifiers.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < classifiers.size(); ++c) ballots[c] = predictions[c][i];
      out[i] = {i, Vote(ballots, k)};
    }
    return out;
  }

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(n));
  for (const auto& net : classifiers) mean += net.ForwardBatch(inputs);
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = mean.col(static_cast<Eigen::Index>(i));
    const double total = col.sum();
    AmbiguousLabel label;
    label.probabilities.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) label.probabilities.push_back(col(j) / total);
    out[i] = {i, std::move(label)};
  }
  return out;
}

double LabelAudit(std::span<const ConstructedLabel> labels, std::span<const int> truths) {
  Require(!labels.empty() && labels.size() == truths.size(),
          "label audit: labels and truths must be nonempty and equally long");
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& p = labels[i].label.probabilities;
    Require(truths[i] >= 0 && static_cast<std::size_t>(truths[i]) < p.size(),
            "label audit: truth out of range");
    sum -= std::log(std::max(p[static_cast<std::size_t>(truths[i])], nn::kLogClamp));
  }
  return sum / static_cast<double>(labels.size());
}

std::string FormatLabelsCsv(std::span<const ConstructedLabel> labels) {
  std::string out = "sample_index";
  const std::size_t k = labels.empty() ? 0 : labels.front().label.probabilities.size();
  for (std::size_t j = 0; j < k; ++j) out += ",p" + std::to_string(j);
  out += '\n';
  for (const auto& l : labels) {
    out += std::to_string(l.sample_index);
    for (double p : l.label.probabilities) {
      out += ',';
      out += text::FormatDouble(p, 17);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mcil::labeling
