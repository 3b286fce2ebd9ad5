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

#ifndef MCIL_CORE_LABELING_HPP_
#define MCIL_CORE_LABELING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/data.hpp"
#include "core/nn.hpp"

namespace mcil::labeling {

// Distribution over K classes; entries in [0, 1] summing to 1.
struct AmbiguousLabel {
  std::vector<double> probabilities;
};

struct VoteRecord {
  std::vector<int> counts;  // votes per class
  int total = 0;            // number of voters
};

VoteRecord CountVotes(std::span<const int> predicted_classes, int num_classes);

// probabilities_k = votes_k / N.
AmbiguousLabel Vote(std::span<const int> predicted_classes, int num_classes);

enum class VoteMode {
  kHard,  // each classifier casts its argmax class
  kSoft,  // mean of the output distributions
};

struct ConstructedLabel {
  std::size_t sample_index = 0;  // position in the pool
  AmbiguousLabel label;
};

// One label per pool sample, in pool order.
std::vector<ConstructedLabel> ConstructLabels(std::span<const nn::Network> classifiers,
                                              const data::Dataset& pool,
                                              VoteMode mode = VoteMode::kHard);

// Mean KL(one_hot(truth) || label) over the pool; labels assigning zero mass
// to the truth contribute -log(kLogClamp).
double LabelAudit(std::span<const ConstructedLabel> labels, std::span<const int> truths);

// Header sample_index,p0,...,p{K-1}.
std::string FormatLabelsCsv(std::span<const ConstructedLabel> labels);

}  // namespace mcil::labeling

#endif  // MCIL_CORE_LABELING_HPP_
