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

#ifndef MCIL_CORE_DATA_HPP_
#define MCIL_CORE_DATA_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcil::data {

struct Sample {
  std::vector<double> features;
  std::optional<int> label;
  std::optional<double> clarity;  // in [0, 1]
};

// Immutable, nonempty, dimension-consistent collection of samples.
class Dataset {
 public:
  Dataset(std::vector<Sample> samples, int num_classes, std::size_t feature_dim);

  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  int num_classes() const { return num_classes_; }
  std::size_t feature_dim() const { return feature_dim_; }

  bool all_labeled() const;
  bool all_have_clarity() const;
  // Throws kInvalidArgument naming the first unlabeled sample.
  std::vector<int> labels() const;
  double mean_clarity() const;

  // Copy with every label removed.
  Dataset WithoutLabels() const;
  Dataset Subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Sample> samples_;
  int num_classes_;
  std::size_t feature_dim_;
};

// Equal-prior isotropic Gaussian mixture.
struct Mixture {
  std::vector<std::vector<double>> means;  // num_classes x dim
  double noise_scale = 1.0;

  int num_classes() const { return static_cast<int>(means.size()); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
};

struct GeneratorParams {
  int num_classes = 5;
  std::size_t feature_dim = 16;
  std::size_t per_class = 4080;
  // Optional per-class sizes overriding per_class (imbalanced data).
  std::vector<std::size_t> per_class_counts;
  double separation = 2.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 0;

  void Validate() const;
  std::size_t ClassCount(int k) const;
};

// Means at separation * (unit vectors spread over the sphere in the first
// min(d, 3) coordinates), zero in the remaining coordinates.
Mixture MakeMixture(const GeneratorParams& params);

Dataset GenerateSynthetic(const GeneratorParams& params);

// Margin between the two largest posterior class probabilities.
double ComputeClarity(std::span<const double> features, const Mixture& mixture);

// Labels that exist but must not be read by training code. Every read is
// counted so tests can assert that no stage peeked.
class HiddenLabels {
 public:
  HiddenLabels() = default;
  explicit HiddenLabels(std::vector<int> labels) : labels_(std::move(labels)) {}

  const std::vector<int>& Reveal() const {
    ++reads_;
    return labels_;
  }
  std::size_t size() const { return labels_.size(); }
  std::size_t reads() const { return reads_; }

 private:
  std::vector<int> labels_;
  mutable std::size_t reads_ = 0;
};

struct SplitFractions {
  double precise = 0.30;
  double pool = 0.65;
  double ambiguous = 0.05;
};

// d1: clearest, labeled. d2: middle, labels withheld. d3: least clear,
// labeled. *_index hold positions in the source dataset.
struct Splits {
  Dataset d1;
  Dataset d2;
  Dataset d3;
  std::vector<std::size_t> d1_index;
  std::vector<std::size_t> d2_index;
  std::vector<std::size_t> d3_index;
  HiddenLabels d2_hidden;
};

// Sorts by clarity descending (ties in seeded random order) and cuts the
// ranking. D1 and D3 sizes are floored; D2 takes the remainder.
Splits Split(const Dataset& dataset, const SplitFractions& fractions,
             std::uint64_t seed);

// CSV with header f0,...,f{d-1},label,clarity. Empty label or clarity cells
// mean "absent". num_classes < 0 infers K from the largest label.
Dataset LoadCsv(const std::string& path, int num_classes = -1);
Dataset ParseCsv(const std::string& text, int num_classes = -1);
void SaveCsv(const Dataset& dataset, const std::string& path);
std::string FormatCsv(const Dataset& dataset);

}  // namespace mcil::data

#endif  // MCIL_CORE_DATA_HPP_
