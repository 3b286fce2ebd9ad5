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

#ifndef MCIL_CORE_METRICS_HPP_
#define MCIL_CORE_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mcil::metrics {

double Accuracy(std::span<const int> predictions, std::span<const int> truths);

// Recall per true class; NaN for classes absent from truths.
std::vector<double> PerClassAccuracy(std::span<const int> predictions,
                                     std::span<const int> truths, int num_classes);

// counts[t][p]: rows are true classes, columns predictions.
struct ConfusionMatrix {
  std::vector<std::vector<long>> counts;
  std::vector<std::vector<double>> row_percentages;  // rows sum to 100, or all 0
};

ConfusionMatrix Confusion(std::span<const int> predictions, std::span<const int> truths,
                          int num_classes);

std::string FormatConfusionCsv(const ConfusionMatrix& matrix);

enum class AgreementBand { kPoor, kSlight, kFair, kModerate, kSubstantial, kAlmostPerfect };

// Landis-Koch scale.
AgreementBand AgreementBandOf(double kappa);
const char* AgreementBandName(AgreementBand band);

struct KappaReport {
  double kappa = 0.0;
  double p_bar = 0.0;    // mean per-item agreement
  double p_e_bar = 0.0;  // chance agreement
  AgreementBand band = AgreementBand::kPoor;
};

// Fleiss' kappa for a d x c table of vote counts, every row summing to
// raters_per_item. Per-item agreement is (sum_j v_ij^2 - n) / (n (n - 1)),
// i.e. n is subtracted once per item. When chance agreement is 1 every vote
// fell in one category and kappa is defined as 1.
KappaReport FleissKappa(const std::vector<std::vector<int>>& vote_table, int raters_per_item);

// Builds the d x c vote table from per-rater predictions
// (predictions[r][i] = class rater r assigned to item i).
std::vector<std::vector<int>> VoteTable(const std::vector<std::vector<int>>& predictions,
                                        int num_classes);

// Features are unit-normalized (zero vectors stay zero). Returns
// mean distance to own class centroid / mean distance to the global centroid,
// or 0 when every sample coincides with the global centroid.
double InnerClassDistance(const std::vector<std::vector<double>>& features,
                          std::span<const int> labels);

}  // namespace mcil::metrics

#endif  // MCIL_CORE_METRICS_HPP_
