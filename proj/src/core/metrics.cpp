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

#include "core/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "core/error.hpp"

namespace mcil::metrics {

namespace {

void RequirePairs(std::span<const int> predictions, std::span<const int> truths) {
  Require(!truths.empty(), "metrics: empty input");
  Require(predictions.size() == truths.size(),
          "metrics: " + std::to_string(predictions.size()) + " predictions for " +
              std::to_string(truths.size()) + " truths");
}

void RequireClass(int c, int num_classes) {
  Require(c >= 0 && c < num_classes, "metrics: class " + std::to_string(c) + " outside [0, " +
                                         std::to_string(num_classes) + ")");
}

double Distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double Accuracy(std::span<const int> predictions, std::span<const int> truths) {
  RequirePairs(predictions, truths);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) correct += predictions[i] == truths[i];
  return static_cast<double>(correct) / static_cast<double>(truths.size());
}

std::vector<double> PerClassAccuracy(std::span<const int> predictions,
                                     std::span<const int> truths, int num_classes) {
  RequirePairs(predictions, truths);
  std::vector<double> hits(static_cast<std::size_t>(num_classes), 0.0);
  std::vector<double> support(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    RequireClass(truths[i], num_classes);
    support[static_cast<std::size_t>(truths[i])] += 1.0;
    if (predictions[i] == truths[i]) hits[static_cast<std::size_t>(truths[i])] += 1.0;
  }
  for (std::size_t k = 0; k < hits.size(); ++k) {
    hits[k] = support[k] > 0.0 ? hits[k] / support[k] : std::numeric_limits<double>::quiet_NaN();
  }
  return hits;
}

ConfusionMatrix Confusion(std::span<const int> predictions, std::span<const int> truths,
                          int num_classes) {
  RequirePairs(predictions, truths);
  const auto k = static_cast<std::size_t>(num_classes);
  ConfusionMatrix cm;
  cm.counts.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < truths.size(); ++i) {
    RequireClass(truths[i], num_classes);
    RequireClass(predictions[i], num_classes);
    ++cm.counts[static_cast<std::size_t>(truths[i])][static_cast<std::size_t>(predictions[i])];
  }
  cm.row_percentages.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < k; ++t) {
    long row = 0;
    for (long c : cm.counts[t]) row += c;
    if (row == 0) continue;
    for (std::size_t p = 0; p < k; ++p) {
      cm.row_percentages[t][p] = 100.0 * static_cast<double>(cm.counts[t][p]) / static_cast<double>(row);
    }
  }
  return cm;
}

std::string FormatConfusionCsv(const ConfusionMatrix& matrix) {
  std::string out = "true\\pred";
  for (std::size_t p = 0; p < matrix.counts.size(); ++p) out += "," + std::to_string(p);
  out += '\n';
  for (std::size_t t = 0; t < matrix.counts.size(); ++t) {
    out += std::to_string(t);
    for (long c : matrix.counts[t]) out += "," + std::to_string(c);
    out += '\n';
  }
  return out;
}

AgreementBand AgreementBandOf(double kappa) {
  if (kappa < 0.0) return AgreementBand::kPoor;
  if (kappa <= 0.20) return AgreementBand::kSlight;
  if (kappa <= 0.40) return AgreementBand::kFair;
  if (kappa <= 0.60) return AgreementBand::kModerate;
  if (kappa <= 0.80) return AgreementBand::kSubstantial;
  return AgreementBand::kAlmostPerfect;
}

const char* AgreementBandName(AgreementBand band) {
  switch (band) {
    case AgreementBand::kPoor: return "poor";
    case AgreementBand::kSlight: return "slight";
    case AgreementBand::kFair: return "fair";
    case AgreementBand::kModerate: return "moderate";
    case AgreementBand::kSubstantial: return "substantial";
    case AgreementBand::kAlmostPerfect: return "almost-perfect";
  }
  return "unknown";
}

KappaReport FleissKappa(const std::vector<std::vector<int>>& vote_table, int raters_per_item) {
  const int n = raters_per_item;
  Require(!vote_table.empty(), "fleiss_kappa: table has no items");
  Require(n >= 2, "fleiss_kappa: need at least two raters per item");
  const std::size_t c = vote_table.front().size();
  Require(c >= 2, "fleiss_kappa: need at least two categories");
  const double d = static_cast<double>(vote_table.size());
  const double dn = static_cast<double>(n);

  std::vector<double> column_totals(c, 0.0);
  double p_sum = 0.0;
  for (std::size_t i = 0; i < vote_table.size(); ++i) {
    const auto& row = vote_table[i];
    Require(row.size() == c, "fleiss_kappa: ragged table at row " + std::to_string(i));
    long row_sum = 0;
    double sq = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      Require(row[j] >= 0, "fleiss_kappa: negative count at row " + std::to_string(i));
      row_sum += row[j];
      sq += static_cast<double>(row[j]) * row[j];
      column_totals[j] += row[j];
    }
    Require(row_sum == n, "fleiss_kappa: row " + std::to_string(i) + " sums to " +
                              std::to_string(row_sum) + ", expected " + std::to_string(n));
    p_sum += (sq - dn) / (dn * (dn - 1.0));
  }
  KappaReport report;
  report.p_bar = p_sum / d;
  for (double total : column_totals) {
    const double pj = total / (d * dn);
    report.p_e_bar += pj * pj;
  }
  if (report.p_e_bar >= 1.0) {
    report.kappa = 1.0;
  } else {
    report.kappa = (report.p_bar - report.p_e_bar) / (1.0 - report.p_e_bar);
  }
  report.band = AgreementBandOf(report.kappa);
  return report;
}

std::vector<std::vector<int>> VoteTable(const std::vector<std::vector<int>>& predictions,
                                        int num_classes) {
  Require(!predictions.empty(), "vote_table: no raters");
  const std::size_t items = predictions.front().size();
  std::vector<std::vector<int>> table(items, std::vector<int>(static_cast<std::size_t>(num_classes), 0));
  for (const auto& rater : predictions) {
    Require(rater.size() == items, "vote_table: raters disagree on item count");
    for (std::size_t i = 0; i < items; ++i) {
      RequireClass(rater[i], num_classes);
      ++table[i][static_cast<std::size_t>(rater[i])];
    }
  }
  return table;
}

double InnerClassDistance(const std::vector<std::vector<double>>& features,
                          std::span<const int> labels) {
  Require(!features.empty(), "inner_class_distance: empty input");
  Require(features.size() == labels.size(), "inner_class_distance: features/labels length mismatch");
  const std::size_t dim = features.front().size();

  std::vector<std::vector<double>> unit = features;
  for (auto& v : unit) {
    Require(v.size() == dim, "inner_class_distance: ragged feature vectors");
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
  }

  std::vector<double> global(dim, 0.0);
  std::map<int, std::pair<std::vector<double>, std::size_t>> centroids;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    auto& [sum, count] = centroids[labels[i]];
    if (sum.empty()) sum.assign(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      sum[j] += unit[i][j];
      global[j] += unit[i][j];
    }
    ++count;
  }
  for (double& g : global) g /= static_cast<double>(unit.size());
  for (auto& [label, entry] : centroids) {
    for (double& s : entry.first) s /= static_cast<double>(entry.second);
  }

  double intra = 0.0, overall = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    intra += Distance(unit[i], centroids[labels[i]].first);
    overall += Distance(unit[i], global);
  }
  if (overall == 0.0) return 0.0;
  return intra / overall;
}

}  // namespace mcil::metrics
