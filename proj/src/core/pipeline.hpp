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

#ifndef MCIL_CORE_PIPELINE_HPP_
#define MCIL_CORE_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/data.hpp"
#include "core/labeling.hpp"
#include "core/metrics.hpp"
#include "core/nn.hpp"
#include "core/psychometric.hpp"

namespace mcil::pipeline {

struct DataSource {
  enum class Kind { kSynthetic, kCsv };
  Kind kind = Kind::kSynthetic;
  data::GeneratorParams generator;  // generator.seed is derived from the global seed
  std::string csv_path;             // kCsv only; rows need clarity scores
  std::string base_dir;             // resolves a relative csv_path; not part of the echo
  data::SplitFractions fractions;
};

struct ExperimentConfig {
  std::vector<nn::ArchitectureSpec> zoo;
  DataSource data;
  nn::TrainConfig stage1;  // precise loss
  nn::TrainConfig stage2;  // ambiguous loss
  std::size_t cv_folds = 5;
  bool soft_vote = false;
  std::uint64_t global_seed = 0;
  // Worker threads for per-classifier tasks; 0 = hardware concurrency.
  // Results do not depend on it.
  std::size_t threads = 0;

  // Throws kValidation with a field path in the message.
  void Validate() const;
};

// Toy-scale defaults: five diverse classifiers, K = 5, d = 16, 20400 samples.
ExperimentConfig DefaultExperimentConfig();
std::vector<nn::ArchitectureSpec> DefaultZoo();

// Independent stream per classifier index, so results do not depend on the
// order in which classifiers are trained.
std::uint64_t ClassifierSeed(std::uint64_t global_seed, std::size_t index);

data::Dataset LoadSourceData(const ExperimentConfig& config);
data::Splits MakeSplits(const ExperimentConfig& config, const data::Dataset& source);

// Seeded partition of [0, n) into k folds of size floor or ceil of n / k.
std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvSummary {
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double stddev = 0.0;
};

struct PreciseStageResult {
  std::vector<nn::Network> networks;
  std::vector<CvSummary> cv;
  std::vector<std::vector<double>> histories;  // final-fit training loss
};

// Cross-validates each classifier on d1 (report only), then trains it on
// all of d1.
PreciseStageResult StagePrecise(std::span<const nn::ArchitectureSpec> zoo,
                                const data::Dataset& d1, const nn::TrainConfig& stage1,
                                std::size_t cv_folds, std::uint64_t global_seed,
                                std::size_t threads = 1);

std::vector<labeling::ConstructedLabel> StageConstruct(std::span<const nn::Network> networks,
                                                       const data::Dataset& d2, bool soft_vote);

struct InteractiveStageResult {
  std::vector<nn::Network> networks;
  std::vector<std::vector<double>> histories;  // epoch-mean KL
};

// Fine-tunes a copy of each network on the constructed labels with the KL
// loss, stopping early once the epoch-mean KL changes by less than 1e-6.
InteractiveStageResult StageInteractive(std::span<const nn::Network> networks,
                                        const data::Dataset& d2,
                                        std::span<const labeling::ConstructedLabel> labels,
                                        const nn::TrainConfig& stage2,
                                        std::uint64_t global_seed, std::size_t threads = 1);

inline constexpr double kInteractiveStopTolerance = 1e-6;
inline constexpr std::size_t kClarityBins = 10;

struct FitOutcome {
  std::vector<psychometric::CurvePoint> bins;
  std::optional<psychometric::CurveFit> fit;
  std::string error;  // set when the fit failed
};

// Accuracy-vs-clarity in equal-count bins, then FitCurve.
FitOutcome FitAccuracyCurve(std::span<const int> predictions, std::span<const int> truths,
                            std::span<const double> clarity,
                            std::size_t bins = kClarityBins);

struct ClassifierReport {
  std::string name;
  CvSummary cv;
  double baseline_accuracy = 0.0;
  double mcil_accuracy = 0.0;
  std::vector<double> baseline_per_class;
  std::vector<double> mcil_per_class;
  metrics::ConfusionMatrix baseline_confusion;
  metrics::ConfusionMatrix mcil_confusion;
  std::optional<double> baseline_inner_class_distance;
  std::optional<double> mcil_inner_class_distance;
  FitOutcome baseline_fit;
  FitOutcome mcil_fit;
  std::vector<double> stage1_history;
  std::vector<double> stage2_history;
};

struct ExperimentReport {
  std::vector<ClassifierReport> classifiers;
  metrics::KappaReport kappa_before;
  metrics::KappaReport kappa_after;
  double majority_vote_accuracy = 0.0;
  std::string best_classifier;
  double best_classifier_mcil_accuracy = 0.0;
  double label_audit = 0.0;  // mean KL(one-hot truth || constructed label) on d2
  std::size_t d1_size = 0;
  std::size_t d2_size = 0;
  std::size_t d3_size = 0;
  std::uint64_t global_seed = 0;

  double MeanAccuracyGain() const;
  double KappaGain() const { return kappa_after.kappa - kappa_before.kappa; }
  // Classifiers whose fitted sigma did not grow; failed fits do not count.
  std::size_t SigmaImprovedCount() const;
};

// Plurality across networks per sample, ties to the lowest class.
std::vector<int> MajorityVote(const std::vector<std::vector<int>>& predictions, int num_classes);

// Only function that reads d3 labels. best_classifier is chosen by stage-1
// cross-validation accuracy.
ExperimentReport Evaluate(std::span<const nn::Network> before, std::span<const nn::Network> after,
                          const data::Dataset& d3, std::span<const CvSummary> cv);

struct RunResult {
  ExperimentReport report;
  data::Splits splits;
  std::vector<nn::Network> before;
  std::vector<nn::Network> after;
  std::vector<labeling::ConstructedLabel> labels;
};

// generate/load -> split -> precise -> construct -> interactive -> evaluate.
RunResult RunAll(const ExperimentConfig& config);

struct AblationRow {
  std::size_t zoo_size = 0;
  std::string classifier;
  double baseline_accuracy = 0.0;
  double mcil_accuracy = 0.0;
};

struct AblationResult {
  std::vector<std::size_t> sizes;
  std::vector<AblationRow> rows;
  std::vector<ExperimentReport> reports;  // one per size
  // Split index sets observed by each size; identical by construction.
  std::vector<std::vector<std::size_t>> d1_index, d2_index, d3_index;
};

// Every size reuses the same splits and the same stage-1 networks (which
// depend only on the classifier index); stages 2 and 3 rerun per size.
AblationResult Ablation(const ExperimentConfig& config, std::span<const std::size_t> sizes);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void ParallelFor(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace mcil::pipeline

#endif  // MCIL_CORE_PIPELINE_HPP_
