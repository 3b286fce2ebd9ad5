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

#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <numeric>
#include <thread>

#include "core/batch.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace mcil::pipeline {

namespace {

// Stream ids for DeriveSeed(global_seed, ...).
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kSplitStream = 2;
constexpr std::uint64_t kFoldStream = 3;
constexpr std::uint64_t kClassifierStream = 4;

// Sub-streams of a classifier seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kStage1Stream = 1;
constexpr std::uint64_t kStage2Stream = 2;
constexpr std::uint64_t kFoldBase = 16;

void Invalid(const std::string& field, const std::string& what) {
  Fail(ErrorCode::kValidation, field + ": " + what);
}

void ValidateTrain(const nn::TrainConfig& c, const std::string& field) {
  if (c.batch_size < 1) Invalid(field + ".batch_size", "must be >= 1");
  if (!(c.lr_start > 0.0) || !std::isfinite(c.lr_start)) Invalid(field + ".lr_start", "must be positive");
  if (!(c.lr_end > 0.0) || c.lr_end > c.lr_start) {
    Invalid(field + ".lr_end", "must satisfy 0 < lr_end <= lr_start");
  }
  if (!(c.weight_decay >= 0.0)) Invalid(field + ".weight_decay", "must be >= 0");
}

std::size_t ResolveThreads(std::size_t threads) {
  if (threads != 0) return threads;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

double MeanOf(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> Clarities(const data::Dataset& d) {
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& s : d.samples()) out.push_back(s.clarity.value_or(0.0));
  return out;
}

std::vector<std::vector<double>> PenultimateRows(const nn::Network& net,
                                                 const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd h = net.PenultimateBatch(inputs);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(h.cols()));
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    rows[static_cast<std::size_t>(c)].assign(h.col(c).data(), h.col(c).data() + h.rows());
  }
  return rows;
}

// Reads the withheld d2 labels; only called once training is over.
double AuditLabels(const data::Splits& splits,
                   std::span<const labeling::ConstructedLabel> labels) {
  if (splits.d2_hidden.size() != labels.size()) return 0.0;
  const auto& truth = splits.d2_hidden.Reveal();
  if (!std::all_of(truth.begin(), truth.end(), [](int t) { return t >= 0; })) return 0.0;
  return labeling::LabelAudit(labels, truth);
}

}  // namespace

void ParallelFor(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(ResolveThreads(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void ExperimentConfig::Validate() const {
  if (zoo.empty()) Invalid("zoo", "required field missing or empty");
  if (zoo.size() < 2) Invalid("zoo", "needs at least two classifiers");
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    try {
      zoo[i].Validate();
    } catch (const Error& e) {
      Invalid("zoo[" + std::to_string(i) + "]", e.what());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (zoo[j].name == zoo[i].name) {
        Invalid("zoo[" + std::to_string(i) + "].name", "duplicate name '" + zoo[i].name + "'");
      }
    }
  }
  if (data.kind == DataSource::Kind::kSynthetic) {
    try {
      data.generator.Validate();
    } catch (const Error& e) {
      Invalid("data", e.what());
    }
  } else {
    if (data.csv_path.empty()) Invalid("data.path", "required for csv source");
    if (data.generator.num_classes < 2) Invalid("data.classes", "must be >= 2");
  }
  const auto& f = data.fractions;
  if (!(f.precise > 0.0 && f.pool > 0.0 && f.ambiguous > 0.0) ||
      std::abs(f.precise + f.pool + f.ambiguous - 1.0) > 1e-9) {
    Invalid("data.fractions", "must be three positive numbers summing to 1");
  }
  if (stage1.loss != nn::LossKind::kPrecise) Invalid("stage1.loss", "must be precise");
  if (stage2.loss != nn::LossKind::kAmbiguous) Invalid("stage2.loss", "must be ambiguous");
  if (stage1.epochs < 1) Invalid("stage1.epochs", "must be >= 1");
  ValidateTrain(stage1, "stage1");
  ValidateTrain(stage2, "stage2");
  if (cv_folds < 2) Invalid("cv_folds", "must be >= 2");
}

std::vector<nn::ArchitectureSpec> DefaultZoo() {
  using nn::Activation;
  const auto relu = Activation::kRectifier;
  const auto tanh = Activation::kHyperbolicTangent;
  return {
      {"relu_64_32", {64, 32}, {relu, relu}, {}},
      {"tanh_128", {128}, {tanh}, {}},
      {"relu_res_64_64_32", {64, 64, 32}, {relu, relu, relu}, {{0, 1}}},
      {"relu_32_32", {32, 32}, {relu, relu}, {}},
      {"tanh_96_48", {96, 48}, {tanh, tanh}, {}},
  };
}

ExperimentConfig DefaultExperimentConfig() {
  ExperimentConfig c;
  c.zoo = DefaultZoo();
  c.data.generator.num_classes = 5;
  c.data.generator.feature_dim = 16;
  c.data.generator.per_class = 4080;
  c.data.generator.separation = 3.5;
  c.data.generator.noise_scale = 1.0;
  c.data.fractions = {0.30, 0.65, 0.05};

  c.stage1.epochs = 8;
  c.stage1.batch_size = 16;
  c.stage1.lr_start = 3e-3;
  c.stage1.lr_end = 1e-4;
  c.stage1.weight_decay = 0.0005;
  c.stage1.frozen_prefix_layers = 0;
  c.stage1.loss = nn::LossKind::kPrecise;

  c.stage2.epochs = 8;
  c.stage2.batch_size = 16;
  c.stage2.lr_start = 1e-3;
  c.stage2.lr_end = 1e-5;
  c.stage2.weight_decay = 0.0005;
  c.stage2.frozen_prefix_layers = 1;
  c.stage2.loss = nn::LossKind::kAmbiguous;
  return c;
}

std::uint64_t ClassifierSeed(std::uint64_t global_seed, std::size_t index) {
  return DeriveSeed(DeriveSeed(global_seed, kClassifierStream), index);
}

data::Dataset LoadSourceData(const ExperimentConfig& config) {
  if (config.data.kind == DataSource::Kind::kCsv) {
    std::filesystem::path path(config.data.csv_path);
    if (path.is_relative() && !config.data.base_dir.empty()) path = config.data.base_dir / path;
    return data::LoadCsv(path.string(), config.data.generator.num_classes);
  }
  data::GeneratorParams params = config.data.generator;
  params.seed = DeriveSeed(config.global_seed, kDataStream);
  return data::GenerateSynthetic(params);
}

data::Splits MakeSplits(const ExperimentConfig& config, const data::Dataset& source) {
  return data::Split(source, config.data.fractions, DeriveSeed(config.global_seed, kSplitStream));
}

std::vector<std::vector<std::size_t>> MakeFolds(std::size_t n, std::size_t k, std::uint64_t seed) {
  Require(k >= 2, "cross-validation needs at least two folds");
  Require(n >= k, "cross-validation: " + std::to_string(n) + " samples cannot fill " +
                      std::to_string(k) + " folds");
  Rng rng(seed);
  const std::vector<std::size_t> order = rng.Permutation(n);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(f * n / k),
                    order.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / k));
  }
  return folds;
}

PreciseStageResult StagePrecise(std::span<const nn::ArchitectureSpec> zoo,
                                const data::Dataset& d1, const nn::TrainConfig& stage1,
                                std::size_t cv_folds, std::uint64_t global_seed,
                                std::size_t threads) {
  Require(!zoo.empty(), "stage_precise: empty zoo");
  Require(stage1.loss == nn::LossKind::kPrecise, "stage_precise: stage1 must use the precise loss");
  const std::vector<int> labels = d1.labels();
  const int k = d1.num_classes();
  const auto folds = MakeFolds(d1.size(), cv_folds, DeriveSeed(global_seed, kFoldStream));

  nn::TrainingData all{FeatureMatrix(d1), OneHotMatrix(labels, k)};
  const auto dim = d1.feature_dim();
  const auto outputs = static_cast<std::size_t>(k);

  PreciseStageResult result;
  std::vector<std::optional<nn::Network>> trained(zoo.size());
  result.cv.resize(zoo.size());
  result.histories.resize(zoo.size());

  ParallelFor(zoo.size(), threads, [&](std::size_t i) {
    const std::uint64_t cs = ClassifierSeed(global_seed, i);
    CvSummary cv;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<std::size_t> train_idx;
      for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
      }
      std::sort(train_idx.begin(), train_idx.end());
      nn::TrainingData fold_data;
      fold_data.inputs.resize(all.inputs.rows(), static_cast<Eigen::Index>(train_idx.size()));
      fold_data.targets.resize(all.targets.rows(), static_cast<Eigen::Index>(train_idx.size()));
      for (std::size_t j = 0; j < train_idx.size(); ++j) {
        fold_data.inputs.col(static_cast<Eigen::Index>(j)) = all.inputs.col(static_cast<Eigen::Index>(train_idx[j]));
        fold_data.targets.col(static_cast<Eigen::Index>(j)) = all.targets.col(static_cast<Eigen::Index>(train_idx[j]));
      }
      nn::TrainConfig cfg = stage1;
      cfg.seed = DeriveSeed(cs, kFoldBase + 2 * f + 1);
      auto fit = nn::Train(nn::InitNetwork(zoo[i], dim, outputs, DeriveSeed(cs, kFoldBase + 2 * f)),
                           fold_data, cfg);

      Eigen::MatrixXd val(all.inputs.rows(), static_cast<Eigen::Index>(folds[f].size()));
      std::vector<int> val_truth;
      for (std::size_t j = 0; j < folds[f].size(); ++j) {
        val.col(static_cast<Eigen::Index>(j)) = all.inputs.col(static_cast<Eigen::Index>(folds[f][j]));
        val_truth.push_back(labels[folds[f][j]]);
      }
      cv.fold_accuracies.push_back(metrics::Accuracy(nn::PredictBatch(fit.network, val), val_truth));
    }
    cv.mean = MeanOf(cv.fold_accuracies);
    double var = 0.0;
    for (double a : cv.fold_accuracies) var += (a - cv.mean) * (a - cv.mean);
    cv.stddev = std::sqrt(var / static_cast<double>(cv.fold_accuracies.size()));
    result.cv[i] = std::move(cv);

    nn::TrainConfig cfg = stage1;
    cfg.seed = DeriveSeed(cs, kStage1Stream);
    auto fit = nn::Train(nn::InitNetwork(zoo[i], dim, outputs, DeriveSeed(cs, kInitStream)), all, cfg);
    result.histories[i] = std::move(fit.history);
    trained[i] = std::move(fit.network);
  });

  for (auto& t : trained) result.networks.push_back(std::move(*t));
  return result;
}

std::vector<labeling::ConstructedLabel> StageConstruct(std::span<const nn::Network> networks,
                                                       const data::Dataset& d2, bool soft_vote) {
  return labeling::ConstructLabels(networks, d2,
                                   soft_vote ? labeling::VoteMode::kSoft : labeling::VoteMode::kHard);
}

InteractiveStageResult StageInteractive(std::span<const nn::Network> networks,
                                        const data::Dataset& d2,
                                        std::span<const labeling::ConstructedLabel> labels,
                                        const nn::TrainConfig& stage2,
                                        std::uint64_t global_seed, std::size_t threads) {
  Require(stage2.loss == nn::LossKind::kAmbiguous,
          "stage_interactive: stage2 must use the ambiguous loss");
  Require(labels.size() == d2.size(), "stage_interactive: one label per pool sample required");
  const auto k = static_cast<Eigen::Index>(d2.num_classes());
  nn::TrainingData pool{FeatureMatrix(d2), Eigen::MatrixXd(k, static_cast<Eigen::Index>(d2.size()))};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& p = labels[i].label.probabilities;
    Require(static_cast<Eigen::Index>(p.size()) == k,
            "stage_interactive: label width does not match class count");
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      Require(p[j] >= 0.0 && p[j] <= 1.0, "stage_interactive: label entry outside [0, 1]");
      pool.targets(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = p[j];
      sum += p[j];
    }
    Require(std::abs(sum - 1.0) < 1e-9, "stage_interactive: label does not sum to 1");
  }
  for (const auto& net : networks) {
    Require(static_cast<Eigen::Index>(net.output_dim()) == k,
            "stage_interactive: network '" + net.spec().name + "' output width " +
                std::to_string(net.output_dim()) + " does not match " + std::to_string(k) + " classes");
  }

  InteractiveStageResult result;
  std::vector<std::optional<nn::Network>> tuned(networks.size());
  result.histories.resize(networks.size());
  ParallelFor(networks.size(), threads, [&](std::size_t i) {
    nn::TrainConfig cfg = stage2;
    cfg.seed = DeriveSeed(ClassifierSeed(global_seed, i), kStage2Stream);
    cfg.convergence_tolerance = kInteractiveStopTolerance;
    auto fit = nn::Train(networks[i], pool, cfg);
    result.histories[i] = std::move(fit.history);
    tuned[i] = std::move(fit.network);
  });
  for (auto& t : tuned) result.networks.push_back(std::move(*t));
  return result;
}

FitOutcome FitAccuracyCurve(std::span<const int> predictions, std::span<const int> truths,
                            std::span<const double> clarity, std::size_t bins) {
  Require(predictions.size() == truths.size() && truths.size() == clarity.size(),
          "accuracy curve: inputs must have equal length");
  Require(bins >= 2, "accuracy curve: need at least two bins");
  const std::size_t n = truths.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return clarity[a] < clarity[b]; });

  FitOutcome out;
  const std::size_t used = std::min(bins, n);
  for (std::size_t b = 0; b < used; ++b) {
    const std::size_t lo = b * n / used, hi = (b + 1) * n / used;
    if (hi <= lo) continue;
    double c_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t j = lo; j < hi; ++j) {
      c_sum += clarity[order[j]];
      hits += predictions[order[j]] == truths[order[j]];
    }
    const double count = static_cast<double>(hi - lo);
    out.bins.push_back({c_sum / count, static_cast<double>(hits) / count, hi - lo});
  }
  try {
    out.fit = psychometric::FitCurve(out.bins);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

double ExperimentReport::MeanAccuracyGain() const {
  if (classifiers.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : classifiers) sum += c.mcil_accuracy - c.baseline_accuracy;
  return sum / static_cast<double>(classifiers.size());
}

std::size_t ExperimentReport::SigmaImprovedCount() const {
  std::size_t count = 0;
  for (const auto& c : classifiers) {
    if (c.baseline_fit.fit && c.mcil_fit.fit &&
        c.mcil_fit.fit->model.sigma <= c.baseline_fit.fit->model.sigma) {
      ++count;
    }
  }
  return count;
}

std::vector<int> MajorityVote(const std::vector<std::vector<int>>& predictions, int num_classes) {
  const auto table = metrics::VoteTable(predictions, num_classes);
  std::vector<int> out;
  out.reserve(table.size());
  for (const auto& row : table) {
    out.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

ExperimentReport Evaluate(std::span<const nn::Network> before, std::span<const nn::Network> after,
                          const data::Dataset& d3, std::span<const CvSummary> cv) {
  Require(before.size() == after.size() && before.size() == cv.size() && !before.empty(),
          "evaluate: before/after/cv lists must be nonempty and equally long");
  const std::vector<int> truths = d3.labels();
  const int k = d3.num_classes();
  const Eigen::MatrixXd inputs = FeatureMatrix(d3);
  const std::vector<double> clarity = Clarities(d3);
  const bool have_clarity = d3.all_have_clarity();

  ExperimentReport report;
  std::vector<std::vector<int>> pred_before, pred_after;
  for (std::size_t i = 0; i < before.size(); ++i) {
    ClassifierReport c;
    c.name = after[i].spec().name;
    c.cv = cv[i];
    const auto pb = nn::PredictBatch(before[i], inputs);
    const auto pa = nn::PredictBatch(after[i], inputs);
    c.baseline_accuracy = metrics::Accuracy(pb, truths);
    c.mcil_accuracy = metrics::Accuracy(pa, truths);
    c.baseline_per_class = metrics::PerClassAccuracy(pb, truths, k);
    c.mcil_per_class = metrics::PerClassAccuracy(pa, truths, k);
    c.baseline_confusion = metrics::Confusion(pb, truths, k);
    c.mcil_confusion = metrics::Confusion(pa, truths, k);
    if (!before[i].spec().hidden_widths.empty()) {
      c.baseline_inner_class_distance =
          metrics::InnerClassDistance(PenultimateRows(before[i], inputs), truths);
      c.mcil_inner_class_distance =
          metrics::InnerClassDistance(PenultimateRows(after[i], inputs), truths);
    }
    if (have_clarity) {
      c.baseline_fit = FitAccuracyCurve(pb, truths, clarity);
      c.mcil_fit = FitAccuracyCurve(pa, truths, clarity);
    } else {
      c.baseline_fit.error = c.mcil_fit.error = "test split has no clarity scores";
    }
    report.classifiers.push_back(std::move(c));
    pred_before.push_back(pb);
    pred_after.push_back(pa);
  }

  const int raters = static_cast<int>(before.size());
  if (raters >= 2) {
    report.kappa_before = metrics::FleissKappa(metrics::VoteTable(pred_before, k), raters);
    report.kappa_after = metrics::FleissKappa(metrics::VoteTable(pred_after, k), raters);
  }
  report.majority_vote_accuracy = metrics::Accuracy(MajorityVote(pred_after, k), truths);

  std::size_t best = 0;
  for (std::size_t i = 1; i < cv.size(); ++i) {
    if (cv[i].mean > cv[best].mean) best = i;
  }
  report.best_classifier = report.classifiers[best].name;
  report.best_classifier_mcil_accuracy = report.classifiers[best].mcil_accuracy;
  report.d3_size = d3.size();
  return report;
}

RunResult RunAll(const ExperimentConfig& config) {
  config.Validate();
  const data::Dataset source = LoadSourceData(config);
  Require(source.num_classes() >= 2, "run: data needs at least two classes");
  data::Splits splits = MakeSplits(config, source);

  auto precise = StagePrecise(config.zoo, splits.d1, config.stage1, config.cv_folds,
                              config.global_seed, config.threads);
  auto labels = StageConstruct(precise.networks, splits.d2, config.soft_vote);
  auto interactive = StageInteractive(precise.networks, splits.d2, labels, config.stage2,
                                      config.global_seed, config.threads);

  ExperimentReport report = Evaluate(precise.networks, interactive.networks, splits.d3, precise.cv);
  for (std::size_t i = 0; i < report.classifiers.size(); ++i) {
    report.classifiers[i].stage1_history = precise.histories[i];
    report.classifiers[i].stage2_history = interactive.histories[i];
  }
  report.label_audit = AuditLabels(splits, labels);
  report.d1_size = splits.d1.size();
  report.d2_size = splits.d2.size();
  report.global_seed = config.global_seed;
  return RunResult{std::move(report), std::move(splits), std::move(precise.networks),
                   std::move(interactive.networks), std::move(labels)};
}

AblationResult Ablation(const ExperimentConfig& config, std::span<const std::size_t> sizes) {
  config.Validate();
  Require(!sizes.empty(), "ablation: no zoo sizes given");
  for (std::size_t s : sizes) {
    if (s < 2 || s > config.zoo.size()) {
      Fail(ErrorCode::kValidation, "sizes: zoo size " + std::to_string(s) + " outside [2, " +
                                       std::to_string(config.zoo.size()) + "]");
    }
  }
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  const data::Dataset source = LoadSourceData(config);
  data::Splits splits = MakeSplits(config, source);

  const std::span<const nn::ArchitectureSpec> zoo(config.zoo.data(), largest);
  auto precise = StagePrecise(zoo, splits.d1, config.stage1, config.cv_folds,
                              config.global_seed, config.threads);

  AblationResult result;
  result.sizes.assign(sizes.begin(), sizes.end());
  for (std::size_t s : sizes) {
    const std::span<const nn::Network> members(precise.networks.data(), s);
    auto labels = StageConstruct(members, splits.d2, config.soft_vote);
    auto interactive = StageInteractive(members, splits.d2, labels, config.stage2,
                                        config.global_seed, config.threads);
    ExperimentReport report = Evaluate(members, interactive.networks, splits.d3,
                                       std::span<const CvSummary>(precise.cv.data(), s));
    for (std::size_t i = 0; i < report.classifiers.size(); ++i) {
      report.classifiers[i].stage1_history = precise.histories[i];
      report.classifiers[i].stage2_history = interactive.histories[i];
    }
    report.label_audit = AuditLabels(splits, labels);
    report.d1_size = splits.d1.size();
    report.d2_size = splits.d2.size();
    report.global_seed = config.global_seed;
    for (const auto& c : report.classifiers) {
      result.rows.push_back({s, c.name, c.baseline_accuracy, c.mcil_accuracy});
    }
    result.reports.push_back(std::move(report));
    result.d1_index.push_back(splits.d1_index);
    result.d2_index.push_back(splits.d2_index);
    result.d3_index.push_back(splits.d3_index);
  }
  return result;
}

}  // namespace mcil::pipeline
