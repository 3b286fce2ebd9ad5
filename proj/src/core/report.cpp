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

#include "core/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>

#include "core/error.hpp"
#include "core/text.hpp"
#include "core/version.hpp"

namespace mcil::report {

namespace {

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json FitToJson(const pipeline::FitOutcome& f) {
  if (!f.fit) return Json{{"error", f.error}};
  return Json{{"sigma", f.fit->model.sigma},
              {"bias", f.fit->model.bias},
              {"residual", f.fit->residual},
              {"points_used", f.fit->points_used}};
}

Json SideToJson(double accuracy, const std::vector<double>& per_class,
                const metrics::ConfusionMatrix& confusion,
                const std::optional<double>& inner_class_distance,
                const pipeline::FitOutcome& fit) {
  return Json{{"accuracy", accuracy},
              {"per_class_accuracy", per_class},
              {"confusion", confusion.counts},
              {"inner_class_distance", OptionalNumber(inner_class_distance)},
              {"psychometric_fit", FitToJson(fit)}};
}

Json KappaToJson(const metrics::KappaReport& k) {
  return Json{{"kappa", k.kappa},
              {"p_bar", k.p_bar},
              {"p_e_bar", k.p_e_bar},
              {"band", metrics::AgreementBandName(k.band)}};
}

std::string Num(double v) { return text::FormatDouble(v, 17); }

// FNV-1a over the index values, as a short split fingerprint.
std::string Fingerprint(const std::vector<std::size_t>& indices) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t v : indices) {
    for (int b = 0; b < 8; ++b) {
      h ^= (static_cast<std::uint64_t>(v) >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Json ConfigEcho(const pipeline::ExperimentConfig& config) {
  Json echo = config::ConfigToJson(config);
  echo.erase("threads");
  return echo;
}

Json ReportToJson(const pipeline::ExperimentConfig& config,
                  const pipeline::ExperimentReport& r) {
  Json classifiers = Json::array();
  for (const auto& c : r.classifiers) {
    const bool sigma_improved = c.baseline_fit.fit && c.mcil_fit.fit &&
                                c.mcil_fit.fit->model.sigma <= c.baseline_fit.fit->model.sigma;
    classifiers.push_back(Json{
        {"name", c.name},
        {"cv", Json{{"fold_accuracies", c.cv.fold_accuracies},
                    {"mean", c.cv.mean},
                    {"stddev", c.cv.stddev}}},
        {"baseline", SideToJson(c.baseline_accuracy, c.baseline_per_class, c.baseline_confusion,
                                c.baseline_inner_class_distance, c.baseline_fit)},
        {"mcil", SideToJson(c.mcil_accuracy, c.mcil_per_class, c.mcil_confusion,
                            c.mcil_inner_class_distance, c.mcil_fit)},
        {"accuracy_gain", c.mcil_accuracy - c.baseline_accuracy},
        {"sigma_improved", sigma_improved},
        {"stage1_loss", c.stage1_history},
        {"stage2_loss", c.stage2_history}});
  }
  return Json{
      {"format", "mcil-report"},
      {"schema_version", 1},
      {"global_seed", r.global_seed},
      {"config", ConfigEcho(config)},
      {"splits", Json{{"d1", r.d1_size}, {"d2", r.d2_size}, {"d3", r.d3_size}}},
      {"classifiers", classifiers},
      {"kappa", Json{{"before", KappaToJson(r.kappa_before)},
                     {"after", KappaToJson(r.kappa_after)},
                     {"delta", r.KappaGain()}}},
      {"majority_vote_accuracy", r.majority_vote_accuracy},
      {"best_classifier", Json{{"name", r.best_classifier},
                               {"selected_by", "stage1_cv_mean"},
                               {"mcil_accuracy", r.best_classifier_mcil_accuracy}}},
      {"label_audit", Json{{"mean_kl_to_hidden_truth", r.label_audit}}},
      {"summary", Json{{"mean_accuracy_gain", r.MeanAccuracyGain()},
                       {"kappa_gain", r.KappaGain()},
                       {"sigma_improved_count", r.SigmaImprovedCount()},
                       {"classifier_count", r.classifiers.size()}}}};
}

std::string CurveCsv(std::span<const psychometric::CurvePoint> points) {
  std::string out = "delta_c,accuracy,count\n";
  for (const auto& p : points) {
    out += Num(p.delta_c) + "," + Num(p.accuracy) + "," + std::to_string(p.count) + "\n";
  }
  return out;
}

std::vector<SideFile> RunFiles(const pipeline::ExperimentConfig& config,
                               const pipeline::RunResult& run) {
  std::vector<SideFile> files;
  files.push_back({"report.json", ReportToJson(config, run.report).dump(2) + "\n"});
  for (const auto& c : run.report.classifiers) {
    files.push_back({"confusion_" + c.name + "_baseline.csv",
                     metrics::FormatConfusionCsv(c.baseline_confusion)});
    files.push_back({"confusion_" + c.name + "_mcil.csv",
                     metrics::FormatConfusionCsv(c.mcil_confusion)});
    files.push_back({"curve_" + c.name + "_baseline.csv", CurveCsv(c.baseline_fit.bins)});
    files.push_back({"curve_" + c.name + "_mcil.csv", CurveCsv(c.mcil_fit.bins)});
  }
  files.push_back({"constructed_labels.csv", labeling::FormatLabelsCsv(run.labels)});
  for (std::size_t i = 0; i < run.before.size(); ++i) {
    const std::string& name = run.before[i].spec().name;
    files.push_back({"network_" + name + "_baseline.txt", nn::SerializeNetwork(run.before[i])});
    files.push_back({"network_" + name + "_mcil.txt", nn::SerializeNetwork(run.after[i])});
  }
  return files;
}

std::vector<SideFile> AblationFiles(const pipeline::ExperimentConfig& config,
                                    const pipeline::AblationResult& result) {
  const auto& sizes = result.sizes;
  bool identical = true;
  Json blocks = Json::array();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    identical = identical && result.d1_index[s] == result.d1_index[0] &&
                result.d2_index[s] == result.d2_index[0] &&
                result.d3_index[s] == result.d3_index[0];
    blocks.push_back(Json{{"zoo_size", sizes[s]},
                          {"split_fingerprint", Json{{"d1", Fingerprint(result.d1_index[s])},
                                                     {"d2", Fingerprint(result.d2_index[s])},
                                                     {"d3", Fingerprint(result.d3_index[s])}}},
                          {"report", ReportToJson(config, result.reports[s])}});
  }
  const Json doc{{"format", "mcil-ablation"},
                 {"schema_version", 1},
                 {"sizes", sizes},
                 {"splits_identical", identical},
                 {"blocks", blocks}};

  // Classifiers in zoo order; a size's column is empty for members beyond it.
  const std::size_t largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  std::string grid = "classifier,baseline";
  for (std::size_t s : sizes) grid += ",mcil_" + std::to_string(s);
  grid += "\n";
  for (std::size_t i = 0; i < largest; ++i) {
    std::string name;
    double baseline = 0.0;
    std::vector<std::string> cells(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const auto& classifiers = result.reports[s].classifiers;
      if (i >= classifiers.size()) continue;
      name = classifiers[i].name;
      baseline = classifiers[i].baseline_accuracy;
      cells[s] = Num(classifiers[i].mcil_accuracy);
    }
    grid += name + "," + Num(baseline);
    for (const auto& cell : cells) grid += "," + cell;
    grid += "\n";
  }

  std::string rows = "zoo_size,classifier,baseline_accuracy,mcil_accuracy\n";
  for (const auto& r : result.rows) {
    rows += std::to_string(r.zoo_size) + "," + r.classifier + "," + Num(r.baseline_accuracy) + "," +
            Num(r.mcil_accuracy) + "\n";
  }
  return {{"ablation.json", doc.dump(2) + "\n"},
          {"ablation_grid.csv", grid},
          {"ablation_rows.csv", rows}};
}

std::vector<SideFile> DataFiles(const pipeline::ExperimentConfig& config) {
  const data::Dataset source = pipeline::LoadSourceData(config);
  const data::Splits splits = pipeline::MakeSplits(config, source);
  return {{"dataset.csv", data::FormatCsv(source)},
          {"d1.csv", data::FormatCsv(splits.d1)},
          {"d2.csv", data::FormatCsv(splits.d2)},
          {"d3.csv", data::FormatCsv(splits.d3)}};
}

std::vector<SideFile> PsychometricFiles(const PsychometricRequest& request) {
  namespace ps = psychometric;
  const auto& observers = request.observers;
  if (observers.size() < 2) {
    Fail(ErrorCode::kValidation, "sigmas: the joint model needs at least two observers");
  }
  if (request.grid.empty()) Fail(ErrorCode::kValidation, "grid: needs at least one point");
  if (request.trials < 1) Fail(ErrorCode::kValidation, "trials: must be >= 1");
  for (std::size_t i = 0; i < observers.size(); ++i) {
    try {
      ps::Validate(observers[i]);
    } catch (const Error& e) {
      Fail(ErrorCode::kValidation, "observer " + std::to_string(i) + ": " + e.what());
    }
  }
  for (double dc : request.grid) {
    if (!std::isfinite(dc)) Fail(ErrorCode::kValidation, "grid: values must be finite");
  }

  std::vector<SideFile> files;
  auto curve = [&](const ps::ObserverModel& m) {
    std::string out = "delta_c,accuracy\n";
    for (double dc : request.grid) {
      out += Num(dc) + "," + Num(ps::PsychometricResponse(m, dc)) + "\n";
    }
    return out;
  };
  for (std::size_t i = 0; i < observers.size(); ++i) {
    files.push_back({"observer_" + std::to_string(i) + ".csv",
                     "# sigma=" + text::FormatShortest(observers[i].sigma) +
                         ",bias=" + text::FormatShortest(observers[i].bias) + "\n" +
                         curve(observers[i])});
  }
  const ps::ObserverModel joint = ps::JointModel(observers);
  const double variance = ps::JointVarianceClosedForm(observers);
  std::string weights;
  for (double w : ps::JointWeights(observers)) {
    weights += (weights.empty() ? "" : ";") + text::FormatShortest(w);
  }
  files.push_back({"joint.csv", "# sigma_joint_squared=" + text::FormatShortest(variance) +
                                    ",bias_joint=" + text::FormatShortest(joint.bias) +
                                    ",weights=" + weights + "\n" + curve(joint)});

  const auto simulated = ps::SimulateJointCurve(observers, request.grid, request.trials, request.seed);
  std::string validation = "delta_c,predicted,empirical,trials,z_score\n";
  for (const auto& p : simulated) {
    const double predicted = ps::PsychometricResponse(joint, p.delta_c);
    const double se = std::sqrt(predicted * (1.0 - predicted) / static_cast<double>(p.count));
    const double z = se > 0.0 ? (p.accuracy - predicted) / se : 0.0;
    validation += Num(p.delta_c) + "," + Num(predicted) + "," + Num(p.accuracy) + "," +
                  std::to_string(p.count) + "," + Num(z) + "\n";
  }
  files.push_back({"validation.csv", validation});
  return files;
}

void WriteArtifacts(const std::string& out_dir, const std::string& command,
                    const std::string& config_path, const Json& settings,
                    std::uint64_t seed, const std::vector<SideFile>& files) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create output directory '" + out_dir + "': " + ec.message());
  Json names = Json::array();
  for (const auto& f : files) {
    text::WriteFile((std::filesystem::path(out_dir) / f.name).string(), f.contents);
    names.push_back(f.name);
  }
  const Json manifest{{"command", command},
                      {"config_path", config_path},
                      {"config", settings},
                      {"global_seed", seed},
                      {"output_directory", out_dir},
                      {"tool_version", kVersion},
                      {"created_utc", UtcTimestamp()},
                      {"files", names}};
  text::WriteFile((std::filesystem::path(out_dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");
}

}  // namespace mcil::report
