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

#include "mcil/mcil.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/data.hpp"
#include "core/error.hpp"
#include "core/labeling.hpp"
#include "core/metrics.hpp"
#include "core/nn.hpp"
#include "core/pipeline.hpp"
#include "core/psychometric.hpp"
#include "core/report.hpp"
#include "core/version.hpp"

struct mcil_dataset {
  mcil::data::Dataset value;
};

struct mcil_network {
  mcil::nn::Network value;
};

struct mcil_config {
  mcil::pipeline::ExperimentConfig value;
  std::string path;
};

struct mcil_run {
  mcil::pipeline::ExperimentConfig config;
  mcil::pipeline::RunResult result;
};

struct mcil_ablation {
  mcil::pipeline::ExperimentConfig config;
  mcil::pipeline::AblationResult result;
};

namespace {

thread_local std::string last_error;

mcil_status Record(mcil_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
mcil_status Guard(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return MCIL_OK;
  } catch (const mcil::Error& e) {
    return Record(static_cast<mcil_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(MCIL_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return Record(MCIL_ERR_RUNTIME, e.what());
  } catch (...) {
    return Record(MCIL_ERR_RUNTIME, "unknown error");
  }
}

void NotNull(const void* p, const char* name) {
  mcil::Require(p != nullptr, std::string(name) + " must not be NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<mcil::psychometric::ObserverModel> Observers(const double* sigmas,
                                                         const double* biases, std::size_t n) {
  NotNull(sigmas, "sigmas");
  std::vector<mcil::psychometric::ObserverModel> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].sigma = sigmas[i];
    out[i].bias = biases ? biases[i] : 0.0;
  }
  return out;
}

std::string OutDir(const char* out_dir) {
  NotNull(out_dir, "out_dir");
  return out_dir;
}

}  // namespace

extern "C" {

const char* mcil_version(void) { return mcil::kVersion; }

const char* mcil_status_name(mcil_status status) {
  switch (status) {
    case MCIL_OK: return "ok";
    case MCIL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MCIL_ERR_VALIDATION: return "validation";
    case MCIL_ERR_PARSE: return "parse";
    case MCIL_ERR_IO: return "io";
    case MCIL_ERR_DEGENERATE_FIT: return "degenerate-fit";
    case MCIL_ERR_NON_MONOTONE_DATA: return "non-monotone-data";
    case MCIL_ERR_UNSUPPORTED_ARCHITECTURE: return "unsupported-architecture";
    case MCIL_ERR_RUNTIME: return "runtime";
  }
  return "unknown";
}

const char* mcil_last_error(void) { return last_error.c_str(); }

void mcil_string_free(char* s) { std::free(s); }

mcil_status mcil_cumulative_gaussian(double z, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = mcil::psychometric::CumulativeGaussian(z);
  });
}

mcil_status mcil_psychometric_response(double sigma, double bias, double delta_c, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = mcil::psychometric::PsychometricResponse({sigma, bias}, delta_c);
  });
}

mcil_status mcil_joint_weights(const double* sigmas, size_t n, double* weights_out) {
  return Guard([&] {
    NotNull(weights_out, "weights_out");
    const auto w = mcil::psychometric::JointWeights(Observers(sigmas, nullptr, n));
    std::copy(w.begin(), w.end(), weights_out);
  });
}

mcil_status mcil_joint_variance(const double* sigmas, size_t n, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = mcil::psychometric::JointVariance(Observers(sigmas, nullptr, n));
  });
}

mcil_status mcil_joint_slope_approx(const double* sigmas, size_t n, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = mcil::psychometric::JointSlopeApprox(Observers(sigmas, nullptr, n));
  });
}

mcil_status mcil_fit_curve(const double* delta_c, const double* accuracy, const size_t* counts,
                           size_t n, double* sigma_out, double* bias_out) {
  return Guard([&] {
    NotNull(delta_c, "delta_c");
    NotNull(accuracy, "accuracy");
    NotNull(sigma_out, "sigma_out");
    NotNull(bias_out, "bias_out");
    std::vector<mcil::psychometric::CurvePoint> points(n);
    for (std::size_t i = 0; i < n; ++i) {
      points[i] = {delta_c[i], accuracy[i], counts ? counts[i] : 1};
    }
    const auto fit = mcil::psychometric::FitCurve(points);
    *sigma_out = fit.model.sigma;
    *bias_out = fit.model.bias;
  });
}

mcil_status mcil_psychometric_write(const double* sigmas, const double* biases, size_t n,
                                    const double* grid, size_t grid_n, size_t trials,
                                    uint64_t seed, const char* out_dir) {
  return Guard([&] {
    const std::string dir = OutDir(out_dir);
    NotNull(grid, "grid");
    mcil::report::PsychometricRequest request;
    request.observers = Observers(sigmas, biases, n);
    request.grid.assign(grid, grid + grid_n);
    request.trials = trials;
    request.seed = seed;
    const auto files = mcil::report::PsychometricFiles(request);
    mcil::report::Json settings{{"sigmas", std::vector<double>(sigmas, sigmas + n)},
                                {"grid", request.grid},
                                {"trials", trials},
                                {"seed", seed}};
    std::vector<double> b(n, 0.0);
    if (biases) b.assign(biases, biases + n);
    settings["biases"] = b;
    mcil::report::WriteArtifacts(dir, "psychometric", "", settings, seed, files);
  });
}

mcil_status mcil_fleiss_kappa(const int* table, size_t items, size_t categories, int raters,
                              double* kappa_out, const char** band_out) {
  return Guard([&] {
    NotNull(table, "table");
    NotNull(kappa_out, "kappa_out");
    std::vector<std::vector<int>> rows(items, std::vector<int>(categories));
    for (std::size_t i = 0; i < items; ++i) {
      std::copy(table + i * categories, table + (i + 1) * categories, rows[i].begin());
    }
    const auto report = mcil::metrics::FleissKappa(rows, raters);
    *kappa_out = report.kappa;
    if (band_out) *band_out = mcil::metrics::AgreementBandName(report.band);
  });
}

mcil_status mcil_vote(const int* classes, size_t n, int num_classes, double* probabilities_out) {
  return Guard([&] {
    NotNull(classes, "classes");
    NotNull(probabilities_out, "probabilities_out");
    const auto label = mcil::labeling::Vote(std::span<const int>(classes, n), num_classes);
    std::copy(label.probabilities.begin(), label.probabilities.end(), probabilities_out);
  });
}

mcil_status mcil_dataset_load(const char* path, int num_classes, mcil_dataset** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new mcil_dataset{mcil::data::LoadCsv(path, num_classes)};
  });
}

mcil_status mcil_dataset_save(const mcil_dataset* dataset, const char* path) {
  return Guard([&] {
    NotNull(dataset, "dataset");
    NotNull(path, "path");
    mcil::data::SaveCsv(dataset->value, path);
  });
}

size_t mcil_dataset_size(const mcil_dataset* dataset) {
  return dataset ? dataset->value.size() : 0;
}

size_t mcil_dataset_feature_dim(const mcil_dataset* dataset) {
  return dataset ? dataset->value.feature_dim() : 0;
}

int mcil_dataset_num_classes(const mcil_dataset* dataset) {
  return dataset ? dataset->value.num_classes() : 0;
}

void mcil_dataset_free(mcil_dataset* dataset) { delete dataset; }

mcil_status mcil_network_load(const char* path, mcil_network** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new mcil_network{mcil::nn::LoadNetwork(path)};
  });
}

size_t mcil_network_input_dim(const mcil_network* network) {
  return network ? network->value.input_dim() : 0;
}

size_t mcil_network_output_dim(const mcil_network* network) {
  return network ? network->value.output_dim() : 0;
}

mcil_status mcil_network_forward(const mcil_network* network, const double* features, size_t dim,
                                 double* probabilities_out) {
  return Guard([&] {
    NotNull(network, "network");
    NotNull(features, "features");
    NotNull(probabilities_out, "probabilities_out");
    const auto p = mcil::nn::Forward(network->value, std::span<const double>(features, dim));
    std::copy(p.begin(), p.end(), probabilities_out);
  });
}

void mcil_network_free(mcil_network* network) { delete network; }

mcil_status mcil_config_default(mcil_config** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = new mcil_config{mcil::pipeline::DefaultExperimentConfig(), ""};
  });
}

mcil_status mcil_config_parse(const char* json, mcil_config** out) {
  return Guard([&] {
    NotNull(json, "json");
    NotNull(out, "out");
    *out = new mcil_config{mcil::config::ParseConfig(json), ""};
  });
}

mcil_status mcil_config_load(const char* path, mcil_config** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    auto config = std::make_unique<mcil_config>(mcil_config{mcil::config::LoadConfig(path), path});
    config->value.data.base_dir = std::filesystem::path(path).parent_path().string();
    *out = config.release();
  });
}

mcil_status mcil_config_set_seed(mcil_config* config, uint64_t seed) {
  return Guard([&] {
    NotNull(config, "config");
    config->value.global_seed = seed;
  });
}

mcil_status mcil_config_set_threads(mcil_config* config, size_t threads) {
  return Guard([&] {
    NotNull(config, "config");
    config->value.threads = threads;
  });
}

mcil_status mcil_config_get_seed(const mcil_config* config, uint64_t* out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    *out = config->value.global_seed;
  });
}

size_t mcil_config_zoo_size(const mcil_config* config) {
  return config ? config->value.zoo.size() : 0;
}

mcil_status mcil_config_to_json(const mcil_config* config, char** out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    *out = CopyString(mcil::config::ConfigToJson(config->value).dump(2) + "\n");
  });
}

void mcil_config_free(mcil_config* config) { delete config; }

mcil_status mcil_gen_data(const mcil_config* config, const char* out_dir, size_t* sizes_out) {
  return Guard([&] {
    NotNull(config, "config");
    const std::string dir = OutDir(out_dir);
    const auto files = mcil::report::DataFiles(config->value);
    mcil::report::WriteArtifacts(dir, "gen-data", config->path,
                                 mcil::report::ConfigEcho(config->value),
                                 config->value.global_seed, files);
    if (sizes_out) {
      // Rows per split file, header excluded.
      for (std::size_t s = 0; s < 3; ++s) {
        const std::string& text = files[s + 1].contents;
        sizes_out[s] = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
      }
    }
  });
}

mcil_status mcil_run_experiment(const mcil_config* config, mcil_run** out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    *out = new mcil_run{config->value, mcil::pipeline::RunAll(config->value)};
  });
}

mcil_status mcil_run_report_json(const mcil_run* run, char** out) {
  return Guard([&] {
    NotNull(run, "run");
    NotNull(out, "out");
    *out = CopyString(mcil::report::ReportToJson(run->config, run->result.report).dump(2) + "\n");
  });
}

mcil_status mcil_run_write(const mcil_run* run, const char* out_dir, const char* config_path) {
  return Guard([&] {
    NotNull(run, "run");
    const std::string dir = OutDir(out_dir);
    mcil::report::WriteArtifacts(dir, "run", config_path ? config_path : "",
                                 mcil::report::ConfigEcho(run->config), run->config.global_seed,
                                 mcil::report::RunFiles(run->config, run->result));
  });
}

size_t mcil_run_classifier_count(const mcil_run* run) {
  return run ? run->result.report.classifiers.size() : 0;
}

mcil_status mcil_run_accuracies(const mcil_run* run, size_t index, double* baseline_out,
                                double* mcil_out) {
  return Guard([&] {
    NotNull(run, "run");
    const auto& classifiers = run->result.report.classifiers;
    mcil::Require(index < classifiers.size(), "classifier index out of range");
    if (baseline_out) *baseline_out = classifiers[index].baseline_accuracy;
    if (mcil_out) *mcil_out = classifiers[index].mcil_accuracy;
  });
}

mcil_status mcil_run_kappa(const mcil_run* run, double* before_out, double* after_out) {
  return Guard([&] {
    NotNull(run, "run");
    if (before_out) *before_out = run->result.report.kappa_before.kappa;
    if (after_out) *after_out = run->result.report.kappa_after.kappa;
  });
}

double mcil_run_mean_accuracy_gain(const mcil_run* run) {
  return run ? run->result.report.MeanAccuracyGain() : 0.0;
}

size_t mcil_run_sigma_improved_count(const mcil_run* run) {
  return run ? run->result.report.SigmaImprovedCount() : 0;
}

void mcil_run_free(mcil_run* run) { delete run; }

mcil_status mcil_ablation_run(const mcil_config* config, const size_t* sizes, size_t n,
                              mcil_ablation** out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out, "out");
    if (n > 0) NotNull(sizes, "sizes");
    const std::vector<std::size_t> list(sizes, sizes + n);
    *out = new mcil_ablation{config->value, mcil::pipeline::Ablation(config->value, list)};
  });
}

mcil_status mcil_ablation_write(const mcil_ablation* ablation, const char* out_dir,
                                const char* config_path) {
  return Guard([&] {
    NotNull(ablation, "ablation");
    const std::string dir = OutDir(out_dir);
    auto settings = mcil::report::ConfigEcho(ablation->config);
    settings["sizes"] = ablation->result.sizes;
    mcil::report::WriteArtifacts(dir, "ablation", config_path ? config_path : "", settings,
                                 ablation->config.global_seed,
                                 mcil::report::AblationFiles(ablation->config, ablation->result));
  });
}

mcil_status mcil_ablation_grid_csv(const mcil_ablation* ablation, char** out) {
  return Guard([&] {
    NotNull(ablation, "ablation");
    NotNull(out, "out");
    for (const auto& f : mcil::report::AblationFiles(ablation->config, ablation->result)) {
      if (f.name == "ablation_grid.csv") *out = CopyString(f.contents);
    }
  });
}

int mcil_ablation_splits_identical(const mcil_ablation* ablation) {
  if (ablation == nullptr) return 0;
  const auto& r = ablation->result;
  for (std::size_t s = 1; s < r.sizes.size(); ++s) {
    if (r.d1_index[s] != r.d1_index[0] || r.d2_index[s] != r.d2_index[0] ||
        r.d3_index[s] != r.d3_index[0]) {
      return 0;
    }
  }
  return 1;
}

void mcil_ablation_free(mcil_ablation* ablation) { delete ablation; }

}  // extern "C"
