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

// mcil command-line tool: gen-data, run, ablation, psychometric.
// Exit codes: 0 success, 1 runtime failure, 2 validation failure.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcil/mcil.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

// Thrown to unwind with an exit code after the message has been printed.
struct ExitCode {
  int code;
};

int ExitFor(mcil_status status) {
  switch (status) {
    case MCIL_OK: return 0;
    case MCIL_ERR_INVALID_ARGUMENT:
    case MCIL_ERR_VALIDATION:
    case MCIL_ERR_PARSE:
    case MCIL_ERR_UNSUPPORTED_ARCHITECTURE:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

void Check(mcil_status status) {
  if (status == MCIL_OK) return;
  std::fprintf(stderr, "mcil: %s error: %s\n", mcil_status_name(status), mcil_last_error());
  throw ExitCode{ExitFor(status)};
}

[[noreturn]] void Usage(const std::string& message) {
  std::fprintf(stderr, "mcil: validation error: %s\n", message.c_str());
  throw ExitCode{kExitValidation};
}

struct ConfigDeleter {
  void operator()(mcil_config* c) const { mcil_config_free(c); }
};
struct RunDeleter {
  void operator()(mcil_run* r) const { mcil_run_free(r); }
};
struct AblationDeleter {
  void operator()(mcil_ablation* a) const { mcil_ablation_free(a); }
};
using ConfigPtr = std::unique_ptr<mcil_config, ConfigDeleter>;

std::string TakeString(char* s) {
  std::string out(s ? s : "");
  mcil_string_free(s);
  return out;
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out_dir;
  bool dry_run = false;
};

void AddCommon(CLI::App* cmd, Common& c, const std::string& default_out, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config_path, "Experiment config (JSON)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Global seed, overrides the config");
  c.out_dir = default_out;
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
}

ConfigPtr LoadConfig(const Common& c) {
  mcil_config* raw = nullptr;
  if (c.config_path.empty()) {
    Check(mcil_config_default(&raw));
  } else {
    Check(mcil_config_load(c.config_path.c_str(), &raw));
  }
  ConfigPtr config(raw);
  if (c.seed) Check(mcil_config_set_seed(config.get(), *c.seed));
  if (c.threads) Check(mcil_config_set_threads(config.get(), *c.threads));
  return config;
}

std::string ConfigJson(const mcil_config* config) {
  char* text = nullptr;
  Check(mcil_config_to_json(config, &text));
  return TakeString(text);
}

void PrintRunSummary(const mcil_run* run) {
  double before = 0.0, after = 0.0;
  Check(mcil_run_kappa(run, &before, &after));
  for (std::size_t i = 0; i < mcil_run_classifier_count(run); ++i) {
    double b = 0.0, m = 0.0;
    Check(mcil_run_accuracies(run, i, &b, &m));
    std::printf("classifier %zu: baseline %.4f  mcil %.4f\n", i, b, m);
  }
  std::printf("kappa: %.4f -> %.4f\n", before, after);
  std::printf("mean accuracy gain: %+.4f\n", mcil_run_mean_accuracy_gain(run));
}

struct GenDataFlags {
  std::optional<int> classes;
  std::optional<std::size_t> feature_dim;
  std::optional<std::size_t> per_class;
  std::optional<double> separation;
  std::optional<double> noise;
  std::vector<double> fractions;
};

int GenData(const Common& c, const GenDataFlags& f) {
  ConfigPtr base = LoadConfig(c);
  Json doc = Json::parse(ConfigJson(base.get()));
  Json& data = doc["data"];
  if (f.classes) data["classes"] = *f.classes;
  if (f.feature_dim) data["feature_dim"] = *f.feature_dim;
  if (f.per_class) {
    data["per_class"] = *f.per_class;
    data.erase("per_class_counts");
  }
  if (f.separation) data["separation"] = *f.separation;
  if (f.noise) data["noise_scale"] = *f.noise;
  if (!f.fractions.empty()) {
    if (f.fractions.size() != 3) Usage("--fractions: expected three values");
    data["fractions"] = f.fractions;
  }
  mcil_config* raw = nullptr;
  Check(mcil_config_parse(doc.dump().c_str(), &raw));
  ConfigPtr config(raw);
  if (c.dry_run) {
    std::fputs(ConfigJson(config.get()).c_str(), stdout);
    return 0;
  }
  std::size_t sizes[3] = {0, 0, 0};
  Check(mcil_gen_data(config.get(), c.out_dir.c_str(), sizes));
  std::printf("wrote %s: d1 %zu, d2 %zu, d3 %zu rows\n", c.out_dir.c_str(), sizes[0], sizes[1],
              sizes[2]);
  return 0;
}

int Run(const Common& c) {
  ConfigPtr config = LoadConfig(c);
  if (c.dry_run) {
    std::fputs(ConfigJson(config.get()).c_str(), stdout);
    return 0;
  }
  mcil_run* raw = nullptr;
  Check(mcil_run_experiment(config.get(), &raw));
  std::unique_ptr<mcil_run, RunDeleter> run(raw);
  Check(mcil_run_write(run.get(), c.out_dir.c_str(), c.config_path.c_str()));
  PrintRunSummary(run.get());
  std::printf("report written to %s\n", c.out_dir.c_str());
  return 0;
}

int Ablation(const Common& c, const std::vector<std::size_t>& sizes) {
  ConfigPtr config = LoadConfig(c);
  const std::size_t zoo = mcil_config_zoo_size(config.get());
  for (std::size_t s : sizes) {
    if (s < 2 || s > zoo) {
      Usage("--sizes: zoo size " + std::to_string(s) + " outside [2, " + std::to_string(zoo) +
            "] for this config");
    }
  }
  if (c.dry_run) {
    std::fputs(ConfigJson(config.get()).c_str(), stdout);
    return 0;
  }
  mcil_ablation* raw = nullptr;
  Check(mcil_ablation_run(config.get(), sizes.data(), sizes.size(), &raw));
  std::unique_ptr<mcil_ablation, AblationDeleter> ablation(raw);
  Check(mcil_ablation_write(ablation.get(), c.out_dir.c_str(), c.config_path.c_str()));
  char* grid = nullptr;
  Check(mcil_ablation_grid_csv(ablation.get(), &grid));
  std::fputs(TakeString(grid).c_str(), stdout);
  std::printf("splits identical across sizes: %s\n",
              mcil_ablation_splits_identical(ablation.get()) ? "yes" : "no");
  return 0;
}

struct PsychometricFlags {
  std::vector<double> sigmas;
  std::vector<double> biases;
  std::vector<double> grid;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::string out_dir = "psychometric_out";
};

int Psychometric(const PsychometricFlags& f) {
  if (f.sigmas.size() < 2) Usage("--sigmas: the joint model needs at least two observers");
  if (!f.biases.empty() && f.biases.size() != f.sigmas.size()) {
    Usage("--biases: expected one value per sigma");
  }
  std::vector<double> grid = f.grid;
  if (grid.empty()) {
    for (int i = -5; i <= 5; ++i) grid.push_back(i);
  }
  Check(mcil_psychometric_write(f.sigmas.data(), f.biases.empty() ? nullptr : f.biases.data(),
                                f.sigmas.size(), grid.data(), grid.size(), f.trials, f.seed,
                                f.out_dir.c_str()));
  double variance = 0.0;
  Check(mcil_joint_variance(f.sigmas.data(), f.sigmas.size(), &variance));
  std::printf("sigma_joint^2 = %.17g\n", variance);
  std::printf("curves written to %s\n", f.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-classifier interactive learning"};
  app.set_version_flag("--version", std::string(mcil_version()));
  app.require_subcommand(1);

  Common gen_common, run_common, ablation_common;
  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset and its splits");
  AddCommon(gen_cmd, gen_common, "data_out", false);
  gen_cmd->add_option("--classes", gen.classes, "Number of classes");
  gen_cmd->add_option("--feature-dim", gen.feature_dim, "Feature dimension");
  gen_cmd->add_option("--per-class", gen.per_class, "Samples per class");
  gen_cmd->add_option("--separation", gen.separation, "Distance of class means from the origin");
  gen_cmd->add_option("--noise", gen.noise, "Cluster standard deviation");
  gen_cmd->add_option("--fractions", gen.fractions, "Split fractions d1,d2,d3")->delimiter(',');
  gen_cmd->add_flag("--dry-run", gen_common.dry_run, "Print the resolved config and exit");

  auto* run_cmd = app.add_subcommand("run", "Run the full experiment");
  AddCommon(run_cmd, run_common, "mcil_out", true);
  run_cmd->add_option("--threads", run_common.threads, "Worker threads (0 = all cores)");
  run_cmd->add_flag("--dry-run", run_common.dry_run, "Validate, print the resolved config, exit");

  std::vector<std::size_t> sizes{3, 5, 7};
  auto* ablation_cmd = app.add_subcommand("ablation", "Compare zoo sizes on shared splits");
  AddCommon(ablation_cmd, ablation_common, "ablation_out", true);
  ablation_cmd->add_option("--sizes", sizes, "Zoo sizes")->delimiter(',')->capture_default_str();
  ablation_cmd->add_option("--threads", ablation_common.threads, "Worker threads (0 = all cores)");
  ablation_cmd->add_flag("--dry-run", ablation_common.dry_run,
                         "Validate, print the resolved config, exit");

  PsychometricFlags psy;
  auto* psy_cmd = app.add_subcommand("psychometric", "Joint psychometric curves");
  psy_cmd->add_option("--sigmas", psy.sigmas, "Observer sigmas")->delimiter(',')->required();
  psy_cmd->add_option("--biases", psy.biases, "Observer biases")->delimiter(',');
  psy_cmd->add_option("--grid", psy.grid, "delta_c grid (default -5..5)")->delimiter(',');
  psy_cmd->add_option("--trials", psy.trials, "Monte Carlo trials per grid point")
      ->capture_default_str();
  psy_cmd->add_option("--seed", psy.seed, "Monte Carlo seed")->capture_default_str();
  psy_cmd->add_option("--out", psy.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen_cmd) return GenData(gen_common, gen);
    if (*run_cmd) return Run(run_common);
    if (*ablation_cmd) return Ablation(ablation_common, sizes);
    if (*psy_cmd) return Psychometric(psy);
  } catch (const ExitCode& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mcil: error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
