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

#ifndef MCIL_CORE_REPORT_HPP_
#define MCIL_CORE_REPORT_HPP_

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/pipeline.hpp"

namespace mcil::report {

using config::Json;

// Deterministic report document: a pure function of the config. Holds no
// paths, host names or timestamps; those go in the manifest.
Json ReportToJson(const pipeline::ExperimentConfig& config,
                  const pipeline::ExperimentReport& report);

// Resolved config without run-environment knobs (threads).
Json ConfigEcho(const pipeline::ExperimentConfig& config);

struct SideFile {
  std::string name;  // relative to the output directory
  std::string contents;
};

// report.json, confusion_<name>_{baseline,mcil}.csv,
// curve_<name>_{baseline,mcil}.csv, constructed_labels.csv and
// network_<name>_{baseline,mcil}.txt.
std::vector<SideFile> RunFiles(const pipeline::ExperimentConfig& config,
                               const pipeline::RunResult& run);

// ablation.json (per-size reports and split checks), ablation_grid.csv
// (one row per classifier, a baseline column and one MCIL column per size)
// and ablation_rows.csv (long form).
std::vector<SideFile> AblationFiles(const pipeline::ExperimentConfig& config,
                                    const pipeline::AblationResult& result);

// dataset.csv plus d1.csv, d2.csv (labels withheld) and d3.csv, generated
// and split exactly as a run with the same config would.
std::vector<SideFile> DataFiles(const pipeline::ExperimentConfig& config);

struct PsychometricRequest {
  std::vector<psychometric::ObserverModel> observers;  // at least two
  std::vector<double> grid;                            // delta_c values
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
};

// observer_<i>.csv closed-form curves, joint.csv (sigma_joint^2 and the
// joint bias in a leading '#' line) and validation.csv comparing Monte Carlo
// fusion against the joint curve.
std::vector<SideFile> PsychometricFiles(const PsychometricRequest& request);

std::string CurveCsv(std::span<const psychometric::CurvePoint> points);

// Writes every file under out_dir (created if needed), then manifest.json.
// `settings` is the resolved input echoed into the manifest.
void WriteArtifacts(const std::string& out_dir, const std::string& command,
                    const std::string& config_path, const Json& settings,
                    std::uint64_t seed, const std::vector<SideFile>& files);

}  // namespace mcil::report

#endif  // MCIL_CORE_REPORT_HPP_
