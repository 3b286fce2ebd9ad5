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

#ifndef MCIL_CORE_CONFIG_HPP_
#define MCIL_CORE_CONFIG_HPP_

#include <string>

#include "core/pipeline.hpp"
#include "json.hpp"

namespace mcil::config {

using Json = nlohmann::ordered_json;

// Experiment config document. Every key except "zoo" is optional and
// defaults to DefaultExperimentConfig(); unknown keys are rejected.
//
//   {
//     "global_seed": 0, "cv_folds": 5, "soft_vote": false, "threads": 0,
//     "data": {"source": "synthetic" | "csv", "path": "...",
//              "classes": 5, "feature_dim": 16, "per_class": 4080,
//              "per_class_counts": [...], "separation": 3.5,
//              "noise_scale": 1.0, "fractions": [0.30, 0.65, 0.05]},
//     "zoo": [{"name": "a", "hidden": [64, 32],
//              "activation": "relu" | ["relu", "tanh"],
//              "residual": [[0, 1]]}, ...],
//     "stage1": {"epochs", "batch_size", "lr_start", "lr_end",
//                "weight_decay", "frozen_layers",
//                "loss_form": "summed_binary" | "categorical"},
//     "stage2": {same keys}
//   }
//
// Errors: kParse for malformed JSON, kValidation (message starts with the
// field path) for everything else.
pipeline::ExperimentConfig ParseConfig(const std::string& text);
pipeline::ExperimentConfig LoadConfig(const std::string& path);

// Fully resolved form; parsing it back yields the same config.
Json ConfigToJson(const pipeline::ExperimentConfig& config);

const char* LossFormName(nn::LossForm form);

}  // namespace mcil::config

#endif  // MCIL_CORE_CONFIG_HPP_
