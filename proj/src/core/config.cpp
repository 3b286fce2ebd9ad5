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

#include "core/config.hpp"

#include <initializer_list>
#include <set>
#include <type_traits>

#include "core/error.hpp"
#include "core/text.hpp"

namespace mcil::config {

namespace {

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "64-bit size_t expected");

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  Fail(ErrorCode::kValidation, field + ": " + what);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Typed access to one JSON object with field paths in error messages.
class Reader {
 public:
  Reader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) Invalid(Name(), "must be an object");
  }

  void AllowOnly(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : object_.items()) {
      if (!allowed.contains(key)) Invalid(Join(path_, key), "unknown field");
    }
  }

  bool Has(const char* key) const { return object_.contains(key); }
  const Json& At(const char* key) const { return object_.at(key); }
  std::string Path(const char* key) const { return Join(path_, key); }

  void Read(const char* key, std::uint64_t& out) const {
    if (!Has(key)) return;
    const Json& v = At(key);
    if (!v.is_number_unsigned()) Invalid(Path(key), "must be a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void Read(const char* key, int& out) const {
    std::uint64_t v = static_cast<std::uint64_t>(out < 0 ? 0 : out);
    Read(key, v);
    if (v > 1000000) Invalid(Path(key), "out of range");
    out = static_cast<int>(v);
  }

  void Read(const char* key, double& out) const {
    if (!Has(key)) return;
    const Json& v = At(key);
    if (!v.is_number()) Invalid(Path(key), "must be a number");
    out = v.get<double>();
  }

  void Read(const char* key, bool& out) const {
    if (!Has(key)) return;
    const Json& v = At(key);
    if (!v.is_boolean()) Invalid(Path(key), "must be true or false");
    out = v.get<bool>();
  }

  void Read(const char* key, std::string& out) const {
    if (!Has(key)) return;
    const Json& v = At(key);
    if (!v.is_string()) Invalid(Path(key), "must be a string");
    out = v.get<std::string>();
  }

 private:
  std::string Name() const { return path_.empty() ? "config" : path_; }

  const Json& object_;
  std::string path_;
};

std::vector<std::size_t> ReadSizeList(const Json& v, const std::string& path) {
  if (!v.is_array()) Invalid(path, "must be a list of non-negative integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Json& e = v[i];
    if (!e.is_number_unsigned()) {
      Invalid(path + "[" + std::to_string(i) + "]", "must be a non-negative integer");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

nn::Activation ReadActivationName(const Json& v, const std::string& path) {
  if (!v.is_string()) Invalid(path, "must be \"relu\" or \"tanh\"");
  try {
    return nn::ParseActivation(v.get<std::string>());
  } catch (const Error&) {
    Invalid(path, "unknown activation '" + v.get<std::string>() + "'");
  }
}

nn::ArchitectureSpec ReadSpec(const Json& v, const std::string& path) {
  const Reader r(v, path);
  r.AllowOnly({"name", "hidden", "activation", "residual"});
  nn::ArchitectureSpec spec;
  if (!r.Has("name")) Invalid(r.Path("name"), "required field missing");
  r.Read("name", spec.name);
  if (!r.Has("hidden")) Invalid(r.Path("hidden"), "required field missing");
  spec.hidden_widths = ReadSizeList(r.At("hidden"), r.Path("hidden"));

  const std::size_t layers = spec.hidden_widths.size();
  if (!r.Has("activation")) {
    spec.activations.assign(layers, nn::Activation::kRectifier);
  } else if (r.At("activation").is_array()) {
    const Json& list = r.At("activation");
    for (std::size_t i = 0; i < list.size(); ++i) {
      spec.activations.push_back(
          ReadActivationName(list[i], r.Path("activation") + "[" + std::to_string(i) + "]"));
    }
  } else {
    spec.activations.assign(layers, ReadActivationName(r.At("activation"), r.Path("activation")));
  }

  if (r.Has("residual")) {
    const Json& list = r.At("residual");
    const std::string field = r.Path("residual");
    if (!list.is_array()) Invalid(field, "must be a list of [i, j] pairs");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto pair = ReadSizeList(list[i], field + "[" + std::to_string(i) + "]");
      if (pair.size() != 2) Invalid(field + "[" + std::to_string(i) + "]", "must be a pair [i, j]");
      spec.residual_pairs.emplace_back(pair[0], pair[1]);
    }
  }
  try {
    spec.Validate();
  } catch (const Error& e) {
    Invalid(path, e.what());
  }
  return spec;
}

nn::LossForm ParseLossForm(const std::string& name, const std::string& path) {
  if (name == "summed_binary") return nn::LossForm::kSummedBinary;
  if (name == "categorical") return nn::LossForm::kCategorical;
  Invalid(path, "must be \"summed_binary\" or \"categorical\"");
}

void ReadTrain(const Json& v, const std::string& path, nn::TrainConfig& c) {
  const Reader r(v, path);
  r.AllowOnly({"epochs", "batch_size", "lr_start", "lr_end", "weight_decay", "frozen_layers",
               "loss_form"});
  r.Read("epochs", c.epochs);
  r.Read("batch_size", c.batch_size);
  r.Read("lr_start", c.lr_start);
  r.Read("lr_end", c.lr_end);
  r.Read("weight_decay", c.weight_decay);
  r.Read("frozen_layers", c.frozen_prefix_layers);
  std::string form = LossFormName(c.loss_form);
  r.Read("loss_form", form);
  c.loss_form = ParseLossForm(form, r.Path("loss_form"));
}

void ReadData(const Json& v, pipeline::DataSource& d) {
  const Reader r(v, "data");
  r.AllowOnly({"source", "path", "classes", "feature_dim", "per_class", "per_class_counts",
               "separation", "noise_scale", "fractions"});
  std::string source = "synthetic";
  r.Read("source", source);
  if (source == "synthetic") {
    d.kind = pipeline::DataSource::Kind::kSynthetic;
  } else if (source == "csv") {
    d.kind = pipeline::DataSource::Kind::kCsv;
  } else {
    Invalid("data.source", "must be \"synthetic\" or \"csv\"");
  }
  r.Read("path", d.csv_path);
  r.Read("classes", d.generator.num_classes);
  r.Read("feature_dim", d.generator.feature_dim);
  r.Read("per_class", d.generator.per_class);
  if (r.Has("per_class_counts")) {
    d.generator.per_class_counts = ReadSizeList(r.At("per_class_counts"), "data.per_class_counts");
  }
  r.Read("separation", d.generator.separation);
  r.Read("noise_scale", d.generator.noise_scale);
  if (r.Has("fractions")) {
    const Json& f = r.At("fractions");
    if (!f.is_array() || f.size() != 3 || !f[0].is_number() || !f[1].is_number() ||
        !f[2].is_number()) {
      Invalid("data.fractions", "must be a list of three numbers");
    }
    d.fractions = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>()};
  }
}

Json TrainToJson(const nn::TrainConfig& c) {
  return Json{{"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"lr_start", c.lr_start},
              {"lr_end", c.lr_end},
              {"weight_decay", c.weight_decay},
              {"frozen_layers", c.frozen_prefix_layers},
              {"loss_form", LossFormName(c.loss_form)}};
}

}  // namespace

const char* LossFormName(nn::LossForm form) {
  return form == nn::LossForm::kSummedBinary ? "summed_binary" : "categorical";
}

pipeline::ExperimentConfig ParseConfig(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  const Reader r(doc, "");
  r.AllowOnly({"global_seed", "cv_folds", "soft_vote", "threads", "data", "zoo", "stage1",
               "stage2"});

  pipeline::ExperimentConfig c = pipeline::DefaultExperimentConfig();
  r.Read("global_seed", c.global_seed);
  r.Read("cv_folds", c.cv_folds);
  r.Read("soft_vote", c.soft_vote);
  r.Read("threads", c.threads);
  if (r.Has("data")) ReadData(r.At("data"), c.data);
  if (r.Has("stage1")) ReadTrain(r.At("stage1"), "stage1", c.stage1);
  if (r.Has("stage2")) ReadTrain(r.At("stage2"), "stage2", c.stage2);

  c.zoo.clear();
  if (!r.Has("zoo")) Invalid("zoo", "required field missing");
  const Json& zoo = r.At("zoo");
  if (!zoo.is_array()) Invalid("zoo", "must be a list of classifier specs");
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    c.zoo.push_back(ReadSpec(zoo[i], "zoo[" + std::to_string(i) + "]"));
  }
  c.Validate();
  return c;
}

pipeline::ExperimentConfig LoadConfig(const std::string& path) {
  return ParseConfig(text::ReadFile(path));
}

Json ConfigToJson(const pipeline::ExperimentConfig& c) {
  const auto& g = c.data.generator;
  Json data;
  if (c.data.kind == pipeline::DataSource::Kind::kCsv) {
    data = Json{{"source", "csv"}, {"path", c.data.csv_path}, {"classes", g.num_classes}};
  } else {
    data = Json{{"source", "synthetic"},
                {"classes", g.num_classes},
                {"feature_dim", g.feature_dim},
                {"per_class", g.per_class}};
    if (!g.per_class_counts.empty()) data["per_class_counts"] = g.per_class_counts;
    data["separation"] = g.separation;
    data["noise_scale"] = g.noise_scale;
  }
  data["fractions"] = {c.data.fractions.precise, c.data.fractions.pool, c.data.fractions.ambiguous};

  Json zoo = Json::array();
  for (const auto& spec : c.zoo) {
    Json activations = Json::array();
    for (auto a : spec.activations) activations.push_back(nn::ActivationName(a));
    Json residual = Json::array();
    for (const auto& [i, j] : spec.residual_pairs) residual.push_back({i, j});
    zoo.push_back(Json{{"name", spec.name},
                       {"hidden", spec.hidden_widths},
                       {"activation", activations},
                       {"residual", residual}});
  }
  return Json{{"global_seed", c.global_seed}, {"cv_folds", c.cv_folds},
              {"soft_vote", c.soft_vote},     {"threads", c.threads},
              {"data", data},                 {"zoo", zoo},
              {"stage1", TrainToJson(c.stage1)}, {"stage2", TrainToJson(c.stage2)}};
}

}  // namespace mcil::config
