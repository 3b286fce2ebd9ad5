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

#include "core/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace mcil::data {

namespace {

std::string LineError(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

// Unit vectors for the cluster means in `dim` (2 or 3) coordinates.
std::vector<std::array<double, 3>> SphereDirections(int k, std::size_t dim) {
  std::vector<std::array<double, 3>> dirs(static_cast<std::size_t>(k));
  if (dim == 2) {
    for (int i = 0; i < k; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / k;
      dirs[i] = {std::cos(angle), std::sin(angle), 0.0};
    }
    return dirs;
  }
  if (k == 2) {
    dirs[0] = {1.0, 0.0, 0.0};
    dirs[1] = {-1.0, 0.0, 0.0};
    return dirs;
  }
  // Fibonacci lattice on the 2-sphere.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < k; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / k;
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden * i;
    dirs[i] = {r * std::cos(phi), y, r * std::sin(phi)};
  }
  return dirs;
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples, int num_classes, std::size_t feature_dim)
    : samples_(std::move(samples)), num_classes_(num_classes), feature_dim_(feature_dim) {
  Require(num_classes_ >= 1, "dataset needs at least one class");
  Require(feature_dim_ >= 1, "dataset needs at least one feature");
  Require(!samples_.empty(), "dataset must not be empty");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    Require(s.features.size() == feature_dim_,
            "sample " + std::to_string(i) + " has " + std::to_string(s.features.size()) +
                " features, expected " + std::to_string(feature_dim_));
    if (s.label) {
      Require(*s.label >= 0 && *s.label < num_classes_,
              "sample " + std::to_string(i) + " label out of range");
    }
    if (s.clarity) {
      Require(*s.clarity >= 0.0 && *s.clarity <= 1.0,
              "sample " + std::to_string(i) + " clarity outside [0, 1]");
    }
  }
}

bool Dataset::all_labeled() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const Sample& s) { return s.label.has_value(); });
}

bool Dataset::all_have_clarity() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const Sample& s) { return s.clarity.has_value(); });
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    Require(samples_[i].label.has_value(),
            "sample " + std::to_string(i) + " has no label");
    out.push_back(*samples_[i].label);
  }
  return out;
}

double Dataset::mean_clarity() const {
  Require(all_have_clarity(), "mean_clarity: some samples lack clarity");
  double sum = 0.0;
  for (const auto& s : samples_) sum += *s.clarity;
  return sum / static_cast<double>(samples_.size());
}

Dataset Dataset::WithoutLabels() const {
  std::vector<Sample> copy = samples_;
  for (auto& s : copy) s.label.reset();
  return Dataset(std::move(copy), num_classes_, feature_dim_);
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    Require(i < samples_.size(), "subset index out of range");
    out.push_back(samples_[i]);
  }
  return Dataset(std::move(out), num_classes_, feature_dim_);
}

void GeneratorParams::Validate() const {
  Require(num_classes >= 2, "generator: classes must be >= 2");
  Require(feature_dim >= 2, "generator: feature_dim must be >= 2");
  Require(std::isfinite(separation) && separation > 0.0,
          "generator: separation must be positive");
  Require(std::isfinite(noise_scale) && noise_scale > 0.0,
          "generator: noise_scale must be positive");
  if (per_class_counts.empty()) {
    Require(per_class >= 1, "generator: per_class must be >= 1");
  } else {
    Require(per_class_counts.size() == static_cast<std::size_t>(num_classes),
            "generator: per_class_counts needs one entry per class");
    for (std::size_t c : per_class_counts) {
      Require(c >= 1, "generator: per_class_counts entries must be >= 1");
    }
  }
}

std::size_t GeneratorParams::ClassCount(int k) const {
  return per_class_counts.empty() ? per_class
                                  : per_class_counts[static_cast<std::size_t>(k)];
}

Mixture MakeMixture(const GeneratorParams& params) {
  params.Validate();
  const std::size_t embed = std::min<std::size_t>(params.feature_dim, 3);
  const auto dirs = SphereDirections(params.num_classes, embed);
  Mixture mixture;
  mixture.noise_scale = params.noise_scale;
  for (const auto& dir : dirs) {
    std::vector<double> mean(params.feature_dim, 0.0);
    for (std::size_t j = 0; j < embed; ++j) mean[j] = params.separation * dir[j];
    mixture.means.push_back(std::move(mean));
  }
  return mixture;
}

Dataset GenerateSynthetic(const GeneratorParams& params) {
  const Mixture mixture = MakeMixture(params);
  Rng rng(params.seed);
  std::vector<Sample> samples;
  for (int k = 0; k < params.num_classes; ++k) {
    const auto& mean = mixture.means[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < params.ClassCount(k); ++i) {
      Sample s;
      s.features.resize(params.feature_dim);
      for (std::size_t j = 0; j < params.feature_dim; ++j) {
        s.features[j] = mean[j] + params.noise_scale * rng.Normal();
      }
      s.label = k;
      // Stored at the 9 significant digits the CSV format carries, so a
      // save/load round trip reproduces clarity exactly.
      s.clarity = *text::ParseDouble(
          text::FormatDouble(ComputeClarity(s.features, mixture), 9));
      samples.push_back(std::move(s));
    }
  }
  return Dataset(std::move(samples), params.num_classes, params.feature_dim);
}

double ComputeClarity(std::span<const double> features, const Mixture& mixture) {
  Require(mixture.num_classes() >= 2, "compute_clarity: mixture needs >= 2 classes");
  Require(features.size() == mixture.dim(),
          "compute_clarity: sample has " + std::to_string(features.size()) +
              " features, mixture has " + std::to_string(mixture.dim()));
  Require(mixture.noise_scale > 0.0, "compute_clarity: noise_scale must be positive");
  const double inv_two_var = 1.0 / (2.0 * mixture.noise_scale * mixture.noise_scale);
  std::vector<double> log_post(mixture.means.size());
  for (std::size_t k = 0; k < mixture.means.size(); ++k) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < features.size(); ++j) {
      const double d = features[j] - mixture.means[k][j];
      dist2 += d * d;
    }
    log_post[k] = -dist2 * inv_two_var;
  }
  const double top = *std::max_element(log_post.begin(), log_post.end());
  double norm = 0.0;
  for (double& v : log_post) {
    v = std::exp(v - top);
    norm += v;
  }
  double first = 0.0, second = 0.0;
  for (double v : log_post) {
    const double p = v / norm;
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return std::clamp(first - second, 0.0, 1.0);
}

Splits Split(const Dataset& dataset, const SplitFractions& fractions, std::uint64_t seed) {
  Require(fractions.precise > 0.0 && fractions.pool > 0.0 && fractions.ambiguous > 0.0,
          "split fractions must be positive");
  Require(std::abs(fractions.precise + fractions.pool + fractions.ambiguous - 1.0) < 1e-9,
          "split fractions must sum to 1");
  Require(dataset.all_have_clarity(), "split: every sample needs a clarity score");

  const std::size_t n = dataset.size();
  Rng rng(seed);
  std::vector<std::size_t> order = rng.Permutation(n);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *dataset[a].clarity > *dataset[b].clarity;
  });

  const auto floor_share = [n](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n1 = floor_share(fractions.precise);
  const std::size_t n3 = floor_share(fractions.ambiguous);
  Require(n1 >= 1 && n3 >= 1 && n1 + n3 < n,
          "split: dataset of " + std::to_string(n) + " samples leaves an empty part");

  std::vector<std::size_t> i1(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n1));
  std::vector<std::size_t> i2(order.begin() + static_cast<std::ptrdiff_t>(n1),
                              order.end() - static_cast<std::ptrdiff_t>(n3));
  std::vector<std::size_t> i3(order.end() - static_cast<std::ptrdiff_t>(n3), order.end());

  Dataset pool = dataset.Subset(i2);
  std::vector<int> hidden;
  hidden.reserve(pool.size());
  for (const auto& s : pool.samples()) hidden.push_back(s.label.value_or(-1));

  return Splits{dataset.Subset(i1), pool.WithoutLabels(), dataset.Subset(i3),
                std::move(i1),      std::move(i2),        std::move(i3),
                HiddenLabels(std::move(hidden))};
}

Dataset ParseCsv(const std::string& text, int num_classes) {
  std::vector<std::string_view> lines;
  {
    std::string_view view(text);
    std::size_t start = 0;
    while (start < view.size()) {
      std::size_t end = view.find('\n', start);
      if (end == std::string_view::npos) end = view.size();
      std::string_view line = view.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = end + 1;
    }
  }
  if (lines.empty()) Fail(ErrorCode::kParse, LineError(1, "missing header"));

  const auto header = text::SplitFields(lines[0], ',');
  if (header.size() < 3 || header[header.size() - 2] != "label" ||
      header.back() != "clarity") {
    Fail(ErrorCode::kParse, LineError(1, "header must be f0,...,f{d-1},label,clarity"));
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      Fail(ErrorCode::kParse,
           LineError(1, "expected column f" + std::to_string(j) + ", got '" +
                            std::string(header[j]) + "'"));
    }
  }

  std::vector<Sample> samples;
  int max_label = -1;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const std::size_t line_no = ln + 1;
    const auto fields = text::SplitFields(lines[ln], ',');
    if (fields.size() != dim + 2) {
      Fail(ErrorCode::kParse, LineError(line_no, "expected " + std::to_string(dim + 2) +
                                                     " fields, got " +
                                                     std::to_string(fields.size())));
    }
    Sample s;
    s.features.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      auto v = text::ParseDouble(fields[j]);
      if (!v || !std::isfinite(*v)) {
        Fail(ErrorCode::kParse, LineError(line_no, "bad feature value '" +
                                                       std::string(fields[j]) + "'"));
      }
      s.features.push_back(*v);
    }
    if (!fields[dim].empty()) {
      auto label = text::ParseInt(fields[dim]);
      if (!label || *label < 0) {
        Fail(ErrorCode::kParse,
             LineError(line_no, "bad label '" + std::string(fields[dim]) + "'"));
      }
      if (num_classes >= 0 && *label >= num_classes) {
        Fail(ErrorCode::kParse, LineError(line_no, "label " + std::to_string(*label) +
                                                       " outside [0, " +
                                                       std::to_string(num_classes) + ")"));
      }
      s.label = static_cast<int>(*label);
      max_label = std::max(max_label, *s.label);
    }
    if (!fields[dim + 1].empty()) {
      auto clarity = text::ParseDouble(fields[dim + 1]);
      if (!clarity || !(*clarity >= 0.0 && *clarity <= 1.0)) {
        Fail(ErrorCode::kParse, LineError(line_no, "bad clarity '" +
                                                       std::string(fields[dim + 1]) + "'"));
      }
      s.clarity = *clarity;
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) Fail(ErrorCode::kParse, "csv contains no data rows");
  const int k = num_classes >= 0 ? num_classes : std::max(max_label + 1, 1);
  return Dataset(std::move(samples), k, dim);
}

Dataset LoadCsv(const std::string& path, int num_classes) {
  try {
    return ParseCsv(text::ReadFile(path), num_classes);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) Fail(ErrorCode::kParse, path + ": " + e.what());
    throw;
  }
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  for (std::size_t j = 0; j < dataset.feature_dim(); ++j) {
    out += 'f';
    out += std::to_string(j);
    out += ',';
  }
  out += "label,clarity\n";
  for (const auto& s : dataset.samples()) {
    for (double v : s.features) {
      out += text::FormatDouble(v, 17);
      out += ',';
    }
    if (s.label) out += std::to_string(*s.label);
    out += ',';
    if (s.clarity) out += text::FormatDouble(*s.clarity, 9);
    out += '\n';
  }
  return out;
}

void SaveCsv(const Dataset& dataset, const std::string& path) {
  text::WriteFile(path, FormatCsv(dataset));
}

}  // namespace mcil::data
