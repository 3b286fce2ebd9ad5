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

// Acceptance harness. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "core/labeling.hpp"
#include "core/metrics.hpp"
#include "core/nn.hpp"
#include "core/pipeline.hpp"
#include "core/psychometric.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
namespace ps = mcil::psychometric;
using mcil::Rng;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int RunCli(const std::string& args) {
  const std::string command = std::string(MCIL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Inequalities of the optimally interacting group.
Verdict PsychometricInequalities() {
  const auto start = Clock::now();
  Rng rng(2024);
  int failures = 0;
  double worst_rel = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.Below(6);
    std::vector<ps::ObserverModel> obs(n);
    double min_var = INFINITY, max_slope = 0.0, inv_sum = 0.0;
    for (auto& o : obs) {
      o.sigma = rng.Uniform(0.1, 10.0);
      o.bias = rng.Uniform(-2.0, 2.0);
      min_var = std::min(min_var, o.sigma * o.sigma);
      max_slope = std::max(max_slope, 1.0 / std::sqrt(2.0 * std::numbers::pi * o.sigma * o.sigma));
      inv_sum += 1.0 / (o.sigma * o.sigma);
    }
    const auto w = ps::JointWeights(obs);
    double wsum = 0.0;
    for (double x : w) wsum += x;
    const double var = ps::JointVariance(obs);
    const double harmonic = 1.0 / inv_sum;
    const double rel = std::abs(var - harmonic) / harmonic;
    worst_rel = std::max(worst_rel, rel);
    const bool ok = std::abs(wsum - 1.0) <= 1e-12 && var <= min_var + 1e-12 && rel <= 1e-10 &&
                    std::abs(ps::JointVarianceClosedForm(obs) - harmonic) <= 1e-10 * harmonic &&
                    ps::JointSlopeApprox(obs) >= max_slope - 1e-12;
    failures += !ok;
  }
  const double secs = Seconds(start);
  return {failures == 0 && secs < 1.0,
          Fmt("1000 sets, %.0f failures, worst closed-form rel err %.2e, %.3f s", failures,
              worst_rel, secs)};
}

// 2. Two observers, sigma = (1, 2).
Verdict TwoObserverClosedForm() {
  const std::vector<ps::ObserverModel> obs{{1.0, 0.0}, {2.0, 0.0}};
  const auto w = ps::JointWeights(obs);
  const double var = ps::JointVariance(obs);
  const bool ok = std::abs(var - 0.8) <= 1e-12 && std::abs(w[0] - 0.8) <= 1e-12 &&
                  std::abs(w[1] - 0.2) <= 1e-12;
  return {ok, Fmt("sigma_joint^2 = %.17g, weights (%.17g, %.17g)", var, w[0], w[1])};
}

// 3. Monte Carlo fusion against the joint curve.
Verdict MonteCarloJointCurve() {
  const auto start = Clock::now();
  const std::vector<ps::ObserverModel> obs{{2.0, 0.0}, {2.0, 0.0}};
  std::vector<double> grid;
  for (int i = -5; i <= 5; ++i) grid.push_back(i);
  const std::size_t trials = 100000;
  const auto points = ps::SimulateJointCurve(obs, grid, trials, 99);
  const ps::ObserverModel joint = ps::JointModel(obs);
  int within = 0;
  for (const auto& p : points) {
    // Independent prediction: fused sigma = 2 / sqrt(2).
    const double predicted = mcil::oracle::NormalCdfQuadrature(p.delta_c / std::sqrt(2.0));
    const double sd = std::sqrt(predicted * (1.0 - predicted) / static_cast<double>(trials));
    const double tol = std::max(3.0 * sd, 1e-12);
    within += std::abs(p.accuracy - predicted) <= tol &&
              std::abs(ps::PsychometricResponse(joint, p.delta_c) - predicted) < 1e-9;
  }
  const double secs = Seconds(start);
  return {within >= 10 && secs < 30.0,
          Fmt("%.0f/11 points within 3 sd, %.2f s", within, secs)};
}

mcil::nn::ArchitectureSpec Spec(std::vector<std::size_t> widths, mcil::nn::Activation a,
                                std::vector<std::pair<std::size_t, std::size_t>> residual = {}) {
  mcil::nn::ArchitectureSpec s;
  s.name = "net";
  s.hidden_widths = widths;
  s.activations.assign(widths.size(), a);
  s.residual_pairs = std::move(residual);
  return s;
}

double GradientError(const mcil::nn::Network& net, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& t, mcil::nn::LossKind kind) {
  namespace nn = mcil::nn;
  const auto analytic = nn::Gradients(net, x, t, kind);
  nn::Network probe = net;
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    auto check = [&](double& param, double grad) {
      const double saved = param;
      param = saved + h;
      const double up = nn::MeanLoss(probe, x, t, kind);
      param = saved - h;
      const double down = nn::MeanLoss(probe, x, t, kind);
      param = saved;
      const double numeric = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(grad - numeric) /
                                  std::max({std::abs(grad), std::abs(numeric), 1e-6}));
    };
    auto& layer = probe.mutable_layers()[l];
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
      check(layer.weights.data()[i], analytic.grads[l].weights.data()[i]);
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i)
      check(layer.biases.data()[i], analytic.grads[l].biases.data()[i]);
  }
  return worst;
}

// 4. Analytic against central-difference gradients for both losses.
Verdict GradientCorrectness() {
  namespace nn = mcil::nn;
  const auto start = Clock::now();
  Rng rng(404);
  double worst = 0.0;
  int networks = 0;
  std::size_t max_params = 0;
  for (int i = 0; i < 24; ++i) {
    const std::size_t in = 2 + rng.Below(3), out = 2 + rng.Below(3), w = 3 + rng.Below(4);
    nn::ArchitectureSpec spec;
    switch (i % 3) {
      case 0: spec = Spec({w}, nn::Activation::kHyperbolicTangent); break;
      case 1: spec = Spec({w, w}, nn::Activation::kRectifier, {{0, 1}}); break;
      default: spec = Spec({w, 3}, nn::Activation::kHyperbolicTangent); break;
    }
    nn::Network net = nn::InitNetwork(spec, in, out, 1000 + i);
    for (auto& layer : net.mutable_layers())
      for (Eigen::Index j = 0; j < layer.biases.size(); ++j) layer.biases(j) = rng.Uniform(-0.3, 0.3);
    max_params = std::max(max_params, net.parameter_count());
    Eigen::MatrixXd x(in, 6), onehot = Eigen::MatrixXd::Zero(out, 6), soft(out, 6);
    for (Eigen::Index j = 0; j < x.size(); ++j) x.data()[j] = rng.Uniform(-1.5, 1.5);
    for (Eigen::Index c = 0; c < 6; ++c) {
      onehot(static_cast<Eigen::Index>(rng.Below(out)), c) = 1.0;
      for (Eigen::Index r = 0; r < soft.rows(); ++r) soft(r, c) = rng.Uniform(0.01, 1.0);
      soft.col(c) /= soft.col(c).sum();
    }
    worst = std::max(worst, GradientError(net, x, onehot, nn::LossKind::kPrecise));
    worst = std::max(worst, GradientError(net, x, soft, nn::LossKind::kAmbiguous));
    ++networks;
  }
  const double secs = Seconds(start);
  return {networks >= 20 && max_params <= 200 && worst < 1e-4 && secs < 10.0,
          Fmt("%.0f networks (<= %.0f params), worst rel err %.2e", networks,
              static_cast<double>(max_params), worst) +
              Fmt(", %.3f s", secs)};
}

// 5. Loss point values.
Verdict LossValues() {
  namespace nn = mcil::nn;
  const std::vector<double> uniform(5, 0.2), first{1, 0, 0, 0, 0};
  const double ce = nn::CrossEntropyLoss(uniform, first);
  const double kl_half = nn::KlLoss(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5});
  const double kl_vote = nn::KlLoss(std::vector<double>{0.6, 0.2, 0.2, 0, 0}, uniform);
  const bool ok = std::abs(ce - 2.50201) <= 1e-5 && std::abs(kl_half - std::log(2.0)) <= 1e-10 &&
                  std::abs(kl_vote - 0.6 * std::log(3.0)) <= 1e-10;
  return {ok, Fmt("CE %.6f, KL %.12f and %.12f", ce, kl_half, kl_vote)};
}

// 6. Fleiss kappa.
Verdict Kappa() {
  namespace m = mcil::metrics;
  const double all_agree = m::FleissKappa({{3, 0}, {0, 3}, {3, 0}}, 3).kappa;
  const double hand = m::FleissKappa({{3, 0}, {0, 3}, {2, 1}, {1, 2}}, 3).kappa;
  Rng rng(6);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t items = 1 + rng.Below(30), cats = 2 + rng.Below(5);
    const int raters = 2 + static_cast<int>(rng.Below(7));
    std::vector<std::vector<int>> table(items, std::vector<int>(cats, 0));
    for (auto& row : table)
      for (int r = 0; r < raters; ++r) ++row[rng.Below(cats)];
    worst = std::max(worst, std::abs(m::FleissKappa(table, raters).kappa -
                                     mcil::oracle::KappaByPairs(table, raters)));
  }
  const bool bands = m::AgreementBandOf(0.5088) == m::AgreementBand::kModerate &&
                     m::AgreementBandOf(0.7145) == m::AgreementBand::kSubstantial;
  const bool ok = all_agree == 1.0 && std::abs(hand - 1.0 / 3.0) <= 1e-12 && worst <= 1e-12 && bands;
  return {ok, Fmt("all-agree %.17g, hand table %.17g, oracle max diff %.2e", all_agree, hand, worst) +
                  (bands ? ", bands ok" : ", bands wrong")};
}

// 7. Label construction invariants.
Verdict LabelConstruction() {
  namespace nn = mcil::nn;
  Rng rng(7);
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    const int k = 2 + static_cast<int>(rng.Below(5));
    const std::size_t n = 2 + rng.Below(6);
    const std::size_t dim = 3;
    std::vector<mcil::data::Sample> samples(20);
    for (auto& s : samples) {
      s.features.resize(dim);
      for (double& v : s.features) v = rng.Normal();
    }
    const mcil::data::Dataset pool(std::move(samples), k, dim);
    std::vector<nn::Network> zoo;
    for (std::size_t c = 0; c < n; ++c) {
      nn::Network net = nn::InitNetwork(Spec({5}, nn::Activation::kHyperbolicTangent), dim,
                                        static_cast<std::size_t>(k), rng.NextBits());
      for (auto& layer : net.mutable_layers()) layer.weights *= 3.0;
      zoo.push_back(std::move(net));
    }
    const auto labels = mcil::labeling::ConstructLabels(zoo, pool);
    rng.Shuffle(std::span<nn::Network>(zoo));
    const auto shuffled = mcil::labeling::ConstructLabels(zoo, pool);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& p = labels[i].label.probabilities;
      double sum = 0.0;
      bool ok = p == shuffled[i].label.probabilities;
      for (double v : p) {
        sum += v;
        const double scaled = v * static_cast<double>(n);
        ok = ok && v >= 0.0 && v <= 1.0 && scaled == std::round(scaled);
      }
      ok = ok && std::abs(sum - 1.0) <= 1e-12;
      failures += !ok;
    }
  }
  return {failures == 0, Fmt("100 cases, %.0f labels violating simplex, grid or permutation", failures)};
}

struct SeedRun {
  double accuracy_gain = 0.0;
  double kappa_gain = 0.0;
  std::size_t sigma_improved = 0;
};

std::vector<SeedRun> default_runs;
double default_seconds = 0.0;

void RunDefaultSeeds() {
  const auto start = Clock::now();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto config = mcil::pipeline::DefaultExperimentConfig();
    config.global_seed = seed;
    config.threads = 1;
    const auto run = mcil::pipeline::RunAll(config);
    default_runs.push_back(
        {run.report.MeanAccuracyGain(), run.report.KappaGain(), run.report.SigmaImprovedCount()});
    std::printf("  seed %llu: mean accuracy gain %+.4f, kappa gain %+.4f, sigma improved %zu/5\n",
                static_cast<unsigned long long>(seed), run.report.MeanAccuracyGain(),
                run.report.KappaGain(), run.report.SigmaImprovedCount());
    std::fflush(stdout);
  }
  default_seconds = Seconds(start);
}

// 8. Direction of the end-to-end effect over ten seeds.
Verdict EndToEnd() {
  std::vector<double> gains, kappas;
  int improved = 0;
  for (const auto& r : default_runs) {
    gains.push_back(r.accuracy_gain);
    kappas.push_back(r.kappa_gain);
    improved += r.accuracy_gain > 0.0;
  }
  const double median_gain = Median(gains), median_kappa = Median(kappas);
  const bool ok = median_gain >= 0.0 && improved >= 7 && median_kappa >= 0.05 &&
                  default_seconds < 300.0;
  return {ok, Fmt("median accuracy gain %+.4f, improved in %.0f/10, median kappa gain %+.4f",
                  median_gain, improved, median_kappa) +
                  Fmt(", %.1f s", default_seconds)};
}

// 9. Zoo-size ablation through the command line.
Verdict AblationHarness() {
  const auto out = fs::temp_directory_path() / "mcil_acceptance_ablation";
  fs::remove_all(out);
  const auto start = Clock::now();
  const int code = RunCli("ablation --sizes 3,5,7 --config " +
                          (fs::path(MCIL_SOURCE_DIR) / "configs" / "ablation.json").string() +
                          " --threads 1 --out " + out.string());
  const double secs = Seconds(start);
  const std::string grid = Slurp(out / "ablation_grid.csv");
  const std::string doc = Slurp(out / "ablation.json");
  const auto rows = std::count(grid.begin(), grid.end(), '\n');
  const bool shape = grid.rfind("classifier,baseline,mcil_3,mcil_5,mcil_7\n", 0) == 0 && rows == 8;
  const bool identical = doc.find("\"splits_identical\": true") != std::string::npos;
  fs::remove_all(out);
  return {code == 0 && shape && identical && secs < 180.0,
          Fmt("exit %.0f, grid rows %.0f, %.1f s", code, static_cast<double>(rows), secs) +
              (identical ? ", splits identical" : ", splits differ")};
}

// 10. Byte-identical reports across runs and against the golden file.
Verdict Determinism() {
  const auto base = fs::temp_directory_path() / "mcil_acceptance_golden";
  fs::remove_all(base);
  const auto config = (fs::path(MCIL_SOURCE_DIR) / "configs" / "default.json").string();
  const int a = RunCli("run --config " + config + " --out " + (base / "a").string());
  const int b = RunCli("run --config " + config + " --threads 3 --out " + (base / "b").string());
  const std::string ra = Slurp(base / "a" / "report.json");
  const std::string rb = Slurp(base / "b" / "report.json");
  const std::string golden = Slurp(fs::path(MCIL_SOURCE_DIR) / "tests" / "golden" / "report.json");
  fs::remove_all(base);
  const bool same = !ra.empty() && ra == rb;
  const bool matches = ra == golden;
  return {a == 0 && b == 0 && same && matches,
          std::string(same ? "runs identical" : "runs differ") +
              (matches ? ", golden match" : ", golden mismatch")};
}

// 11. Fitted sigma after versus before, median over the ten seeds.
Verdict PsychometricBridge() {
  std::vector<double> counts;
  for (const auto& r : default_runs) counts.push_back(static_cast<double>(r.sigma_improved));
  const double median = Median(counts);
  std::string per_seed;
  for (double c : counts) per_seed += std::to_string(static_cast<int>(c));
  return {median >= 3.0, Fmt("median sigma-improved count %.1f of 5", median) +
                             " (per seed " + per_seed + ")"};
}

}  // namespace

int main() {
  std::printf("running the default configuration on ten seeds...\n");
  std::fflush(stdout);
  RunDefaultSeeds();

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"psychometric inequalities", PsychometricInequalities},
      {"two-observer closed form", TwoObserverClosedForm},
      {"monte carlo joint curve", MonteCarloJointCurve},
      {"gradient correctness", GradientCorrectness},
      {"loss point values", LossValues},
      {"fleiss kappa", Kappa},
      {"label construction", LabelConstruction},
      {"end-to-end direction", EndToEnd},
      {"ablation harness", AblationHarness},
      {"determinism and golden file", Determinism},
      {"psychometric bridge", PsychometricBridge},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
