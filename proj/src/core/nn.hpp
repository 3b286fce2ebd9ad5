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

#ifndef MCIL_CORE_NN_HPP_
#define MCIL_CORE_NN_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcil::nn {

enum class Activation { kRectifier, kHyperbolicTangent };

const char* ActivationName(Activation a);
Activation ParseActivation(const std::string& name);

// One small feedforward classifier. activations holds one entry per hidden
// layer. A residual pair (i, j), i < j, adds hidden layer i's output to
// hidden layer j's output; both layers must have the same width.
struct ArchitectureSpec {
  std::string name;
  std::vector<std::size_t> hidden_widths;
  std::vector<Activation> activations;
  std::vector<std::pair<std::size_t, std::size_t>> residual_pairs;

  void Validate() const;
};

bool operator==(const ArchitectureSpec& a, const ArchitectureSpec& b);

struct Layer {
  Eigen::MatrixXd weights;  // fan_out x fan_in
  Eigen::VectorXd biases;
};

class Network {
 public:
  Network(ArchitectureSpec spec, std::size_t input_dim, std::size_t output_dim,
          std::vector<Layer> layers);

  const ArchitectureSpec& spec() const { return spec_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  // Hidden layers first, output layer last.
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  std::size_t parameter_count() const;

  // Column-per-sample batch evaluation. Returns output_dim x batch softmax
  // probabilities.
  Eigen::MatrixXd ForwardBatch(const Eigen::MatrixXd& inputs) const;
  // Activations of the last hidden layer, width x batch.
  Eigen::MatrixXd PenultimateBatch(const Eigen::MatrixXd& inputs) const;

 private:
  ArchitectureSpec spec_;
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<Layer> layers_;
};

bool operator==(const Network& a, const Network& b);

// Uniform Glorot initialization, zero biases.
Network InitNetwork(const ArchitectureSpec& spec, std::size_t input_dim,
                    std::size_t output_dim, std::uint64_t seed);

std::vector<double> Forward(const Network& network, std::span<const double> features);

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;
};

// Lowest index wins ties.
int Argmax(std::span<const double> values);
Prediction Predict(const Network& network, std::span<const double> features);
std::vector<int> PredictBatch(const Network& network, const Eigen::MatrixXd& inputs);

// Throws kUnsupportedArchitecture for networks without hidden layers.
std::vector<double> ExtractFeatures(const Network& network,
                                    std::span<const double> features);

// Logs use predictions clamped to [kLogClamp, 1 - kLogClamp].
inline constexpr double kLogClamp = 1e-12;

// Precise-label loss. kSummedBinary is the per-class binary cross-entropy
// -sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)]; kCategorical is -sum y_i log p_i.
enum class LossForm { kSummedBinary, kCategorical };
enum class LossKind { kPrecise, kAmbiguous };

double CrossEntropyLoss(std::span<const double> pred, std::span<const double> target,
                        LossForm form = LossForm::kSummedBinary);
// sum_k t_k log(t_k / p_k) with 0 log 0 = 0.
double KlLoss(std::span<const double> target, std::span<const double> pred);

// Column-per-example inputs and target distributions.
struct TrainingData {
  Eigen::MatrixXd inputs;   // input_dim x m
  Eigen::MatrixXd targets;  // output_dim x m

  std::size_t size() const { return static_cast<std::size_t>(inputs.cols()); }
};

struct GradientResult {
  std::vector<Layer> grads;  // parameter-shaped
  double loss = 0.0;         // mean over the batch
};

GradientResult Gradients(const Network& network, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets, LossKind kind,
                         LossForm form = LossForm::kSummedBinary);

double MeanLoss(const Network& network, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets, LossKind kind,
                LossForm form = LossForm::kSummedBinary);

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  double lr_start = 1e-4;
  double lr_end = 1e-8;
  double weight_decay = 0.0005;
  std::size_t frozen_prefix_layers = 0;
  LossKind loss = LossKind::kPrecise;
  LossForm loss_form = LossForm::kSummedBinary;
  std::uint64_t seed = 0;
  // Stop once the epoch-mean loss changes by less than this; 0 disables.
  double convergence_tolerance = 0.0;

  void Validate() const;
  // lr_start * (lr_end / lr_start)^(epoch / (epochs - 1)).
  double LearningRate(std::size_t epoch) const;
};

struct TrainResult {
  Network network;
  std::vector<double> history;  // mean training loss per epoch
};

// Adam (0.9, 0.999, 1e-8) with decoupled weight decay.
TrainResult Train(Network network, const TrainingData& data, const TrainConfig& config);

// Plain-text format, parameters at 17 significant digits.
std::string SerializeNetwork(const Network& network);
Network DeserializeNetwork(const std::string& text);
void SaveNetwork(const Network& network, const std::string& path);
Network LoadNetwork(const std::string& path);

}  // namespace mcil::nn

#endif  // MCIL_CORE_NN_HPP_
