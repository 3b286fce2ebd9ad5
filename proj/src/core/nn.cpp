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

#include "core/nn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

namespace mcil::nn {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

bool IsIdentifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

void ApplyActivation(Activation a, Eigen::MatrixXd& m) {
  if (a == Activation::kRectifier) {
    m = m.cwiseMax(0.0);
  } else {
    m = m.array().tanh().matrix();
  }
}

// Column-wise softmax with max subtraction.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double top = logits.col(c).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      const double e = std::exp(logits(r, c) - top);
      out(r, c) = e;
      sum += e;
    }
    out.col(c) /= sum;
  }
  return out;
}

// Intermediate values of one batched forward pass.
struct Trace {
  std::vector<Eigen::MatrixXd> act;     // hidden activations before residual adds
  std::vector<Eigen::MatrixXd> hidden;  // hidden outputs incl. residual adds
  Eigen::MatrixXd probs;
};

Trace RunForward(const Network& net, const Eigen::MatrixXd& inputs, bool want_probs) {
  Require(static_cast<std::size_t>(inputs.rows()) == net.input_dim(),
          "forward: input has " + std::to_string(inputs.rows()) + " features, network expects " +
              std::to_string(net.input_dim()));
  const auto& spec = net.spec();
  const auto& layers = net.layers();
  const std::size_t num_hidden = spec.hidden_widths.size();
  Trace t;
  t.act.reserve(num_hidden);
  t.hidden.reserve(num_hidden);
  for (std::size_t l = 0; l < num_hidden; ++l) {
    const Eigen::MatrixXd& below = l == 0 ? inputs : t.hidden[l - 1];
    Eigen::MatrixXd a = layers[l].weights * below;
    a.colwise() += layers[l].biases;
    ApplyActivation(spec.activations[l], a);
    bool has_residual = false;
    for (const auto& [from, to] : spec.residual_pairs) has_residual |= to == l;
    if (has_residual) {
      Eigen::MatrixXd h = a;
      for (const auto& [from, to] : spec.residual_pairs) {
        if (to == l) h += t.hidden[from];
      }
      t.hidden.push_back(std::move(h));
    } else {
      t.hidden.push_back(a);
    }
    t.act.push_back(std::move(a));
  }
  if (want_probs) {
    const Eigen::MatrixXd& top = num_hidden == 0 ? inputs : t.hidden.back();
    Eigen::MatrixXd logits = layers.back().weights * top;
    logits.colwise() += layers.back().biases;
    t.probs = Softmax(logits);
  }
  return t;
}

Eigen::MatrixXd ToColumn(std::span<const double> features) {
  Eigen::MatrixXd col(static_cast<Eigen::Index>(features.size()), 1);
  for (std::size_t i = 0; i < features.size(); ++i) {
    col(static_cast<Eigen::Index>(i), 0) = features[i];
  }
  return col;
}

void RequireSameShape(std::span<const double> a, std::span<const double> b,
                      const char* what) {
  Require(a.size() == b.size() && !a.empty(),
          std::string(what) + ": shape mismatch (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + ")");
}

// dLoss/dp for one column, zero where the clamp is active.
void LossGradWrtProbs(LossKind kind, LossForm form, const double* p, const double* y,
                      Eigen::Index k, double* g) {
  for (Eigen::Index i = 0; i < k; ++i) {
    const double pi = p[i];
    if (kind == LossKind::kAmbiguous) {
      g[i] = (y[i] > 0.0 && pi >= kLogClamp) ? -y[i] / pi : 0.0;
      continue;
    }
    const bool clamped = pi < kLogClamp || pi > 1.0 - kLogClamp;
    if (clamped) {
      g[i] = 0.0;
    } else if (form == LossForm::kCategorical) {
      g[i] = -y[i] / pi;
    } else {
      g[i] = -y[i] / pi + (1.0 - y[i]) / (1.0 - pi);
    }
  }
}

double ColumnLoss(LossKind kind, LossForm form, std::span<const double> p,
                  std::span<const double> y) {
  return kind == LossKind::kAmbiguous ? KlLoss(y, p) : CrossEntropyLoss(p, y, form);
}

GradientResult Backward(const Network& net, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& targets, LossKind kind, LossForm form,
                        std::size_t first_trainable) {
  Require(inputs.cols() > 0, "gradients: batch is empty");
  Require(inputs.cols() == targets.cols(), "gradients: inputs and targets disagree on batch size");
  Require(static_cast<std::size_t>(targets.rows()) == net.output_dim(),
          "gradients: target width does not match network output");
  const Trace t = RunForward(net, inputs, true);
  const auto& spec = net.spec();
  const auto& layers = net.layers();
  const Eigen::Index k = targets.rows();
  const Eigen::Index m = inputs.cols();
  const double inv_m = 1.0 / static_cast<double>(m);

  GradientResult out;
  out.grads.resize(layers.size());

  Eigen::MatrixXd dlogits(k, m);
  std::vector<double> g(static_cast<std::size_t>(k));
  double loss_sum = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    const double* p = t.probs.col(c).data();
    const double* y = targets.col(c).data();
    LossGradWrtProbs(kind, form, p, y, k, g.data());
    double dot = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) dot += g[i] * p[i];
    for (Eigen::Index i = 0; i < k; ++i) dlogits(i, c) = p[i] * (g[i] - dot) * inv_m;
    loss_sum += ColumnLoss(kind, form, {p, static_cast<std::size_t>(k)},
                           {y, static_cast<std::size_t>(k)});
  }
  out.loss = loss_sum * inv_m;

  const std::size_t num_hidden = spec.hidden_widths.size();
  const std::size_t last = layers.size() - 1;
  const Eigen::MatrixXd& top = num_hidden == 0 ? inputs : t.hidden.back();
  if (last >= first_trainable) {
    out.grads[last].weights = dlogits * top.transpose();
    out.grads[last].biases = dlogits.rowwise().sum();
  }
  if (num_hidden == 0 || first_trainable > num_hidden - 1) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (out.grads[l].weights.size() == 0) {
        out.grads[l].weights = Eigen::MatrixXd::Zero(layers[l].weights.rows(),
                                                      layers[l].weights.cols());
        out.grads[l].biases = Eigen::VectorXd::Zero(layers[l].biases.size());
      }
    }
    return out;
  }

  std::vector<Eigen::MatrixXd> dh(num_hidden);
  dh[num_hidden - 1] = layers[last].weights.transpose() * dlogits;
  for (std::size_t l = num_hidden; l-- > first_trainable;) {
    // dh[l] is complete here: all later layers have already contributed.
    for (const auto& [from, to] : spec.residual_pairs) {
      if (to == l) {
        if (dh[from].size() == 0) dh[from] = Eigen::MatrixXd::Zero(dh[l].rows(), dh[l].cols());
        dh[from] += dh[l];
      }
    }
    Eigen::MatrixXd dz;
    if (spec.activations[l] == Activation::kRectifier) {
      dz = (t.act[l].array() > 0.0).select(dh[l], 0.0);
    } else {
      dz = (dh[l].array() * (1.0 - t.act[l].array().square())).matrix();
    }
    const Eigen::MatrixXd& below = l == 0 ? inputs : t.hidden[l - 1];
    out.grads[l].weights = dz * below.transpose();
    out.grads[l].biases = dz.rowwise().sum();
    if (l > first_trainable) {
      Eigen::MatrixXd down = layers[l].weights.transpose() * dz;
      if (dh[l - 1].size() == 0) {
        dh[l - 1] = std::move(down);
      } else {
        dh[l - 1] += down;
      }
    }
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (out.grads[l].weights.size() == 0) {
      out.grads[l].weights =
          Eigen::MatrixXd::Zero(layers[l].weights.rows(), layers[l].weights.cols());
      out.grads[l].biases = Eigen::VectorXd::Zero(layers[l].biases.size());
    }
  }
  return out;
}

void GatherColumns(const Eigen::MatrixXd& src, std::span<const std::size_t> cols,
                   Eigen::MatrixXd& dst) {
  dst.resize(src.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    dst.col(static_cast<Eigen::Index>(i)) = src.col(static_cast<Eigen::Index>(cols[i]));
  }
}

}  // namespace

const char* ActivationName(Activation a) {
  return a == Activation::kRectifier ? "relu" : "tanh";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu" || name == "rectifier") return Activation::kRectifier;
  if (name == "tanh" || name == "hyperbolic-tangent") return Activation::kHyperbolicTangent;
  Fail(ErrorCode::kInvalidArgument, "unknown activation '" + name + "'");
}

void ArchitectureSpec::Validate() const {
  Require(IsIdentifier(name), "architecture name '" + name +
                                  "' must be a nonempty identifier ([A-Za-z0-9_.-])");
  Require(activations.size() == hidden_widths.size(),
          "architecture '" + name + "': need one activation per hidden layer");
  for (std::size_t w : hidden_widths) {
    Require(w >= 1, "architecture '" + name + "': hidden widths must be positive");
  }
  for (const auto& [from, to] : residual_pairs) {
    Require(from < to && to < hidden_widths.size(),
            "architecture '" + name + "': residual pair (" + std::to_string(from) + ", " +
                std::to_string(to) + ") out of range or not ascending");
    Require(hidden_widths[from] == hidden_widths[to],
            "architecture '" + name + "': residual pair joins layers of unequal width");
  }
}

bool operator==(const ArchitectureSpec& a, const ArchitectureSpec& b) {
  return a.name == b.name && a.hidden_widths == b.hidden_widths &&
         a.activations == b.activations && a.residual_pairs == b.residual_pairs;
}

Network::Network(ArchitectureSpec spec, std::size_t input_dim, std::size_t output_dim,
                 std::vector<Layer> layers)
    : spec_(std::move(spec)),
      input_dim_(input_dim),
      output_dim_(output_dim),
      layers_(std::move(layers)) {
  spec_.Validate();
  Require(input_dim_ >= 1 && output_dim_ >= 1, "network dimensions must be positive");
  Require(layers_.size() == spec_.hidden_widths.size() + 1,
          "network '" + spec_.name + "': layer count does not match architecture");
  std::size_t fan_in = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::size_t fan_out =
        l < spec_.hidden_widths.size() ? spec_.hidden_widths[l] : output_dim_;
    Require(static_cast<std::size_t>(layers_[l].weights.rows()) == fan_out &&
                static_cast<std::size_t>(layers_[l].weights.cols()) == fan_in &&
                static_cast<std::size_t>(layers_[l].biases.size()) == fan_out,
            "network '" + spec_.name + "': layer " + std::to_string(l) + " has wrong shape");
    fan_in = fan_out;
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    n += static_cast<std::size_t>(layer.weights.size() + layer.biases.size());
  }
  return n;
}

Eigen::MatrixXd Network::ForwardBatch(const Eigen::MatrixXd& inputs) const {
  return RunForward(*this, inputs, true).probs;
}

Eigen::MatrixXd Network::PenultimateBatch(const Eigen::MatrixXd& inputs) const {
  if (spec_.hidden_widths.empty()) {
    Fail(ErrorCode::kUnsupportedArchitecture,
         "network '" + spec_.name + "' has no hidden layer to extract features from");
  }
  return RunForward(*this, inputs, false).hidden.back();
}

bool operator==(const Network& a, const Network& b) {
  if (!(a.spec() == b.spec()) || a.input_dim() != b.input_dim() ||
      a.output_dim() != b.output_dim()) {
    return false;
  }
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    if (a.layers()[l].weights != b.layers()[l].weights ||
        a.layers()[l].biases != b.layers()[l].biases) {
      return false;
    }
  }
  return true;
}

Network InitNetwork(const ArchitectureSpec& spec, std::size_t input_dim,
                    std::size_t output_dim, std::uint64_t seed) {
  spec.Validate();
  Require(input_dim >= 1 && output_dim >= 1, "init_network: dimensions must be positive");
  Rng rng(seed);
  std::vector<Layer> layers;
  std::size_t fan_in = input_dim;
  for (std::size_t l = 0; l <= spec.hidden_widths.size(); ++l) {
    const std::size_t fan_out = l < spec.hidden_widths.size() ? spec.hidden_widths[l] : output_dim;
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Layer layer;
    layer.weights.resize(static_cast<Eigen::Index>(fan_out), static_cast<Eigen::Index>(fan_in));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = rng.Uniform(-a, a);
      }
    }
    layer.biases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fan_out));
    layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return Network(spec, input_dim, output_dim, std::move(layers));
}

std::vector<double> Forward(const Network& network, std::span<const double> features) {
  const Eigen::MatrixXd probs = network.ForwardBatch(ToColumn(features));
  return {probs.data(), probs.data() + probs.size()};
}

int Argmax(std::span<const double> values) {
  Require(!values.empty(), "argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

Prediction Predict(const Network& network, std::span<const double> features) {
  Prediction p;
  p.probabilities = Forward(network, features);
  p.label = Argmax(p.probabilities);
  return p;
}

std::vector<int> PredictBatch(const Network& network, const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd probs = network.ForwardBatch(inputs);
  std::vector<int> out(static_cast<std::size_t>(probs.cols()));
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    out[static_cast<std::size_t>(c)] =
        Argmax({probs.col(c).data(), static_cast<std::size_t>(probs.rows())});
  }
  return out;
}

std::vector<double> ExtractFeatures(const Network& network,
                                    std::span<const double> features) {
  const Eigen::MatrixXd h = network.PenultimateBatch(ToColumn(features));
  return {h.data(), h.data() + h.size()};
}

double CrossEntropyLoss(std::span<const double> pred, std::span<const double> target,
                        LossForm form) {
  RequireSameShape(pred, target, "cross_entropy_loss");
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred[i], kLogClamp, 1.0 - kLogClamp);
    loss -= target[i] * std::log(p);
    if (form == LossForm::kSummedBinary) loss -= (1.0 - target[i]) * std::log(1.0 - p);
  }
  return loss;
}

double KlLoss(std::span<const double> target, std::span<const double> pred) {
  RequireSameShape(target, pred, "kl_loss");
  double loss = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0.0) continue;
    loss += target[i] * std::log(target[i] / std::max(pred[i], kLogClamp));
  }
  return std::max(loss, 0.0);
}

GradientResult Gradients(const Network& network, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets, LossKind kind, LossForm form) {
  return Backward(network, inputs, targets, kind, form, 0);
}

double MeanLoss(const Network& network, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets, LossKind kind, LossForm form) {
  Require(inputs.cols() > 0 && inputs.cols() == targets.cols(),
          "mean_loss: inputs and targets disagree on batch size");
  const Eigen::MatrixXd probs = network.ForwardBatch(inputs);
  Require(probs.rows() == targets.rows(), "mean_loss: target width does not match output");
  const auto k = static_cast<std::size_t>(probs.rows());
  double sum = 0.0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    sum += ColumnLoss(kind, form, {probs.col(c).data(), k}, {targets.col(c).data(), k});
  }
  return sum / static_cast<double>(probs.cols());
}

void TrainConfig::Validate() const {
  Require(batch_size >= 1, "train config: batch_size must be >= 1");
  Require(lr_start > 0.0 && std::isfinite(lr_start), "train config: lr_start must be positive");
  Require(lr_end > 0.0 && lr_end <= lr_start, "train config: need 0 < lr_end <= lr_start");
  Require(weight_decay >= 0.0 && std::isfinite(weight_decay),
          "train config: weight_decay must be nonnegative");
  Require(convergence_tolerance >= 0.0, "train config: convergence_tolerance must be >= 0");
}

double TrainConfig::LearningRate(std::size_t epoch) const {
  if (epochs <= 1) return lr_start;
  const double frac = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
  return lr_start * std::pow(lr_end / lr_start, frac);
}

TrainResult Train(Network network, const TrainingData& data, const TrainConfig& config) {
  config.Validate();
  Require(data.size() > 0, "train: training data is empty");
  Require(data.inputs.cols() == data.targets.cols(),
          "train: inputs and targets disagree on example count");
  Require(static_cast<std::size_t>(data.inputs.rows()) == network.input_dim() &&
              static_cast<std::size_t>(data.targets.rows()) == network.output_dim(),
          "train: data shape does not match network");

  TrainResult result{std::move(network), {}};
  auto& layers = result.network.mutable_layers();
  const std::size_t first_trainable = config.frozen_prefix_layers;
  if (config.epochs == 0 || first_trainable >= layers.size()) return result;

  std::vector<Layer> m1(layers.size()), m2(layers.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    m1[l].weights = m2[l].weights = Eigen::MatrixXd::Zero(layers[l].weights.rows(),
                                                          layers[l].weights.cols());
    m1[l].biases = m2[l].biases = Eigen::VectorXd::Zero(layers[l].biases.size());
  }

  Rng rng(config.seed);
  const std::size_t n = data.size();
  Eigen::MatrixXd batch_x, batch_y;
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.LearningRate(epoch);
    const std::vector<std::size_t> order = rng.Permutation(n);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, n - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      GatherColumns(data.inputs, idx, batch_x);
      GatherColumns(data.targets, idx, batch_y);
      const GradientResult g =
          Backward(result.network, batch_x, batch_y, config.loss, config.loss_form, first_trainable);
      loss_sum += g.loss * static_cast<double>(len);

      ++step;
      const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      const auto update = [&](auto& param, auto& mom1, auto& mom2, const auto& grad) {
        mom1 = kAdamBeta1 * mom1 + (1.0 - kAdamBeta1) * grad;
        mom2 = kAdamBeta2 * mom2 + (1.0 - kAdamBeta2) * grad.cwiseProduct(grad);
        param *= 1.0 - lr * config.weight_decay;
        param.array() -= lr * (mom1.array() / c1) /
                         ((mom2.array() / c2).sqrt() + kAdamEpsilon);
      };
      for (std::size_t l = first_trainable; l < layers.size(); ++l) {
        update(layers[l].weights, m1[l].weights, m2[l].weights, g.grads[l].weights);
        update(layers[l].biases, m1[l].biases, m2[l].biases, g.grads[l].biases);
      }
    }
    result.history.push_back(loss_sum / static_cast<double>(n));
    if (config.convergence_tolerance > 0.0 && result.history.size() >= 2) {
      const double change = std::abs(result.history.back() - result.history[result.history.size() - 2]);
      if (change < config.convergence_tolerance) break;
    }
  }
  return result;
}

std::string SerializeNetwork(const Network& network) {
  const auto& spec = network.spec();
  std::ostringstream out;
  out << "mcil-network 1\n";
  out << "name " << spec.name << "\n";
  out << "input_dim " << network.input_dim() << "\n";
  out << "output_dim " << network.output_dim() << "\n";
  out << "hidden " << spec.hidden_widths.size();
  for (std::size_t w : spec.hidden_widths) out << ' ' << w;
  out << "\nactivations " << spec.activations.size();
  for (Activation a : spec.activations) out << ' ' << ActivationName(a);
  out << "\nresidual " << spec.residual_pairs.size();
  for (const auto& [from, to] : spec.residual_pairs) out << ' ' << from << ' ' << to;
  out << "\n";
  for (std::size_t l = 0; l < network.layers().size(); ++l) {
    const Layer& layer = network.layers()[l];
    out << "layer " << l << ' ' << layer.weights.rows() << ' ' << layer.weights.cols() << "\n";
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        if (c) out << ' ';
        out << text::FormatDouble(layer.weights(r, c), 17);
      }
      out << "\n";
    }
    for (Eigen::Index r = 0; r < layer.biases.size(); ++r) {
      if (r) out << ' ';
      out << text::FormatDouble(layer.biases(r), 17);
    }
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

Network DeserializeNetwork(const std::string& text_in) {
  std::istringstream in(text_in);
  std::string word;
  const auto expect = [&](const char* key) {
    if (!(in >> word) || word != key) {
      Fail(ErrorCode::kParse, std::string("network file: expected '") + key + "'");
    }
  };
  const auto read_size = [&]() {
    long long v = -1;
    if (!(in >> v) || v < 0) Fail(ErrorCode::kParse, "network file: expected a count");
    return static_cast<std::size_t>(v);
  };
  const auto read_double = [&]() {
    if (!(in >> word)) Fail(ErrorCode::kParse, "network file: truncated parameters");
    auto v = text::ParseDouble(word);
    if (!v) Fail(ErrorCode::kParse, "network file: bad number '" + word + "'");
    return *v;
  };

  expect("mcil-network");
  if (read_size() != 1) Fail(ErrorCode::kParse, "network file: unsupported version");
  ArchitectureSpec spec;
  expect("name");
  in >> spec.name;
  expect("input_dim");
  const std::size_t input_dim = read_size();
  expect("output_dim");
  const std::size_t output_dim = read_size();
  expect("hidden");
  spec.hidden_widths.resize(read_size());
  for (auto& w : spec.hidden_widths) w = read_size();
  expect("activations");
  spec.activations.resize(read_size());
  for (auto& a : spec.activations) {
    in >> word;
    a = ParseActivation(word);
  }
  expect("residual");
  spec.residual_pairs.resize(read_size());
  for (auto& [from, to] : spec.residual_pairs) {
    from = read_size();
    to = read_size();
  }
  std::vector<Layer> layers(spec.hidden_widths.size() + 1);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    expect("layer");
    if (read_size() != l) Fail(ErrorCode::kParse, "network file: layers out of order");
    const std::size_t rows = read_size();
    const std::size_t cols = read_size();
    layers[l].weights.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < layers[l].weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layers[l].weights.cols(); ++c) {
        layers[l].weights(r, c) = read_double();
      }
    }
    layers[l].biases.resize(static_cast<Eigen::Index>(rows));
    for (Eigen::Index r = 0; r < layers[l].biases.size(); ++r) layers[l].biases(r) = read_double();
  }
  expect("end");
  try {
    return Network(std::move(spec), input_dim, output_dim, std::move(layers));
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, std::string("network file: ") + e.what());
  }
}

void SaveNetwork(const Network& network, const std::string& path) {
  text::WriteFile(path, SerializeNetwork(network));
}

Network LoadNetwork(const std::string& path) {
  return DeserializeNetwork(text::ReadFile(path));
}

}  // namespace mcil::nn
