// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/learning/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace awse::learning {

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

Mlp make_mlp(const std::vector<int>& layer_sizes, OutputActivation output, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("make_mlp: need at least input and output sizes");
  for (int n : layer_sizes)
    if (n <= 0) throw std::invalid_argument("make_mlp: layer sizes must be positive");
  Mlp m;
  m.layer_sizes = layer_sizes;
  m.output = output;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const bool last = l + 2 == layer_sizes.size();
    const double stddev = std::sqrt((last ? 1.0 : 2.0) / fan_in);
    Mat w(layer_sizes[l + 1], fan_in);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = stddev * normal(rng);
    m.weights.push_back(std::move(w));
    m.biases.push_back(Vec::Zero(layer_sizes[l + 1]));
  }
  m.input_shift = Vec::Zero(layer_sizes.front());
  m.input_scale = Vec::Ones(layer_sizes.front());
  return m;
}

MlpGradients MlpGradients::zeros_like(const Mlp& model) {
  MlpGradients g;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    g.weights.push_back(Mat::Zero(model.weights[l].rows(), model.weights[l].cols()));
    g.biases.push_back(Vec::Zero(model.biases[l].size()));
  }
  return g;
}

void MlpGradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

MlpGradients& MlpGradients::operator+=(const MlpGradients& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
  return *this;
}

Mat forward(const Mlp& model, const Mat& input, MlpTape* tape) {
  if (input.rows() != model.input_dim())
    throw std::invalid_argument("model_forward: input has " + std::to_string(input.rows()) +
                                " rows, model expects " + std::to_string(model.input_dim()));
  Mat act = (input.colwise() - model.input_shift).array().colwise() * model.input_scale.array();
  if (tape) {
    tape->activations.clear();
    tape->activations.push_back(act);
  }
  const std::size_t layers = model.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Mat pre = model.weights[l] * act;
    pre.colwise() += model.biases[l];
    if (l + 1 < layers) {
      act = pre.cwiseMax(0.0);
    } else if (model.output == OutputActivation::Sigmoid) {
      act = (1.0 + (-pre.array()).exp()).inverse().matrix();
    } else {
      act = std::move(pre);
    }
    if (tape) tape->activations.push_back(act);
  }
  return act;
}

void backward(const Mlp& model, const MlpTape& tape, const Mat& output_grad, MlpGradients& grads) {
  const std::size_t layers = model.weights.size();
  if (tape.activations.size() != layers + 1) throw std::invalid_argument("backward: tape does not match model");
  Mat delta;
  const Mat& out = tape.activations.back();
  if (model.output == OutputActivation::Sigmoid)
    delta = output_grad.cwiseProduct((out.array() * (1.0 - out.array())).matrix());
  else
    delta = output_grad;
  for (std::size_t l = layers; l-- > 0;) {
    const Mat& in = tape.activations[l];
    grads.weights[l].noalias() += delta * in.transpose();
    grads.biases[l] += delta.rowwise().sum();
    if (l == 0) break;
    Mat upstream = model.weights[l].transpose() * delta;
    // Rectifier derivative, taken as 0 at the kink.
    delta = upstream.cwiseProduct((in.array() > 0.0).cast<double>().matrix());
  }
}

void sgd_step(Mlp& model, const MlpGradients& grads, double rate) {
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    model.weights[l] -= rate * grads.weights[l];
    model.biases[l] -= rate * grads.biases[l];
  }
}

ModelGradients ModelGradients::zeros_like(const ModelSet& models) {
  ModelGradients g;
  for (std::size_t j = 0; j < 4; ++j) g.masks[j] = MlpGradients::zeros_like(models.masks[j]);
  g.gate = MlpGradients::zeros_like(models.gate);
  return g;
}

void ModelGradients::set_zero() {
  for (auto& m : masks) m.set_zero();
  gate.set_zero();
}

}  // namespace awse::learning
