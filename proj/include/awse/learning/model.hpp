// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AWSE_LEARNING_MODEL_HPP
#define AWSE_LEARNING_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "awse/signal.hpp"

namespace awse::learning {

using Mat = Matrix<double>;
using Vec = Vector<double>;

enum class OutputActivation { Sigmoid, Linear };

/// Feedforward network: rectifier hidden layers, sigmoid or linear output.
/// Inputs are standardized per feature as (x - input_shift) .* input_scale
/// before the first layer. Operates on batches, one sample per column.
struct Mlp {
  std::vector<int> layer_sizes;  // input, hidden..., output
  std::vector<Mat> weights;      // weights[l] is sizes[l+1] x sizes[l]
  std::vector<Vec> biases;
  OutputActivation output = OutputActivation::Sigmoid;
  Vec input_shift;  // input_dim entries
  Vec input_scale;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;
};

/// He-style initialization from `seed`, zero biases.
Mlp make_mlp(const std::vector<int>& layer_sizes, OutputActivation output, std::uint64_t seed);

/// Activations recorded by a forward pass; activations[0] is the standardized
/// input and activations.back() the output.
struct MlpTape {
  std::vector<Mat> activations;
};

struct MlpGradients {
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  static MlpGradients zeros_like(const Mlp& model);
  void set_zero();
  MlpGradients& operator+=(const MlpGradients& other);
};

Mat forward(const Mlp& model, const Mat& input, MlpTape* tape = nullptr);

/// Accumulates parameter gradients for d(loss)/d(output) = `output_grad`.
void backward(const Mlp& model, const MlpTape& tape, const Mat& output_grad, MlpGradients& grads);

/// Plain gradient step: theta -= rate * grad.
void sgd_step(Mlp& model, const MlpGradients& grads, double rate);

/// Mask estimator per window kind plus the window-decision gate.
struct ModelSet {
  std::array<Mlp, 4> masks;
  Mlp gate;
};

struct ModelGradients {
  std::array<MlpGradients, 4> masks;
  MlpGradients gate;

  static ModelGradients zeros_like(const ModelSet& models);
  void set_zero();
};

}  // namespace awse::learning

#endif  // AWSE_LEARNING_MODEL_HPP
