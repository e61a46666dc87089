#pragma once

#include <cstddef>
#include <vector>

#include "slice/rng.hpp"

namespace slice {

// Dense multilayer perceptron machinery for the actor and critic networks.
// Parameters live in one flat double array so optimizers, soft updates and
// checkpoints can treat a network as a single vector.

enum class OutputActivation { kTanh, kIdentity };

// Architecture of a fully-connected network. layer_sizes lists the width of
// every layer including input and output, e.g. {11, 128, 64, 6}. Hidden
// layers use ReLU; the output head is tanh or identity.
struct MlpSpec {
  std::vector<int> layer_sizes;
  OutputActivation output_activation = OutputActivation::kIdentity;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }

  // Number of affine (weight + bias) layers.
  std::size_t affine_count() const { return layer_sizes.size() - 1; }

  std::size_t parameter_count() const;

  // Throws std::invalid_argument on fewer than two layers or non-positive
  // widths.
  void validate() const;
};

// Flat parameter block. Layout, in order, for each affine layer l:
// weight matrix W_l row-major (layer_sizes[l+1] rows by layer_sizes[l]
// columns) followed by the bias vector b_l (layer_sizes[l+1] entries).
struct ParameterSet {
  std::vector<double> values;
};

// Offset of layer l's weight block / bias block inside ParameterSet::values.
std::size_t weight_offset(const MlpSpec& spec, std::size_t layer);
std::size_t bias_offset(const MlpSpec& spec, std::size_t layer);

// Random initialization: weights of every non-final layer are drawn from
// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), final-layer weights from
// Uniform(-3e-3, 3e-3) so the initial policy/value head stays near zero, and
// all biases start at exactly 0. Draw order is layer by layer, row-major,
// so the result is a pure function of the stream state.
ParameterSet init_params(const MlpSpec& spec, SeededStream& stream);

// Intermediate activations of one forward pass, kept so the backward sweep
// can be run without recomputation. activations[0] is the input copy and
// activations[affine_count()] the network output. ReLU and tanh derivatives
// are both recoverable from post-activation values alone, so pre-activation
// vectors are not stored.
struct ForwardCache {
  std::vector<std::vector<double>> activations;

  const std::vector<double>& output() const { return activations.back(); }
};

// Forward pass writing all intermediate activations into `cache` (buffers are
// reused across calls). Throws std::invalid_argument on input length
// mismatch.
void forward_cached(const ParameterSet& params, const MlpSpec& spec,
                    const std::vector<double>& input, ForwardCache& cache);

// Convenience forward pass returning only the output vector.
std::vector<double> forward(const ParameterSet& params, const MlpSpec& spec,
                            const std::vector<double>& input);

// Gradients produced by one backward sweep. `params` shares the ParameterSet
// layout; `input` is the gradient with respect to the network input (the
// chained critic-to-actor path uses it).
struct Gradients {
  std::vector<double> params;
  std::vector<double> input;
};

// Exact reverse-mode sweep for the forward map recorded in `cache`.
// `upstream` is dL/d(output). Parameter gradients are ACCUMULATED into
// out.params (call zero_gradients first for a fresh sweep) so minibatch
// gradients can be summed in place; out.input is overwritten. Setting
// want_param_grads = false skips the weight/bias accumulation and computes
// only the input gradient. Throws std::invalid_argument on shape mismatch.
void backward(const ParameterSet& params, const MlpSpec& spec,
              const ForwardCache& cache, const std::vector<double>& upstream,
              Gradients& out, bool want_param_grads = true);

// Resizes (if needed) and zero-fills the parameter-gradient block.
void zero_gradients(const MlpSpec& spec, Gradients& out);

// One-shot convenience wrapper: forward then backward from `upstream`.
Gradients backward_from_input(const ParameterSet& params, const MlpSpec& spec,
                              const std::vector<double>& input,
                              const std::vector<double>& upstream);

// Adam accumulator state for one ParameterSet.
struct OptimizerState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<double> m;
  std::vector<double> v;

  OptimizerState() = default;
  OptimizerState(std::size_t parameter_count, double lr)
      : learning_rate(lr), m(parameter_count, 0.0), v(parameter_count, 0.0) {}
};

// Standard Adam update with bias correction; increments opt.step. Throws
// std::invalid_argument when gradient or moment sizes disagree with params.
void optimizer_step(OptimizerState& opt, ParameterSet& params,
                    const std::vector<double>& gradient);

}  // namespace slice
