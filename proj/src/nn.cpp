#include "slice/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slice {
namespace {

std::size_t layer_span(const MlpSpec& spec, std::size_t layer) {
  const std::size_t rows = static_cast<std::size_t>(spec.layer_sizes[layer + 1]);
  const std::size_t cols = static_cast<std::size_t>(spec.layer_sizes[layer]);
  return rows * (cols + 1);
}

}  // namespace

std::size_t MlpSpec::parameter_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    total += layer_span(*this, l);
  }
  return total;
}

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("network needs at least input and output layers");
  }
  for (int n : layer_sizes) {
    if (n < 1) {
      throw std::invalid_argument("layer width must be >= 1, got " +
                                  std::to_string(n));
    }
  }
}

std::size_t weight_offset(const MlpSpec& spec, std::size_t layer) {
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer; ++l) {
    offset += layer_span(spec, l);
  }
  return offset;
}

std::size_t bias_offset(const MlpSpec& spec, std::size_t layer) {
  const std::size_t rows = static_cast<std::size_t>(spec.layer_sizes[layer + 1]);
  const std::size_t cols = static_cast<std::size_t>(spec.layer_sizes[layer]);
  return weight_offset(spec, layer) + rows * cols;
}

ParameterSet init_params(const MlpSpec& spec, SeededStream& stream) {
  spec.validate();
  ParameterSet params;
  params.values.assign(spec.parameter_count(), 0.0);
  const std::size_t last = spec.affine_count() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const std::size_t rows = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(spec.layer_sizes[l]);
    const double bound =
        l == last ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(cols));
    double* w = params.values.data() + weight_offset(spec, l);
    for (std::size_t i = 0; i < rows * cols; ++i) {
      w[i] = stream.uniform(-bound, bound);
    }
    // Biases stay at exactly zero.
  }
  return params;
}

void forward_cached(const ParameterSet& params, const MlpSpec& spec,
                    const std::vector<double>& input, ForwardCache& cache) {
  if (input.size() != static_cast<std::size_t>(spec.input_size())) {
    throw std::invalid_argument("input length " + std::to_string(input.size()) +
                                " does not match network input width " +
                                std::to_string(spec.input_size()));
  }
  if (params.values.size() != spec.parameter_count()) {
    throw std::invalid_argument("parameter block does not match network spec");
  }
  const std::size_t layers = spec.affine_count();
  cache.activations.resize(layers + 1);
  cache.activations[0] = input;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t rows = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(spec.layer_sizes[l]);
    const double* w = params.values.data() + weight_offset(spec, l);
    const double* b = params.values.data() + bias_offset(spec, l);
    const std::vector<double>& in = cache.activations[l];
    std::vector<double>& out = cache.activations[l + 1];
    out.resize(rows);
    const bool final_layer = l + 1 == layers;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = w + r * cols;
      double z = b[r];
      for (std::size_t c = 0; c < cols; ++c) {
        z += row[c] * in[c];
      }
      if (!final_layer) {
        out[r] = z > 0.0 ? z : 0.0;
      } else if (spec.output_activation == OutputActivation::kTanh) {
        out[r] = std::tanh(z);
      } else {
        out[r] = z;
      }
    }
  }
}

std::vector<double> forward(const ParameterSet& params, const MlpSpec& spec,
                            const std::vector<double>& input) {
  ForwardCache cache;
  forward_cached(params, spec, input, cache);
  return cache.activations.back();
}

void zero_gradients(const MlpSpec& spec, Gradients& out) {
  out.params.assign(spec.parameter_count(), 0.0);
}

void backward(const ParameterSet& params, const MlpSpec& spec,
              const ForwardCache& cache, const std::vector<double>& upstream,
              Gradients& out, bool want_param_grads) {
  const std::size_t layers = spec.affine_count();
  if (cache.activations.size() != layers + 1) {
    throw std::invalid_argument("forward cache does not match network spec");
  }
  if (upstream.size() != static_cast<std::size_t>(spec.output_size())) {
    throw std::invalid_argument("upstream gradient length " +
                                std::to_string(upstream.size()) +
                                " does not match network output width " +
                                std::to_string(spec.output_size()));
  }
  if (want_param_grads && out.params.size() != spec.parameter_count()) {
    throw std::invalid_argument(
        "gradient block not initialized; call zero_gradients first");
  }

  // delta holds dL/dz for the layer currently being processed. The output
  // head's activation derivative is applied first, then each step back turns
  // dL/da into dL/dz through the ReLU mask.
  std::vector<double> delta = upstream;
  if (spec.output_activation == OutputActivation::kTanh) {
    const std::vector<double>& a = cache.activations[layers];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] *= 1.0 - a[i] * a[i];
    }
  }
  std::vector<double> prev_grad;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t rows = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    const std::size_t cols = static_cast<std::size_t>(spec.layer_sizes[l]);
    const double* w = params.values.data() + weight_offset(spec, l);
    const std::vector<double>& in = cache.activations[l];
    if (want_param_grads) {
      double* gw = out.params.data() + weight_offset(spec, l);
      double* gb = out.params.data() + bias_offset(spec, l);
      for (std::size_t r = 0; r < rows; ++r) {
        const double d = delta[r];
        double* grow = gw + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
          grow[c] += d * in[c];
        }
        gb[r] += d;
      }
    }
    prev_grad.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = delta[r];
      const double* row = w + r * cols;
      for (std::size_t c = 0; c < cols; ++c) {
        prev_grad[c] += d * row[c];
      }
    }
    if (l > 0) {
      // ReLU derivative from the post-activation value: positive output
      // means the unit was active.
      for (std::size_t c = 0; c < cols; ++c) {
        prev_grad[c] = in[c] > 0.0 ? prev_grad[c] : 0.0;
      }
    }
    delta.swap(prev_grad);
  }
  out.input = std::move(delta);
}

Gradients backward_from_input(const ParameterSet& params, const MlpSpec& spec,
                              const std::vector<double>& input,
                              const std::vector<double>& upstream) {
  ForwardCache cache;
  forward_cached(params, spec, input, cache);
  Gradients grads;
  zero_gradients(spec, grads);
  backward(params, spec, cache, upstream, grads);
  return grads;
}

void optimizer_step(OptimizerState& opt, ParameterSet& params,
                    const std::vector<double>& gradient) {
  const std::size_t n = params.values.size();
  if (gradient.size() != n || opt.m.size() != n || opt.v.size() != n) {
    throw std::invalid_argument(
        "optimizer state, parameters and gradient must share one size");
  }
  opt.step += 1;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gradient[i];
    opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * g;
    opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * g * g;
    const double m_hat = opt.m[i] / bc1;
    const double v_hat = opt.v[i] / bc2;
    params.values[i] -= opt.learning_rate * m_hat / (std::sqrt(v_hat) + opt.epsilon);
  }
}

}  // namespace slice
