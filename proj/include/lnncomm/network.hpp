#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lnncomm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Unit counts per layer, input layer first. Depth is `sizes.size()`.
struct LayerTopology {
  std::vector<std::size_t> sizes;

  std::size_t depth() const noexcept { return sizes.size(); }
  std::size_t input_dim() const { return sizes.front(); }
  std::size_t output_dim() const { return sizes.back(); }
  /// Units in layer `d`, 1-based depth as in the model description.
  std::size_t units(std::size_t d) const { return sizes.at(d - 1); }

  /// Throws Error(Config) unless depth >= 2 and every layer is non-empty.
  void validate() const;

  bool operator==(const LayerTopology&) const = default;
};

/// Weights and biases of a layered sigmoid network.
///
/// `weights[d-1]` has shape l_d x l_{d+1}: entry (i, j) connects unit i of
/// layer d to unit j of layer d+1. `biases[d-1]` has length l_{d+1} and is
/// applied to the units of layer d+1.
struct NetworkParams {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;

  NetworkParams() = default;
  /// Zero-initialised parameters for `topology`.
  explicit NetworkParams(const LayerTopology& topology);

  LayerTopology topology() const;
  std::size_t depth() const noexcept { return weights.size() + 1; }
  std::size_t input_dim() const { return static_cast<std::size_t>(weights.front().rows()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(weights.back().cols()); }
  std::size_t parameter_count() const;

  /// Checks shape consistency between consecutive layers and finiteness.
  void validate() const;

  double l1_weight_norm() const;
};

/// Per-layer outputs o^1..o^D of one forward pass; `layers[0]` is the input.
struct ActivationRecord {
  std::vector<VectorXd> layers;

  const VectorXd& prediction() const { return layers.back(); }
  const VectorXd& layer(std::size_t d) const { return layers.at(d - 1); }
};

/// Affine map of each input and output dimension from its observed raw range
/// onto the configured bounds. Degenerate (constant) dimensions map to the
/// midpoint of the bounds and invert back to their constant raw value.
struct NormInfo {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = 0.01;
  double y_max = 0.99;
  VectorXd input_lo, input_hi;
  VectorXd output_lo, output_hi;

  MatrixXd apply_inputs(const MatrixXd& raw) const;
  MatrixXd apply_outputs(const MatrixXd& raw) const;
  MatrixXd invert_inputs(const MatrixXd& normalized) const;
  MatrixXd invert_outputs(const MatrixXd& normalized) const;
};

/// Samples stored row-wise: row n of `inputs` is X_n, row n of `outputs` is Y_n.
/// `classes`, when non-empty, holds one 0-based class label per sample.
struct Dataset {
  MatrixXd inputs;
  MatrixXd outputs;
  std::vector<std::size_t> classes;
  std::optional<NormInfo> norm;

  std::size_t size() const noexcept { return static_cast<std::size_t>(inputs.rows()); }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(inputs.cols()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(outputs.cols()); }
  bool empty() const noexcept { return size() == 0; }

  /// Throws Error(Data) on row-count mismatches or a wrong-sized label vector.
  void validate() const;
};

/// Logistic function, evaluated through exp of a non-positive argument.
double sigmoid(double x) noexcept;

ActivationRecord forward(const NetworkParams& params, const VectorXd& x);

/// f(x, w): the output-layer activation.
VectorXd predict(const NetworkParams& params, const VectorXd& x);

/// Forward pass over a batch (rows are samples). Element d-1 holds the layer-d
/// outputs for every sample; element 0 is `inputs` itself.
std::vector<MatrixXd> forward_batch(const NetworkParams& params, const MatrixXd& inputs);

/// Propagates layer-`depth` outputs (rows are samples) through layers
/// depth+1..D and returns the output-layer activations.
MatrixXd propagate_from(const NetworkParams& params, std::size_t depth, const MatrixXd& layer_outputs);

/// E(w) = (1/n) sum_n ||Y_n - f(X_n, w)||^2.
double training_error(const NetworkParams& params, const Dataset& data);

/// Held-out estimate of G(w); same formula as training_error on the test set.
double generalization_error(const NetworkParams& params, const Dataset& test);

/// H(w) = (n/2) E(w) + lambda * sum |omega|; biases are not penalised.
double objective(const NetworkParams& params, const Dataset& data, double lambda);

}  // namespace lnncomm
