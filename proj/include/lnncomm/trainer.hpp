#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lnncomm/network.hpp"
#include "lnncomm/random.hpp"

namespace lnncomm {

enum class SamplingMode {
  UniformRandom,  // draw a sample index uniformly at every step
  ClassCyclic,    // class 1..K of index 1, then class 1..K of index 2, ...
};

struct TrainConfig {
  double lambda = 9.0e-7;      // LASSO weight
  double epsilon1 = 0.001;     // added to o(1-o) in every delta
  std::size_t a1 = 2000;       // mean update steps per training sample
  double eta0 = 0.7;           // step size at t = 0
  std::uint64_t seed = 1;
  SamplingMode sampling = SamplingMode::UniformRandom;
  bool track_test_error = false;

  void validate() const;
};

struct NormBounds {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = 0.01;
  double y_max = 0.99;

  void validate() const;
};

struct TracePoint {
  std::size_t step = 0;
  double train_error = 0.0;
  std::optional<double> test_error;
};

using ErrorTrace = std::vector<TracePoint>;

struct TrainResult {
  NetworkParams params;
  ErrorTrace trace;
  std::size_t steps = 0;
};

/// eta(t) = eta0 * a1 n1 / (a1 n1 + 5 t).
double learning_rate(std::size_t t, std::size_t a1, std::size_t n1, double eta0 = 0.7);

/// One stochastic steepest-descent step on sample (x, y), in place.
///
/// Deltas are computed from the current weights before any of them change:
///   delta^D_j = (o^D_j - y_j)(o^D_j(1 - o^D_j) + eps1)
///   delta^d_j = sum_k delta^{d+1}_k w^d_{jk} (o^d_j(1 - o^d_j) + eps1)
/// then w^{d-1}_{ij} -= eta (delta^d_j o^{d-1}_i + lambda sgn(w^{d-1}_{ij}))
/// and theta^{d-1}_j -= eta delta^d_j, with sgn(0) = 0.
void backprop_update(NetworkParams& params, const VectorXd& x, const VectorXd& y, double eta, double lambda,
                     double epsilon1);

/// Visit order used by ClassCyclic sampling for `steps` steps.
std::vector<std::size_t> class_cyclic_order(const std::vector<std::size_t>& classes, std::size_t steps);

/// Runs exactly a1 * n1 updates. The trace holds the state at step 0 and
/// after every n1 steps.
TrainResult train(const NetworkParams& initial, const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& config);

/// Weights and biases i.i.d. N(0, variance).
NetworkParams init_params(const LayerTopology& topology, std::uint64_t seed, double variance = 0.5);

/// Normalizes `raw` per dimension onto the bounds and attaches the NormInfo.
Dataset normalize_dataset(const Dataset& raw, const NormBounds& bounds);

/// Applies an existing normalization (e.g. the training set's) to new data.
Dataset apply_normalization(const Dataset& raw, const NormInfo& norm);

/// Reconstructs raw samples from a normalized dataset.
Dataset denormalize_dataset(const Dataset& normalized);

}  // namespace lnncomm
