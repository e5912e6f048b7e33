#pragma once

#include <cstddef>
#include <vector>

#include "lnncomm/datagen.hpp"
#include "lnncomm/network.hpp"
#include "lnncomm/trainer.hpp"

namespace lnncomm {

struct LinearModel {
  MatrixXd coefficients;  // M x N
  VectorXd intercept;     // N
  std::size_t window = 0;
};

/// Ordinary least squares with intercept. Rank-deficient designs get the
/// minimum-norm solution (complete orthogonal decomposition).
LinearModel fit_linear(const Dataset& data);

VectorXd predict_linear(const LinearModel& model, const VectorXd& x);
MatrixXd predict_linear(const LinearModel& model, const MatrixXd& inputs);

/// (1/n) sum_n ||Y_n - y_hat_n||^2, the same contract as training_error.
double linear_error(const LinearModel& model, const Dataset& data);

struct ChronologicalSplit {
  Dataset train;
  Dataset test;
};

/// First floor(train_fraction * n) samples train, the rest test. No shuffling.
ChronologicalSplit split_chronological(const Dataset& data, double train_fraction);

struct WindowResult {
  std::size_t window = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  double train_error = 0.0;
  double generalization_error = 0.0;
};

struct SweepConfig {
  double train_fraction = 0.8;
  bool normalize = true;  // normalize like the network pipeline before fitting
  NormBounds bounds{};
};

std::vector<WindowResult> sweep_window(const TimeSeries& series, const std::vector<std::size_t>& windows,
                                       const SweepConfig& config = {});

/// Fit at a single window with the same split/normalization as the sweep.
LinearModel fit_window(const TimeSeries& series, std::size_t window, const SweepConfig& config = {});

}  // namespace lnncomm
