#include "lnncomm/trainer.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "lnncomm/error.hpp"

namespace lnncomm {

namespace {

double sgn(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_sample(const NetworkParams& params, const VectorXd& x, const VectorXd& y) {
  if (static_cast<std::size_t>(x.size()) != params.input_dim() ||
      static_cast<std::size_t>(y.size()) != params.output_dim())
    throw Error(ErrorKind::Dimension, "sample shape (" + std::to_string(x.size()) + ", " + std::to_string(y.size()) +
                                          ") does not match network (" + std::to_string(params.input_dim()) + ", " +
                                          std::to_string(params.output_dim()) + ")");
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Config, "lambda must be >= 0");
  if (!(epsilon1 >= 0.0)) throw Error(ErrorKind::Config, "epsilon1 must be >= 0");
  if (a1 < 1) throw Error(ErrorKind::Config, "a1 must be >= 1");
  if (!(eta0 > 0.0)) throw Error(ErrorKind::Config, "eta must be > 0");
}

void NormBounds::validate() const {
  if (!(x_min < x_max)) throw Error(ErrorKind::Config, "x_min must be below x_max");
  if (!(y_min < y_max)) throw Error(ErrorKind::Config, "y_min must be below y_max");
}

double learning_rate(std::size_t t, std::size_t a1, std::size_t n1, double eta0) {
  const double total = static_cast<double>(a1) * static_cast<double>(n1);
  return eta0 * total / (total + 5.0 * static_cast<double>(t));
}

void backprop_update(NetworkParams& params, const VectorXd& x, const VectorXd& y, double eta, double lambda,
                     double epsilon1) {
  check_sample(params, x, y);
  const ActivationRecord rec = forward(params, x);
  const std::size_t depth = params.depth();

  // deltas[d-1] belongs to layer d; entries for d >= 2 are filled.
  std::vector<VectorXd> deltas(depth);
  auto slope = [epsilon1](const VectorXd& o) { return (o.array() * (1.0 - o.array()) + epsilon1).matrix(); };

  const VectorXd& out = rec.layers[depth - 1];
  deltas[depth - 1] = ((out - y).array() * slope(out).array()).matrix();
  for (std::size_t d = depth - 1; d >= 2; --d) {
    const VectorXd back = params.weights[d - 1] * deltas[d];
    deltas[d - 1] = (back.array() * slope(rec.layers[d - 1]).array()).matrix();
  }

  for (std::size_t d = depth; d >= 2; --d) {
    MatrixXd& w = params.weights[d - 2];
    const VectorXd& prev = rec.layers[d - 2];
    const VectorXd& delta = deltas[d - 1];
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) -= eta * (delta(j) * prev(i) + lambda * sgn(w(i, j)));
    params.biases[d - 2] -= eta * delta;
  }
}

std::vector<std::size_t> class_cyclic_order(const std::vector<std::size_t>& classes, std::size_t steps) {
  if (classes.empty()) throw Error(ErrorKind::Config, "class-cyclic sampling needs class labels");
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t n = 0; n < classes.size(); ++n) groups[classes[n]].push_back(n);
  std::vector<const std::vector<std::size_t>*> ordered;
  for (const auto& [label, members] : groups) ordered.push_back(&members);

  const std::size_t k = ordered.size();
  std::vector<std::size_t> order(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& members = *ordered[s % k];
    order[s] = members[(s / k) % members.size()];
  }
  return order;
}

TrainResult train(const NetworkParams& initial, const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& config) {
  config.validate();
  initial.validate();
  train_set.validate();
  if (train_set.empty()) throw Error(ErrorKind::Data, "training set is empty");
  if (train_set.input_dim() != initial.input_dim() || train_set.output_dim() != initial.output_dim())
    throw Error(ErrorKind::Dimension, "training set shape does not match the network topology");
  if (test_set && (test_set->input_dim() != initial.input_dim() || test_set->output_dim() != initial.output_dim()))
    throw Error(ErrorKind::Dimension, "test set shape does not match the network topology");

  const std::size_t n1 = train_set.size();
  const std::size_t steps = config.a1 * n1;
  const bool with_test = config.track_test_error && test_set != nullptr && !test_set->empty();

  TrainResult result;
  result.params = initial;
  auto record = [&](std::size_t step) {
    TracePoint p;
    p.step = step;
    p.train_error = training_error(result.params, train_set);
    if (with_test) p.test_error = generalization_error(result.params, *test_set);
    result.trace.push_back(p);
  };

  // The cyclic order repeats with period K * (largest class size), so only
  // one period is materialised.
  std::vector<std::size_t> cyclic;
  std::size_t period = 0;
  if (config.sampling == SamplingMode::ClassCyclic) {
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t c : train_set.classes) ++counts[c];
    std::size_t largest = 0;
    for (const auto& [c, count] : counts) largest = std::max(largest, count);
    period = counts.size() * largest;
    cyclic = class_cyclic_order(train_set.classes, period);
  }

  Rng rng = make_rng(config.seed, 1);
  std::uniform_int_distribution<std::size_t> pick(0, n1 - 1);

  record(0);
  VectorXd x(train_set.input_dim());
  VectorXd y(train_set.output_dim());
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t n = config.sampling == SamplingMode::ClassCyclic ? cyclic[t % period] : pick(rng);
    x = train_set.inputs.row(static_cast<Eigen::Index>(n)).transpose();
    y = train_set.outputs.row(static_cast<Eigen::Index>(n)).transpose();
    backprop_update(result.params, x, y, learning_rate(t, config.a1, n1, config.eta0), config.lambda,
                    config.epsilon1);
    if ((t + 1) % n1 == 0) record(t + 1);
  }
  result.steps = steps;
  if (!result.params.weights.front().allFinite()) throw Error(ErrorKind::Numerical, "training diverged");
  result.params.validate();
  return result;
}

NetworkParams init_params(const LayerTopology& topology, std::uint64_t seed, double variance) {
  NetworkParams params(topology);
  Rng rng = make_rng(seed, 0);
  for (std::size_t d = 0; d < params.weights.size(); ++d) {
    MatrixXd& w = params.weights[d];
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = normal_variance(rng, 0.0, variance);
    for (Eigen::Index j = 0; j < params.biases[d].size(); ++j) params.biases[d](j) = normal_variance(rng, 0.0, variance);
  }
  return params;
}

Dataset normalize_dataset(const Dataset& raw, const NormBounds& bounds) {
  bounds.validate();
  raw.validate();
  if (raw.empty()) throw Error(ErrorKind::Data, "cannot normalize an empty dataset");
  NormInfo norm;
  norm.x_min = bounds.x_min;
  norm.x_max = bounds.x_max;
  norm.y_min = bounds.y_min;
  norm.y_max = bounds.y_max;
  norm.input_lo = raw.inputs.colwise().minCoeff().transpose();
  norm.input_hi = raw.inputs.colwise().maxCoeff().transpose();
  norm.output_lo = raw.outputs.colwise().minCoeff().transpose();
  norm.output_hi = raw.outputs.colwise().maxCoeff().transpose();
  return apply_normalization(raw, norm);
}

Dataset apply_normalization(const Dataset& raw, const NormInfo& norm) {
  raw.validate();
  Dataset out;
  out.inputs = norm.apply_inputs(raw.inputs);
  out.outputs = norm.apply_outputs(raw.outputs);
  out.classes = raw.classes;
  out.norm = norm;
  return out;
}

Dataset denormalize_dataset(const Dataset& normalized) {
  if (!normalized.norm) throw Error(ErrorKind::Data, "dataset carries no normalization info");
  Dataset out;
  out.inputs = normalized.norm->invert_inputs(normalized.inputs);
  out.outputs = normalized.norm->invert_outputs(normalized.outputs);
  out.classes = normalized.classes;
  return out;
}

}  // namespace lnncomm
