#include "lnncomm/network.hpp"

#include <cmath>
#include <string>

#include "lnncomm/error.hpp"

namespace lnncomm {

namespace {

void require_dim(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Dimension, what);
}

double affine(double v, double lo, double hi, double a, double b) {
  if (lo == hi) return 0.5 * (a + b);
  return a + (v - lo) * (b - a) / (hi - lo);
}

double affine_inverse(double v, double lo, double hi, double a, double b) {
  if (lo == hi) return lo;
  return lo + (v - a) * (hi - lo) / (b - a);
}

template <class F>
MatrixXd map_columns(const MatrixXd& m, const VectorXd& lo, const VectorXd& hi, F&& f) {
  require_dim(m.cols() == lo.size(), "normalization: column count " + std::to_string(m.cols()) +
                                         " does not match " + std::to_string(lo.size()) + " stored ranges");
  MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index n = 0; n < m.rows(); ++n) out(n, j) = f(m(n, j), lo(j), hi(j));
  return out;
}

void sigmoid_inplace(MatrixXd& m) {
  m = m.unaryExpr([](double v) { return sigmoid(v); });
}

}  // namespace

void LayerTopology::validate() const {
  if (sizes.size() < 2) throw Error(ErrorKind::Config, "topology needs at least 2 layers");
  for (std::size_t d = 0; d < sizes.size(); ++d)
    if (sizes[d] == 0) throw Error(ErrorKind::Config, "layer " + std::to_string(d + 1) + " has no units");
}

NetworkParams::NetworkParams(const LayerTopology& topology) {
  topology.validate();
  for (std::size_t d = 0; d + 1 < topology.depth(); ++d) {
    weights.push_back(MatrixXd::Zero(topology.sizes[d], topology.sizes[d + 1]));
    biases.push_back(VectorXd::Zero(topology.sizes[d + 1]));
  }
}

LayerTopology NetworkParams::topology() const {
  LayerTopology t;
  if (weights.empty()) return t;
  t.sizes.push_back(static_cast<std::size_t>(weights.front().rows()));
  for (const auto& w : weights) t.sizes.push_back(static_cast<std::size_t>(w.cols()));
  return t;
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t d = 0; d < weights.size(); ++d)
    n += static_cast<std::size_t>(weights[d].size() + biases[d].size());
  return n;
}

void NetworkParams::validate() const {
  if (weights.empty()) throw Error(ErrorKind::Dimension, "network has no weight layers");
  require_dim(weights.size() == biases.size(), "weights and biases have different layer counts");
  for (std::size_t d = 0; d < weights.size(); ++d) {
    require_dim(weights[d].rows() > 0 && weights[d].cols() > 0, "empty weight matrix at depth " + std::to_string(d + 1));
    require_dim(biases[d].size() == weights[d].cols(), "bias length mismatch at depth " + std::to_string(d + 1));
    if (d + 1 < weights.size())
      require_dim(weights[d].cols() == weights[d + 1].rows(),
                  "weight shapes of depths " + std::to_string(d + 1) + " and " + std::to_string(d + 2) + " disagree");
    if (!weights[d].allFinite() || !biases[d].allFinite())
      throw Error(ErrorKind::Numerical, "non-finite parameter at depth " + std::to_string(d + 1));
  }
}

double NetworkParams::l1_weight_norm() const {
  double s = 0.0;
  for (const auto& w : weights) s += w.cwiseAbs().sum();
  return s;
}

MatrixXd NormInfo::apply_inputs(const MatrixXd& raw) const {
  return map_columns(raw, input_lo, input_hi,
                     [&](double v, double lo, double hi) { return affine(v, lo, hi, x_min, x_max); });
}

MatrixXd NormInfo::apply_outputs(const MatrixXd& raw) const {
  return map_columns(raw, output_lo, output_hi,
                     [&](double v, double lo, double hi) { return affine(v, lo, hi, y_min, y_max); });
}

MatrixXd NormInfo::invert_inputs(const MatrixXd& normalized) const {
  return map_columns(normalized, input_lo, input_hi,
                     [&](double v, double lo, double hi) { return affine_inverse(v, lo, hi, x_min, x_max); });
}

MatrixXd NormInfo::invert_outputs(const MatrixXd& normalized) const {
  return map_columns(normalized, output_lo, output_hi,
                     [&](double v, double lo, double hi) { return affine_inverse(v, lo, hi, y_min, y_max); });
}

void Dataset::validate() const {
  if (inputs.rows() != outputs.rows())
    throw Error(ErrorKind::Data, "dataset has " + std::to_string(inputs.rows()) + " inputs but " +
                                     std::to_string(outputs.rows()) + " outputs");
  if (!classes.empty() && classes.size() != size())
    throw Error(ErrorKind::Data, "dataset class labels do not cover every sample");
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

ActivationRecord forward(const NetworkParams& params, const VectorXd& x) {
  require_dim(static_cast<std::size_t>(x.size()) == params.input_dim(),
              "input has " + std::to_string(x.size()) + " entries, network expects " +
                  std::to_string(params.input_dim()));
  ActivationRecord rec;
  rec.layers.reserve(params.depth());
  rec.layers.push_back(x);
  for (std::size_t d = 0; d < params.weights.size(); ++d) {
    VectorXd pre = params.weights[d].transpose() * rec.layers.back() + params.biases[d];
    rec.layers.push_back(pre.unaryExpr([](double v) { return sigmoid(v); }));
  }
  return rec;
}

VectorXd predict(const NetworkParams& params, const VectorXd& x) { return forward(params, x).prediction(); }

std::vector<MatrixXd> forward_batch(const NetworkParams& params, const MatrixXd& inputs) {
  require_dim(static_cast<std::size_t>(inputs.cols()) == params.input_dim(),
              "batch has " + std::to_string(inputs.cols()) + " input columns, network expects " +
                  std::to_string(params.input_dim()));
  std::vector<MatrixXd> layers;
  layers.reserve(params.depth());
  layers.push_back(inputs);
  for (std::size_t d = 0; d < params.weights.size(); ++d) {
    MatrixXd pre = layers.back() * params.weights[d];
    pre.rowwise() += params.biases[d].transpose();
    sigmoid_inplace(pre);
    layers.push_back(std::move(pre));
  }
  return layers;
}

MatrixXd propagate_from(const NetworkParams& params, std::size_t depth, const MatrixXd& layer_outputs) {
  require_dim(depth >= 1 && depth <= params.depth(), "depth " + std::to_string(depth) + " out of range");
  const auto topo = params.topology();
  require_dim(static_cast<std::size_t>(layer_outputs.cols()) == topo.units(depth),
              "layer " + std::to_string(depth) + " has " + std::to_string(topo.units(depth)) + " units, got " +
                  std::to_string(layer_outputs.cols()) + " columns");
  MatrixXd current = layer_outputs;
  for (std::size_t d = depth - 1; d < params.weights.size(); ++d) {
    MatrixXd pre = current * params.weights[d];
    pre.rowwise() += params.biases[d].transpose();
    sigmoid_inplace(pre);
    current = std::move(pre);
  }
  return current;
}

double training_error(const NetworkParams& params, const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::Data, "error of an empty dataset is undefined");
  data.validate();
  require_dim(data.output_dim() == params.output_dim(), "dataset output dimension does not match the network");
  const MatrixXd pred = forward_batch(params, data.inputs).back();
  double total = 0.0;
  for (Eigen::Index n = 0; n < pred.rows(); ++n) total += (data.outputs.row(n) - pred.row(n)).squaredNorm();
  return total / static_cast<double>(data.size());
}

double generalization_error(const NetworkParams& params, const Dataset& test) { return training_error(params, test); }

double objective(const NetworkParams& params, const Dataset& data, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Config, "lambda must be nonnegative");
  return 0.5 * static_cast<double>(data.size()) * training_error(params, data) + lambda * params.l1_weight_norm();
}

}  // namespace lnncomm
