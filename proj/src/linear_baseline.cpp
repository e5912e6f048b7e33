#include "lnncomm/linear_baseline.hpp"

#include <cmath>
#include <string>

#include "lnncomm/error.hpp"

namespace lnncomm {

LinearModel fit_linear(const Dataset& data) {
  data.validate();
  if (data.empty()) throw Error(ErrorKind::Data, "cannot fit a linear model to an empty dataset");
  const Eigen::Index n = data.inputs.rows();
  const Eigen::Index m = data.inputs.cols();

  MatrixXd design(n, m + 1);
  design.col(0).setOnes();
  design.rightCols(m) = data.inputs;

  const Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(design);
  const MatrixXd solution = cod.solve(data.outputs);
  if (!solution.allFinite()) throw Error(ErrorKind::Numerical, "least-squares solution is not finite");

  LinearModel model;
  model.intercept = solution.row(0).transpose();
  model.coefficients = solution.bottomRows(m);
  return model;
}

VectorXd predict_linear(const LinearModel& model, const VectorXd& x) {
  if (x.size() != model.coefficients.rows())
    throw Error(ErrorKind::Dimension, "linear model expects " + std::to_string(model.coefficients.rows()) + " inputs");
  return model.coefficients.transpose() * x + model.intercept;
}

MatrixXd predict_linear(const LinearModel& model, const MatrixXd& inputs) {
  if (inputs.cols() != model.coefficients.rows())
    throw Error(ErrorKind::Dimension, "linear model expects " + std::to_string(model.coefficients.rows()) + " inputs");
  MatrixXd out = inputs * model.coefficients;
  out.rowwise() += model.intercept.transpose();
  return out;
}

double linear_error(const LinearModel& model, const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::Data, "error of an empty dataset is undefined");
  const MatrixXd pred = predict_linear(model, data.inputs);
  double total = 0.0;
  for (Eigen::Index n = 0; n < pred.rows(); ++n) total += (data.outputs.row(n) - pred.row(n)).squaredNorm();
  return total / static_cast<double>(data.size());
}

ChronologicalSplit split_chronological(const Dataset& data, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw Error(ErrorKind::Config, "train fraction must lie in (0, 1]");
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto n_train = static_cast<Eigen::Index>(std::floor(train_fraction * static_cast<double>(n)));
  if (n_train < 1) throw Error(ErrorKind::Data, "chronological split leaves no training samples");
  ChronologicalSplit split;
  split.train.inputs = data.inputs.topRows(n_train);
  split.train.outputs = data.outputs.topRows(n_train);
  split.test.inputs = data.inputs.bottomRows(n - n_train);
  split.test.outputs = data.outputs.bottomRows(n - n_train);
  if (!data.classes.empty()) {
    split.train.classes.assign(data.classes.begin(), data.classes.begin() + n_train);
    split.test.classes.assign(data.classes.begin() + n_train, data.classes.end());
  }
  return split;
}

namespace {

ChronologicalSplit prepare(const TimeSeries& series, std::size_t window, const SweepConfig& config) {
  if (window >= series.length())
    throw Error(ErrorKind::Config, "window " + std::to_string(window) + " is not shorter than the series (" +
                                       std::to_string(series.length()) + ")");
  ChronologicalSplit split = split_chronological(window_timeseries(series, window), config.train_fraction);
  if (config.normalize) {
    split.train = normalize_dataset(split.train, config.bounds);
    if (!split.test.empty()) split.test = apply_normalization(split.test, *split.train.norm);
  }
  return split;
}

}  // namespace

LinearModel fit_window(const TimeSeries& series, std::size_t window, const SweepConfig& config) {
  LinearModel model = fit_linear(prepare(series, window, config).train);
  model.window = window;
  return model;
}

std::vector<WindowResult> sweep_window(const TimeSeries& series, const std::vector<std::size_t>& windows,
                                       const SweepConfig& config) {
  std::vector<WindowResult> results;
  results.reserve(windows.size());
  for (std::size_t w : windows) {
    const ChronologicalSplit split = prepare(series, w, config);
    LinearModel model = fit_linear(split.train);
    WindowResult r;
    r.window = w;
    r.train_samples = split.train.size();
    r.test_samples = split.test.size();
    r.train_error = linear_error(model, split.train);
    r.generalization_error = split.test.empty() ? std::nan("") : linear_error(model, split.test);
    results.push_back(r);
  }
  return results;
}

}  // namespace lnncomm
