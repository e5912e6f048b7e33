#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/network.hpp"

using namespace lnncomm;

TEST_CASE("sigmoid symmetry point and saturation") {
  CHECK(sigmoid(0.0) == 0.5);
  const double v = sigmoid(3.0);
  CHECK(std::fabs(v + sigmoid(-3.0) - 1.0) <= std::numeric_limits<double>::epsilon());
  CHECK(sigmoid(500.0) == 1.0);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(std::isfinite(sigmoid(-800.0)));
  CHECK(std::isfinite(sigmoid(800.0)));
  double prev = 0.0;
  for (double x = -30; x <= 30; x += 0.25) {
    CHECK(sigmoid(x) >= prev);
    prev = sigmoid(x);
  }
}

TEST_CASE("topology validation") {
  CHECK_THROWS_AS(LayerTopology{{3}}.validate(), Error);
  CHECK_THROWS_AS((LayerTopology{{3, 0, 2}}.validate()), Error);
  CHECK_NOTHROW(LayerTopology{{3, 2}}.validate());
  LayerTopology t{{4, 5, 3}};
  CHECK(t.depth() == 3);
  CHECK(t.units(2) == 5);
  NetworkParams p(t);
  CHECK(p.weights[0].rows() == 4);
  CHECK(p.weights[0].cols() == 5);
  CHECK(p.biases[1].size() == 3);
  CHECK(p.parameter_count() == 4 * 5 + 5 + 5 * 3 + 3);
  CHECK(p.topology() == t);
}

TEST_CASE("forward with zero parameters gives one half everywhere") {
  NetworkParams p(LayerTopology{{3, 4, 2}});
  VectorXd x(3);
  x << 1.5, -2.0, 7.0;
  const auto rec = forward(p, x);
  REQUIRE(rec.layers.size() == 3);
  CHECK(rec.layer(1) == x);
  for (std::size_t d = 2; d <= 3; ++d)
    for (Eigen::Index k = 0; k < rec.layer(d).size(); ++k) CHECK(rec.layer(d)[k] == 0.5);
}

TEST_CASE("forward single weight cancels") {
  NetworkParams p(LayerTopology{{1, 1}});
  p.weights[0](0, 0) = 2.0;
  p.biases[0][0] = -1.0;
  VectorXd x(1);
  x << 0.5;
  CHECK(predict(p, x)[0] == 0.5);
}

TEST_CASE("forward matches high precision evaluation") {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = fixture::random_params({2, 2, 1}, rng, 2.0);
    const VectorXd x = fixture::random_matrix(2, 1, rng, 2.0);
    const auto ref = oracle::big_forward(p, x);
    CHECK(std::fabs(predict(p, x)[0] - ref[0]) < 1e-12);
  }
  const auto p = fixture::random_params({5, 7, 6, 3}, rng, 1.5);
  const VectorXd x = fixture::random_matrix(5, 1, rng);
  const auto ref = oracle::big_forward(p, x);
  const auto got = predict(p, x);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(got[j] - ref[j]) < 1e-12);
}

TEST_CASE("forward outputs stay strictly inside the unit interval") {
  auto rng = make_rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = fixture::random_params({3, 4, 2}, rng, 2.0);
    const VectorXd x = fixture::random_matrix(3, 1, rng, 2.0);
    const auto rec = forward(p, x);
    for (std::size_t d = 2; d <= 3; ++d)
      for (Eigen::Index k = 0; k < rec.layer(d).size(); ++k) {
        CHECK(rec.layer(d)[k] > 0.0);
        CHECK(rec.layer(d)[k] < 1.0);
      }
  }
}

TEST_CASE("forward rejects wrong input length") {
  NetworkParams p(LayerTopology{{3, 2}});
  CHECK_THROWS_AS(forward(p, VectorXd::Zero(2)), Error);
}

TEST_CASE("forward_batch agrees with forward") {
  auto rng = make_rng(13);
  const auto p = fixture::random_params({4, 6, 3}, rng);
  const MatrixXd X = fixture::random_matrix(9, 4, rng);
  const auto batch = forward_batch(p, X);
  REQUIRE(batch.size() == 3);
  for (Eigen::Index n = 0; n < X.rows(); ++n) {
    const auto rec = forward(p, X.row(n).transpose());
    for (std::size_t d = 0; d < 3; ++d) CHECK((batch[d].row(n).transpose() - rec.layers[d]).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("propagate_from reproduces later layers") {
  auto rng = make_rng(14);
  const auto p = fixture::random_params({4, 5, 6, 2}, rng);
  const MatrixXd X = fixture::random_matrix(7, 4, rng);
  const auto layers = forward_batch(p, X);
  CHECK(fixture::max_abs_diff(propagate_from(p, 2, layers[1]), layers[3]) < 1e-15);
  CHECK(fixture::max_abs_diff(propagate_from(p, 1, layers[0]), layers[3]) < 1e-15);
  CHECK(fixture::max_abs_diff(propagate_from(p, 4, layers[3]), layers[3]) == 0.0);
}

TEST_CASE("training error contracts") {
  auto rng = make_rng(15);
  const auto p = fixture::random_params({3, 4, 2}, rng);

  Dataset exact;
  exact.inputs = fixture::random_matrix(6, 3, rng);
  exact.outputs.resize(6, 2);
  for (Eigen::Index n = 0; n < 6; ++n) exact.outputs.row(n) = predict(p, exact.inputs.row(n).transpose()).transpose();
  CHECK(training_error(p, exact) < 1e-28);
  CHECK(generalization_error(p, exact) < 1e-30);

  NetworkParams zero(LayerTopology{{1, 2}});
  Dataset one;
  one.inputs = MatrixXd::Zero(1, 1);
  one.outputs.resize(1, 2);
  one.outputs << 1.0, 0.0;
  CHECK(training_error(zero, one) == 0.5);
  CHECK(generalization_error(zero, one) == 0.5);

  const auto data = fixture::random_dataset(10, 3, 2, rng);
  long double sum = 0;
  for (Eigen::Index n = 0; n < 10; ++n) {
    const auto out = oracle::big_forward(p, data.inputs.row(n).transpose());
    for (int j = 0; j < 2; ++j) sum += (data.outputs(n, j) - out[j]) * (data.outputs(n, j) - out[j]);
  }
  CHECK(std::fabs(training_error(p, data) - static_cast<double>(sum / 10)) < 1e-12);
  CHECK(std::fabs(generalization_error(p, data) - static_cast<double>(sum / 10)) < 1e-12);

  Dataset permuted = data;
  for (Eigen::Index n = 0; n < 10; ++n) {
    permuted.inputs.row(n) = data.inputs.row(9 - n);
    permuted.outputs.row(n) = data.outputs.row(9 - n);
  }
  CHECK(std::fabs(training_error(p, permuted) - training_error(p, data)) < 1e-15);

  Dataset empty;
  empty.inputs.resize(0, 3);
  empty.outputs.resize(0, 2);
  CHECK_THROWS_AS(training_error(p, empty), Error);
  CHECK_THROWS_AS(generalization_error(p, empty), Error);
}

TEST_CASE("objective contracts") {
  auto rng = make_rng(16);
  const auto p = fixture::random_params({3, 4, 2}, rng);
  const auto data = fixture::random_dataset(10, 3, 2, rng);
  CHECK(objective(p, data, 0.0) == doctest::Approx(5.0 * training_error(p, data)).epsilon(1e-15));

  NetworkParams zero_w = p;
  for (auto& w : zero_w.weights) w.setZero();
  CHECK(objective(zero_w, data, 3.0) == doctest::Approx(5.0 * training_error(zero_w, data)).epsilon(1e-15));

  long double l1 = 0;
  for (const auto& w : p.weights)
    for (Eigen::Index i = 0; i < w.size(); ++i) l1 += std::fabs(w.data()[i]);
  const double expect = 5.0 * training_error(p, data) + 0.1 * static_cast<double>(l1);
  CHECK(std::fabs(objective(p, data, 0.1) - expect) < 1e-12);

  double prev = objective(p, data, 0.0);
  for (double lam : {0.01, 0.1, 1.0, 10.0}) {
    CHECK(objective(p, data, lam) >= prev);
    prev = objective(p, data, lam);
  }
  CHECK_THROWS_AS(objective(p, data, -1.0), Error);
}

TEST_CASE("params validation catches non-finite entries and shape errors") {
  NetworkParams p(LayerTopology{{2, 3, 1}});
  CHECK_NOTHROW(p.validate());
  p.weights[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.validate(), Error);
  NetworkParams q(LayerTopology{{2, 3, 1}});
  q.weights[1].resize(2, 1);
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.inputs = MatrixXd::Zero(3, 2);
  d.outputs = MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(d.validate(), Error);
  d.outputs = MatrixXd::Zero(3, 1);
  CHECK_NOTHROW(d.validate());
  d.classes = {0, 1};
  CHECK_THROWS_AS(d.validate(), Error);
}
