#include <doctest.h>

#include <cmath>
#include <numeric>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "lnncomm/datagen.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/roles.hpp"

using namespace lnncomm;

namespace {

Dataset inputs_only(const MatrixXd& X, std::size_t N) {
  Dataset d;
  d.inputs = X;
  d.outputs = MatrixXd::Zero(X.rows(), static_cast<Eigen::Index>(N));
  return d;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

CommunityAssignment assignment(std::size_t depth, std::vector<std::size_t> labels, std::size_t C) {
  CommunityAssignment a;
  a.depth = depth;
  a.community = std::move(labels);
  a.communities = C;
  return a;
}

}  // namespace

TEST_CASE("input mean vector") {
  MatrixXd X(2, 2);
  X << 0, 2, 2, 0;
  VectorXd m = input_mean_vector(inputs_only(X, 1));
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 1.0);
  MatrixXd same(3, 3);
  same.rowwise() = Eigen::RowVector3d(1.5, -2.0, 4.0);
  CHECK(input_mean_vector(inputs_only(same, 1)) == Eigen::Vector3d(1.5, -2.0, 4.0));

  auto rng = make_rng(61);
  const MatrixXd R = fixture::random_matrix(37, 5, rng);
  const auto ref = oracle::column_mean(R);
  const VectorXd got = input_mean_vector(inputs_only(R, 1));
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(got[i] - ref[i]) < 1e-12);

  Dataset empty;
  empty.inputs.resize(0, 2);
  empty.outputs.resize(0, 1);
  CHECK_THROWS_AS(input_mean_vector(empty), Error);
}

TEST_CASE("constant input dimension has no effect") {
  auto rng = make_rng(62);
  const auto p = fixture::random_params({3, 4, 2}, rng);
  MatrixXd X = fixture::random_matrix(20, 3, rng);
  X.col(1).setConstant(0.7);
  const auto v = input_effect(p, inputs_only(X, 2), 2, {0, 2, 3});
  CHECK(v[1] < 1e-12);
  CHECK(v[0] > 0.0);
}

TEST_CASE("input effect matches two forward passes") {
  NetworkParams p(LayerTopology{{2, 1, 1}});
  p.weights[0] << 1.3, -0.6;
  p.biases[0] << 0.2;
  p.weights[1] << 0.9;
  p.biases[1] << -0.1;
  MatrixXd X(4, 2);
  X << 0.1, 0.9, -0.5, 0.3, 0.8, -0.7, 0.0, 0.2;
  const auto data = inputs_only(X, 1);
  const auto v = input_effect(p, data, 2, {0});
  const auto ref = oracle::input_effect(p, X, X, 2, {0});
  for (int i = 0; i < 2; ++i) CHECK(std::fabs(v[i] - ref[i]) < 1e-12);

  auto rng = make_rng(63);
  const auto q = fixture::random_params({4, 5, 6, 3}, rng);
  const MatrixXd Y = fixture::random_matrix(15, 4, rng), R = fixture::random_matrix(9, 4, rng);
  for (std::size_t d : {2, 3, 4}) {
    const std::vector<std::size_t> members{0, 2};
    const auto got = input_effect(q, inputs_only(Y, 3), inputs_only(R, 3), d, members);
    const auto exp = oracle::input_effect(q, Y, R, d, members);
    CHECK((got - exp).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("output effect matches a partial forward pass") {
  NetworkParams p(LayerTopology{{2, 2, 2}});
  p.weights[0] << 0.5, -1.2, 0.8, 0.3;
  p.biases[0] << 0.1, -0.2;
  p.weights[1] << 1.1, -0.4, 0.7, 0.9;
  p.biases[1] << 0.05, 0.0;
  MatrixXd X(5, 2);
  X << 0.1, 0.9, -0.5, 0.3, 0.8, -0.7, 0.0, 0.2, 0.6, 0.6;
  for (std::size_t d : {1, 2})
    for (const std::vector<std::size_t>& members : {std::vector<std::size_t>{0}, std::vector<std::size_t>{1},
                                                     std::vector<std::size_t>{0, 1}}) {
      const auto got = output_effect(p, inputs_only(X, 2), d, members);
      const auto exp = oracle::output_effect(p, X, X, d, members);
      CHECK((got - exp).cwiseAbs().maxCoeff() < 1e-12);
    }

  auto rng = make_rng(64);
  const auto q = fixture::random_params({4, 5, 6, 3}, rng);
  const MatrixXd Y = fixture::random_matrix(12, 4, rng), R = fixture::random_matrix(8, 4, rng);
  for (std::size_t d : {1, 2, 3}) {
    const auto got = output_effect(q, inputs_only(Y, 3), inputs_only(R, 3), d, {1, 3});
    const auto exp = oracle::output_effect(q, Y, R, d, {1, 3});
    CHECK((got - exp).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unreachable or constant communities have no output effect") {
  auto rng = make_rng(65);
  auto p = fixture::random_params({3, 4, 2}, rng);
  p.weights[1].row(2).setZero();
  const MatrixXd X = fixture::random_matrix(10, 3, rng);
  CHECK(output_effect(p, inputs_only(X, 2), 2, {2}).maxCoeff() == 0.0);
  auto q = fixture::random_params({3, 4, 2}, rng);
  q.weights[0].col(1).setZero();
  CHECK(output_effect(q, inputs_only(X, 2), 2, {1}).maxCoeff() == 0.0);
}

TEST_CASE("full layer substitution gives the same output for every sample") {
  auto rng = make_rng(66);
  const auto p = fixture::random_params({3, 4, 2}, rng);
  const MatrixXd X = fixture::random_matrix(10, 3, rng);
  const auto layers = forward_batch(p, X);
  MatrixXd sub = layers[1];
  const auto mean = oracle::column_mean(layers[1]);
  for (Eigen::Index n = 0; n < sub.rows(); ++n)
    for (Eigen::Index k = 0; k < 4; ++k) sub(n, k) = mean[k];
  const MatrixXd z = propagate_from(p, 2, sub);
  for (Eigen::Index n = 1; n < z.rows(); ++n) CHECK(z.row(n) == z.row(0));
  const auto v = output_effect(p, inputs_only(X, 2), 2, iota(4));
  VectorXd expect(2);
  for (int j = 0; j < 2; ++j) {
    double s = 0;
    for (Eigen::Index n = 0; n < X.rows(); ++n) s += std::pow(layers[2](n, j) - z(0, j), 2);
    expect[j] = std::sqrt(s / X.rows());
  }
  CHECK((v - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("squared input effect adds over disjoint communities") {
  auto rng = make_rng(67);
  const auto p = fixture::random_params({4, 7, 3}, rng);
  const auto data = inputs_only(fixture::random_matrix(25, 4, rng), 3);
  const std::vector<std::size_t> a{0, 3, 5}, b{1, 6}, ab{0, 1, 3, 5, 6};
  const VectorXd va = input_effect(p, data, 2, a), vb = input_effect(p, data, 2, b), vab = input_effect(p, data, 2, ab);
  CHECK((vab.array().square() - va.array().square() - vb.array().square()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("role vectors are nonnegative") {
  auto rng = make_rng(68);
  const auto p = fixture::random_params({3, 5, 4, 2}, rng);
  const auto data = inputs_only(fixture::random_matrix(20, 3, rng), 2);
  for (std::size_t d = 2; d <= 4; ++d) CHECK(input_effect(p, data, d, {0, 1}).minCoeff() >= 0.0);
  for (std::size_t d = 1; d <= 3; ++d) CHECK(output_effect(p, data, d, {0, 1}).minCoeff() >= 0.0);
}

TEST_CASE("role vector argument errors") {
  auto rng = make_rng(69);
  const auto p = fixture::random_params({3, 4, 2}, rng);
  const auto data = inputs_only(fixture::random_matrix(5, 3, rng), 2);
  CHECK_THROWS_AS(input_effect(p, data, 2, {}), Error);
  CHECK_THROWS_AS(input_effect(p, data, 1, {0}), Error);
  CHECK_THROWS_AS(input_effect(p, data, 4, {0}), Error);
  CHECK_THROWS_AS(output_effect(p, data, 3, {0}), Error);
  CHECK_THROWS_AS(output_effect(p, data, 2, {7}), Error);
  CHECK_THROWS_AS(output_effect(p, data, 0, {0}), Error);
}

TEST_CASE("role report counts and agrees with direct calls") {
  auto rng = make_rng(70);
  const auto p = fixture::random_params({6, 6, 6, 3}, rng);
  const auto data = inputs_only(fixture::random_matrix(12, 6, rng), 3);
  std::vector<CommunityAssignment> as{assignment(1, {0, 1, 2, 0, 1, 2}, 3), assignment(2, {2, 2, 1, 1, 0, 0}, 3),
                                      assignment(3, {0, 1, 2, 0, 1, 2}, 3), assignment(4, {0, 1, 2}, 3)};
  const auto report = role_report(p, data, as);
  REQUIRE(report.layers.size() == 4);
  CHECK(report.sample_count == 12);
  for (const auto& layer : report.layers) {
    CHECK(layer.communities.size() == 3);
    std::size_t units = 0;
    for (const auto& c : layer.communities) {
      units += c.members.size();
      CHECK(c.v_in.has_value() == (layer.depth >= 2));
      CHECK(c.v_out.has_value() == (layer.depth <= 3));
      if (c.v_in) CHECK(*c.v_in == input_effect(p, data, layer.depth, c.members));
      if (c.v_out) CHECK(*c.v_out == output_effect(p, data, layer.depth, c.members));
    }
    CHECK(units == p.topology().units(layer.depth));
  }
  const auto threaded = role_report(p, data, as, 4);
  for (std::size_t d = 0; d < 4; ++d)
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(threaded.layers[d].communities[c].v_in == report.layers[d].communities[c].v_in);
      CHECK(threaded.layers[d].communities[c].v_out == report.layers[d].communities[c].v_out);
    }

  as[1] = assignment(2, {0, 0, 0, 2, 2, 2}, 3);
  const auto sparse = role_report(p, data, as);
  CHECK(sparse.layers[1].communities.size() == 2);
  CHECK(sparse.layers[1].communities[1].community == 2);

  as.pop_back();
  CHECK_THROWS_AS(role_report(p, data, as), Error);
}

TEST_CASE("ground truth modules only affect their own block") {
  const auto truth = gen_ground_truth({3, 4, 2, 1.0, 0.5, 1.0}, 5);
  const auto data = gen_synthetic_dataset(truth.params, 60, 6);
  std::vector<CommunityAssignment> as;
  for (std::size_t d = 1; d <= 4; ++d) as.push_back(assignment(d, truth.module[d - 1], 3));
  const auto report = role_report(truth.params, data, as);
  for (const auto& layer : report.layers)
    for (const auto& c : layer.communities) {
      if (c.v_in)
        for (std::size_t i = 0; i < 12; ++i)
          if (truth.module[0][i] != c.community) CHECK((*c.v_in)[i] == 0.0);
      if (c.v_out)
        for (std::size_t j = 0; j < 12; ++j)
          if (truth.module[3][j] != c.community) CHECK((*c.v_out)[j] == 0.0);
    }
}
