#pragma once

#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lnncomm/adjacency.hpp"
#include "lnncomm/community_em.hpp"
#include "lnncomm/network.hpp"
#include "lnncomm/random.hpp"

namespace fixture {

using lnncomm::MatrixXd;
using lnncomm::VectorXd;

inline lnncomm::NetworkParams random_params(const std::vector<std::size_t>& sizes, lnncomm::Rng& rng,
                                            double scale = 1.0) {
  lnncomm::NetworkParams p(lnncomm::LayerTopology{sizes});
  std::normal_distribution<double> n(0.0, scale);
  for (auto& w : p.weights)
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = n(rng);
  for (auto& b : p.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = n(rng);
  return p;
}

inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, lnncomm::Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline lnncomm::Dataset random_dataset(std::size_t n, std::size_t M, std::size_t N, lnncomm::Rng& rng) {
  lnncomm::Dataset d;
  d.inputs = random_matrix(n, M, rng);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  d.outputs.resize(n, N);
  for (Eigen::Index i = 0; i < d.outputs.size(); ++i) d.outputs.data()[i] = u(rng);
  return d;
}

/// Softened signed adjacency with every edge independently +, - or absent.
inline lnncomm::SignedAdjacency random_adjacency(std::size_t i0, std::size_t k0, std::size_t j0, lnncomm::Rng& rng) {
  lnncomm::NetworkParams p(lnncomm::LayerTopology{i0 > 0 ? std::vector<std::size_t>{i0, k0, std::max<std::size_t>(j0, 1)}
                                                         : std::vector<std::size_t>{k0, std::max<std::size_t>(j0, 1)}});
  std::uniform_int_distribution<int> pick(-1, 1);
  for (auto& w : p.weights)
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = pick(rng);
  const std::size_t depth = i0 > 0 ? 2 : 1;
  auto adj = lnncomm::extract(p, depth, 0.5);
  if (j0 == 0) {
    adj.b_pos.resize(k0, 0);
    adj.b_neg.resize(k0, 0);
  }
  return lnncomm::soften(adj);
}

inline lnncomm::CommunityModel random_model(std::size_t C, const lnncomm::SignedAdjacency& adj, lnncomm::Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  lnncomm::CommunityModel m;
  m.pi.resize(C);
  for (std::size_t c = 0; c < C; ++c) m.pi[c] = u(rng);
  m.pi /= m.pi.sum();
  const auto fill = [&](MatrixXd& t, std::size_t cols) {
    t.resize(C, cols);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
  };
  fill(m.tau_in_pos, adj.input_side_units());
  fill(m.tau_in_neg, adj.input_side_units());
  fill(m.tau_out_pos, adj.output_side_units());
  fill(m.tau_out_neg, adj.output_side_units());
  m.q = MatrixXd::Constant(adj.units(), C, 1.0 / C);
  return m;
}

inline MatrixXd random_q(std::size_t k0, std::size_t C, lnncomm::Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  MatrixXd q(k0, C);
  for (std::size_t k = 0; k < k0; ++k) {
    for (std::size_t c = 0; c < C; ++c) q(k, c) = e(rng);
    q.row(k) /= q.row(k).sum();
  }
  return q;
}

inline double max_abs_diff(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Fresh empty directory below the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lnncomm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
