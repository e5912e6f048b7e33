#include "lnncomm/adjacency.hpp"

#include <string>

#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"

namespace lnncomm {

namespace {

MatrixXd threshold(const MatrixXd& w, double xi, bool positive) {
  return w.unaryExpr([xi, positive](double v) { return (positive ? v >= xi : v <= -xi) ? 1.0 : 0.0; });
}

MatrixXd remap(const MatrixXd& m) {
  return m.unaryExpr([](double v) { return v == 1.0 ? kSoftHigh : kSoftLow; });
}

}  // namespace

std::size_t SignedAdjacency::units() const noexcept {
  if (a_pos.cols() > 0) return static_cast<std::size_t>(a_pos.cols());
  return static_cast<std::size_t>(b_pos.rows());
}

SignedAdjacency extract(const NetworkParams& params, std::size_t depth, double xi) {
  if (!(xi > 0.0)) throw Error(ErrorKind::Config, "xi must be > 0");
  const std::size_t layers = params.depth();
  if (depth < 1 || depth > layers)
    throw Error(ErrorKind::Config, "depth " + std::to_string(depth) + " outside 1.." + std::to_string(layers));
  const auto topo = params.topology();
  const auto k0 = static_cast<Eigen::Index>(topo.units(depth));

  SignedAdjacency adj;
  adj.depth = depth;
  if (depth > 1) {
    const MatrixXd& w = params.weights[depth - 2];
    adj.a_pos = threshold(w, xi, true);
    adj.a_neg = threshold(w, xi, false);
  } else {
    adj.a_pos = adj.a_neg = MatrixXd(0, k0);
  }
  if (depth < layers) {
    const MatrixXd& w = params.weights[depth - 1];
    adj.b_pos = threshold(w, xi, true);
    adj.b_neg = threshold(w, xi, false);
  } else {
    adj.b_pos = adj.b_neg = MatrixXd(k0, 0);
  }
  return adj;
}

SignedAdjacency soften(SignedAdjacency adj) {
  if (adj.softened) throw Error(ErrorKind::Config, "adjacency is already softened");
  adj.a_pos = remap(adj.a_pos);
  adj.a_neg = remap(adj.a_neg);
  adj.b_pos = remap(adj.b_pos);
  adj.b_neg = remap(adj.b_neg);
  adj.softened = true;
  return adj;
}

std::vector<std::filesystem::path> write_adjacency_csv(const SignedAdjacency& adj, const std::filesystem::path& dir,
                                                       const std::string& prefix) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const MatrixXd& m, const char* name) {
    if (m.size() == 0) return;
    auto path = dir / (prefix + name + ".csv");
    write_matrix_csv(m, path);
    written.push_back(path);
  };
  emit(adj.a_pos, "a_pos");
  emit(adj.a_neg, "a_neg");
  emit(adj.b_pos, "b_pos");
  emit(adj.b_neg, "b_neg");
  return written;
}

}  // namespace lnncomm
