#include "lnncomm/roles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lnncomm/error.hpp"
#include "lnncomm/parallel.hpp"

namespace lnncomm {

namespace {

void check_members(const std::vector<std::size_t>& members, std::size_t units, std::size_t depth) {
  if (members.empty()) throw Error(ErrorKind::Config, "community at depth " + std::to_string(depth) + " has no members");
  for (std::size_t k : members)
    if (k >= units)
      throw Error(ErrorKind::Dimension, "unit " + std::to_string(k) + " not in layer " + std::to_string(depth) + " (" +
                                            std::to_string(units) + " units)");
}

void check_data(const NetworkParams& params, const Dataset& data, const Dataset& reference) {
  if (data.empty() || reference.empty()) throw Error(ErrorKind::Data, "role analysis needs non-empty data");
  if (data.input_dim() != params.input_dim() || reference.input_dim() != params.input_dim())
    throw Error(ErrorKind::Dimension, "dataset input dimension does not match the network");
}

// sum_n (a(n, k) - b(n, k))^2 per column, samples in ascending order.
VectorXd column_square_sums(const MatrixXd& a, const MatrixXd& b) {
  VectorXd s = VectorXd::Zero(a.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < a.rows(); ++n) {
      const double diff = a(n, k) - b(n, k);
      acc += diff * diff;
    }
    s(k) = acc;
  }
  return s;
}

// For every input dimension i: element d-1 (d >= 2) of the result is an
// M x l_d matrix of per-unit square-deviation sums.
std::vector<MatrixXd> all_input_unit_sums(const NetworkParams& params, const Dataset& data, const Dataset& reference,
                                          unsigned threads) {
  check_data(params, data, reference);
  const VectorXd means = input_mean_vector(reference);
  const std::vector<MatrixXd> base = forward_batch(params, data.inputs);
  const std::size_t depth = params.depth();
  const auto m = static_cast<Eigen::Index>(params.input_dim());

  std::vector<MatrixXd> sums(depth);
  for (std::size_t d = 2; d <= depth; ++d) sums[d - 1] = MatrixXd::Zero(m, base[d - 1].cols());

  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    MatrixXd perturbed = data.inputs;
    perturbed.col(i).setConstant(means(i));
    const std::vector<MatrixXd> z = forward_batch(params, perturbed);
    for (std::size_t d = 2; d <= depth; ++d) sums[d - 1].row(i) = column_square_sums(base[d - 1], z[d - 1]).transpose();
  });
  return sums;
}

VectorXd column_means(const MatrixXd& m) {
  VectorXd mean = VectorXd::Zero(m.cols());
  for (Eigen::Index n = 0; n < m.rows(); ++n) mean += m.row(n).transpose();
  return mean / static_cast<double>(m.rows());
}

VectorXd v_in_from_sums(const MatrixXd& unit_sums, const std::vector<std::size_t>& members, std::size_t n) {
  VectorXd v(unit_sums.rows());
  for (Eigen::Index i = 0; i < unit_sums.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t k : members) acc += unit_sums(i, static_cast<Eigen::Index>(k));
    v(i) = std::sqrt(acc / static_cast<double>(n));
  }
  return v;
}

VectorXd v_out_for(const NetworkParams& params, const std::vector<MatrixXd>& base, const VectorXd& layer_means,
                   std::size_t depth, const std::vector<std::size_t>& members) {
  MatrixXd substituted = base[depth - 1];
  for (std::size_t k : members) substituted.col(static_cast<Eigen::Index>(k)).setConstant(layer_means(static_cast<Eigen::Index>(k)));
  const MatrixXd z = propagate_from(params, depth, substituted);
  const auto n = static_cast<double>(z.rows());
  return (column_square_sums(base.back(), z) / n).cwiseSqrt();
}

}  // namespace

VectorXd input_mean_vector(const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::Data, "mean of an empty dataset is undefined");
  return column_means(data.inputs);
}

MatrixXd input_effect_unit_sums(const NetworkParams& params, const Dataset& data, const Dataset& reference,
                                std::size_t depth) {
  if (depth < 2 || depth > params.depth())
    throw Error(ErrorKind::Config, "input effects are defined for depths 2.." + std::to_string(params.depth()));
  return all_input_unit_sums(params, data, reference, 1)[depth - 1];
}

VectorXd input_effect(const NetworkParams& params, const Dataset& data, const Dataset& reference, std::size_t depth,
                      const std::vector<std::size_t>& members) {
  if (depth < 2 || depth > params.depth())
    throw Error(ErrorKind::Config, "input effects are defined for depths 2.." + std::to_string(params.depth()));
  check_members(members, params.topology().units(depth), depth);
  return v_in_from_sums(input_effect_unit_sums(params, data, reference, depth), members, data.size());
}

VectorXd output_effect(const NetworkParams& params, const Dataset& data, const Dataset& reference, std::size_t depth,
                       const std::vector<std::size_t>& members) {
  if (depth < 1 || depth >= params.depth())
    throw Error(ErrorKind::Config, "output effects are defined for depths 1.." + std::to_string(params.depth() - 1));
  check_data(params, data, reference);
  check_members(members, params.topology().units(depth), depth);
  const std::vector<MatrixXd> base = forward_batch(params, data.inputs);
  const VectorXd means = column_means(forward_batch(params, reference.inputs)[depth - 1]);
  return v_out_for(params, base, means, depth, members);
}

RoleReport role_report(const NetworkParams& params, const Dataset& data, const Dataset& reference,
                       const std::vector<CommunityAssignment>& assignments, unsigned threads) {
  params.validate();
  check_data(params, data, reference);
  const std::size_t depth = params.depth();
  const LayerTopology topo = params.topology();
  if (assignments.size() != depth)
    throw Error(ErrorKind::Config, "role report needs one community assignment per layer (" + std::to_string(depth) + ")");

  const std::vector<MatrixXd> in_sums = all_input_unit_sums(params, data, reference, threads);
  const std::vector<MatrixXd> base = forward_batch(params, data.inputs);
  const std::vector<MatrixXd> ref_layers = forward_batch(params, reference.inputs);

  RoleReport report;
  report.sample_count = data.size();
  for (std::size_t d = 1; d <= depth; ++d) {
    const CommunityAssignment& a = assignments[d - 1];
    if (a.depth != d || a.community.size() != topo.units(d))
      throw Error(ErrorKind::Dimension, "assignment for depth " + std::to_string(d) + " does not cover its layer");
    const VectorXd layer_means = column_means(ref_layers[d - 1]);

    LayerRoles layer;
    layer.depth = d;
    std::size_t label_count = a.communities;
    for (std::size_t label : a.community) label_count = std::max(label_count, label + 1);
    for (std::size_t c = 0; c < label_count; ++c) {
      auto members = a.members(c);
      if (members.empty()) continue;
      CommunityRole role;
      role.depth = d;
      role.community = c;
      role.members = std::move(members);
      layer.communities.push_back(std::move(role));
    }
    parallel_for(layer.communities.size(), threads, [&](std::size_t idx) {
      CommunityRole& role = layer.communities[idx];
      if (d >= 2) role.v_in = v_in_from_sums(in_sums[d - 1], role.members, data.size());
      if (d < depth) role.v_out = v_out_for(params, base, layer_means, d, role.members);
    });
    report.layers.push_back(std::move(layer));
  }
  return report;
}

}  // namespace lnncomm
