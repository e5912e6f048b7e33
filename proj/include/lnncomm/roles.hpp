#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lnncomm/community_em.hpp"
#include "lnncomm/network.hpp"

namespace lnncomm {

// Role vectors by mean substitution.
//
// v_in_i(c)  = sqrt( (1/n) sum_{k in u(c)} sum_n (o_k^(n) - z_k^(n))^2 ), where z
//              is the layer-d output after input dimension i is replaced by its
//              mean over the reference data.
// v_out_j(c) = sqrt( (1/n) sum_n (y_j^(n) - z_j^(n))^2 ), where z is the network
//              output after the outputs of the units in u(c) are replaced by their
//              reference means.
//
// `reference` supplies the means (the training set), `data` the samples the
// fluctuations are averaged over. The sum over members is not divided by |u(c)|.

struct CommunityRole {
  std::size_t depth = 0;
  std::size_t community = 0;
  std::vector<std::size_t> members;
  std::optional<VectorXd> v_in;   // absent for the input layer
  std::optional<VectorXd> v_out;  // absent for the output layer
};

struct LayerRoles {
  std::size_t depth = 0;
  std::vector<CommunityRole> communities;  // non-empty communities, ascending id
};

struct RoleReport {
  std::vector<LayerRoles> layers;
  std::size_t sample_count = 0;
};

VectorXd input_mean_vector(const Dataset& data);

/// Per-unit sums S_{i,k} = sum_n (o_k - z_k)^2 for every input dimension i and
/// every unit k of layer `depth` (result is M x l_d). v_in is the square root
/// of the member-column sums divided by n.
MatrixXd input_effect_unit_sums(const NetworkParams& params, const Dataset& data, const Dataset& reference,
                                std::size_t depth);

VectorXd input_effect(const NetworkParams& params, const Dataset& data, const Dataset& reference, std::size_t depth,
                      const std::vector<std::size_t>& members);
inline VectorXd input_effect(const NetworkParams& params, const Dataset& data, std::size_t depth,
                             const std::vector<std::size_t>& members) {
  return input_effect(params, data, data, depth, members);
}

VectorXd output_effect(const NetworkParams& params, const Dataset& data, const Dataset& reference, std::size_t depth,
                       const std::vector<std::size_t>& members);
inline VectorXd output_effect(const NetworkParams& params, const Dataset& data, std::size_t depth,
                              const std::vector<std::size_t>& members) {
  return output_effect(params, data, data, depth, members);
}

/// v_out for every community at depths 1..D-1 and v_in at depths 2..D.
/// `assignments` must hold one entry per layer, ordered by depth.
RoleReport role_report(const NetworkParams& params, const Dataset& data, const Dataset& reference,
                       const std::vector<CommunityAssignment>& assignments, unsigned threads = 1);
inline RoleReport role_report(const NetworkParams& params, const Dataset& data,
                              const std::vector<CommunityAssignment>& assignments, unsigned threads = 1) {
  return role_report(params, data, data, assignments, threads);
}

}  // namespace lnncomm
