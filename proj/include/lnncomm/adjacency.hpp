#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "lnncomm/network.hpp"

namespace lnncomm {

/// Signed connection indicators of one focal layer toward its two neighbours.
///
/// a_pos/a_neg are i0 x k0 (input-side unit i, focal unit k), b_pos/b_neg are
/// k0 x j0 (focal unit k, output-side unit j). The input layer has i0 = 0 and
/// the output layer j0 = 0.
struct SignedAdjacency {
  std::size_t depth = 0;
  MatrixXd a_pos, a_neg;
  MatrixXd b_pos, b_neg;
  bool softened = false;

  std::size_t units() const noexcept;
  std::size_t input_side_units() const noexcept { return static_cast<std::size_t>(a_pos.rows()); }
  std::size_t output_side_units() const noexcept { return static_cast<std::size_t>(b_pos.cols()); }
};

/// A+ = [w >= xi], A- = [w <= -xi] for the weights into layer `depth`, and B
/// the same for the weights out of it.
SignedAdjacency extract(const NetworkParams& params, std::size_t depth, double xi);

inline constexpr double kSoftHigh = 0.99;
inline constexpr double kSoftLow = 0.01;

/// Remaps 1 -> 0.99 and 0 -> 0.01. Throws if already softened.
SignedAdjacency soften(SignedAdjacency adj);

/// Writes a_pos.csv, a_neg.csv, b_pos.csv, b_neg.csv (non-empty sides only)
/// into `dir`, prefixed with `prefix`. Returns the files written.
std::vector<std::filesystem::path> write_adjacency_csv(const SignedAdjacency& adj, const std::filesystem::path& dir,
                                                       const std::string& prefix);

}  // namespace lnncomm
