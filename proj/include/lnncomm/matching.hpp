#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace lnncomm {

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method). Returns column index per row.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

struct LabelMatch {
  std::vector<std::size_t> mapping;  // detected label -> reference label
  double accuracy = 0.0;             // fraction of units whose mapped label matches
};

/// Best one-to-one relabelling of `detected` onto `reference` maximising
/// agreement. Labels are 0-based; the label space is max(label)+1 on each side.
LabelMatch match_labels(const std::vector<std::size_t>& detected, const std::vector<std::size_t>& reference);

}  // namespace lnncomm
