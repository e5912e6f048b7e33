#include "lnncomm/matching.hpp"

#include <algorithm>
#include <limits>

#include "lnncomm/error.hpp"

namespace lnncomm {

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw Error(ErrorKind::Dimension, "assignment cost matrix must be square");
  const auto n = static_cast<std::size_t>(cost.rows());
  // Shortest augmenting path formulation, 1-based potentials.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

LabelMatch match_labels(const std::vector<std::size_t>& detected, const std::vector<std::size_t>& reference) {
  if (detected.size() != reference.size()) throw Error(ErrorKind::Dimension, "label vectors differ in length");
  if (detected.empty()) return {};
  const std::size_t nd = *std::max_element(detected.begin(), detected.end()) + 1;
  const std::size_t nr = *std::max_element(reference.begin(), reference.end()) + 1;
  const std::size_t n = std::max(nd, nr);

  Eigen::MatrixXd agreement = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < detected.size(); ++k)
    agreement(static_cast<Eigen::Index>(detected[k]), static_cast<Eigen::Index>(reference[k])) += 1.0;

  LabelMatch match;
  match.mapping = min_cost_assignment(-agreement);
  match.mapping.resize(nd);
  double hits = 0.0;
  for (std::size_t k = 0; k < detected.size(); ++k)
    if (match.mapping[detected[k]] == reference[k]) hits += 1.0;
  match.accuracy = hits / static_cast<double>(detected.size());
  return match;
}

}  // namespace lnncomm
