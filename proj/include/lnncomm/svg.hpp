#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lnncomm/community_em.hpp"
#include "lnncomm/network.hpp"

namespace lnncomm::svg {

struct HeatmapLabels {
  std::string title;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
};

/// Self-contained SVG heatmap of a nonnegative-or-signed matrix, scaled by
/// the maximum absolute entry of the figure.
std::string heatmap(const MatrixXd& values, const HeatmapLabels& labels);

/// Layered drawing of every connection with |w| >= xi: solid strokes for
/// positive weights, dashed for negative. When `assignments` is non-empty,
/// units are ordered and coloured by community.
std::string network_diagram(const NetworkParams& params, double xi,
                            const std::vector<CommunityAssignment>& assignments = {});

/// Grayscale image of a 20x20 style map (e.g. pixel community labels).
std::string label_grid(const std::vector<std::size_t>& labels, std::size_t side, const std::string& title);

void write(const std::string& svg, const std::filesystem::path& path);

}  // namespace lnncomm::svg
