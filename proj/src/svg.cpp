#include "lnncomm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "lnncomm/io.hpp"

namespace lnncomm::svg {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string rgb(int r, int g, int b) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", std::clamp(r, 0, 255), std::clamp(g, 0, 255), std::clamp(b, 0, 255));
  return buf;
}

// White -> dark blue for magnitudes, red for negative values.
std::string shade(double v, double scale) {
  const double t = scale > 0.0 ? std::min(1.0, std::abs(v) / scale) : 0.0;
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  if (v < 0.0) return rgb(255, fade, fade);
  return rgb(fade, fade, 255 - static_cast<int>(std::lround(120.0 * t)));
}

const char* palette(std::size_t c) { return kPalette[c % (sizeof kPalette / sizeof kPalette[0])]; }

}  // namespace

std::string heatmap(const MatrixXd& values, const HeatmapLabels& labels) {
  const double cell = 18.0;
  const double left = 120.0, top = 40.0, bottom = 90.0;
  const double width = left + cell * static_cast<double>(values.cols()) + 20.0;
  const double height = top + cell * static_cast<double>(values.rows()) + bottom;
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n";
  s << "<text x=\"" << num(left) << "\" y=\"20\" font-size=\"13\">" << escape(labels.title) << "</text>\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const double y = top + cell * static_cast<double>(i);
    const std::string row = static_cast<std::size_t>(i) < labels.rows.size() ? labels.rows[static_cast<std::size_t>(i)]
                                                                              : std::to_string(i);
    s << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + cell * 0.7) << "\" text-anchor=\"end\">" << escape(row)
      << "</text>\n";
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double x = left + cell * static_cast<double>(j);
      s << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
        << "\" fill=\"" << shade(values(i, j), scale) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"><title>"
        << format_double(values(i, j)) << "</title></rect>\n";
    }
  }
  const double label_y = top + cell * static_cast<double>(values.rows()) + 6.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const double x = left + cell * (static_cast<double>(j) + 0.6);
    const std::string col = static_cast<std::size_t>(j) < labels.columns.size()
                                ? labels.columns[static_cast<std::size_t>(j)]
                                : std::to_string(j);
    s << "<text x=\"" << num(x) << "\" y=\"" << num(label_y) << "\" transform=\"rotate(60 " << num(x) << ' '
      << num(label_y) << ")\">" << escape(col) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string network_diagram(const NetworkParams& params, double xi, const std::vector<CommunityAssignment>& assignments) {
  const LayerTopology topo = params.topology();
  const std::size_t depth = topo.depth();
  const std::size_t widest = *std::max_element(topo.sizes.begin(), topo.sizes.end());
  const double gap = std::clamp(800.0 / static_cast<double>(widest), 2.0, 24.0);
  const double width = gap * static_cast<double>(widest) + 40.0;
  const double layer_gap = 140.0;
  const double height = layer_gap * static_cast<double>(depth - 1) + 60.0;

  // position[d][k]: horizontal slot of unit k of layer d+1 (units grouped by community).
  std::vector<std::vector<double>> xpos(depth);
  std::vector<std::vector<std::size_t>> colour(depth);
  for (std::size_t d = 0; d < depth; ++d) {
    const std::size_t units = topo.sizes[d];
    std::vector<std::size_t> order(units);
    std::iota(order.begin(), order.end(), 0);
    colour[d].assign(units, 0);
    if (assignments.size() == depth && assignments[d].community.size() == units) {
      colour[d] = assignments[d].community;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return colour[d][a] < colour[d][b]; });
    }
    xpos[d].resize(units);
    const double offset = 20.0 + gap * static_cast<double>(widest - units) / 2.0;
    for (std::size_t slot = 0; slot < units; ++slot) xpos[d][order[slot]] = offset + gap * (static_cast<double>(slot) + 0.5);
  }
  auto ypos = [&](std::size_t d) { return height - 30.0 - layer_gap * static_cast<double>(d); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height) << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n";
  for (std::size_t d = 0; d + 1 < depth; ++d) {
    const MatrixXd& w = params.weights[d];
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double v = w(i, j);
        if (std::abs(v) < xi) continue;
        s << "<line x1=\"" << num(xpos[d][static_cast<std::size_t>(i)]) << "\" y1=\"" << num(ypos(d)) << "\" x2=\""
          << num(xpos[d + 1][static_cast<std::size_t>(j)]) << "\" y2=\"" << num(ypos(d + 1))
          << "\" stroke=\"#333333\" stroke-opacity=\"0.35\" stroke-width=\"0.6\""
          << (v < 0.0 ? " stroke-dasharray=\"3,2\"" : "") << "/>\n";
      }
  }
  for (std::size_t d = 0; d < depth; ++d)
    for (std::size_t k = 0; k < topo.sizes[d]; ++k)
      s << "<circle cx=\"" << num(xpos[d][k]) << "\" cy=\"" << num(ypos(d)) << "\" r=\"" << num(std::min(5.0, gap * 0.4))
        << "\" fill=\"" << palette(colour[d][k]) << "\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string label_grid(const std::vector<std::size_t>& labels, std::size_t side, const std::string& title) {
  const double cell = 16.0;
  const double size = cell * static_cast<double>(side);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size + 20) << "\" height=\"" << num(size + 40)
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<text x=\"10\" y=\"18\">" << escape(title) << "</text>\n";
  for (std::size_t idx = 0; idx < labels.size() && idx < side * side; ++idx) {
    const double x = 10.0 + cell * static_cast<double>(idx % side);
    const double y = 28.0 + cell * static_cast<double>(idx / side);
    s << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
      << "\" fill=\"" << palette(labels[idx]) << "\"><title>" << (labels[idx] + 1) << "</title></rect>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write(const std::string& svg, const std::filesystem::path& path) { write_text(svg, path); }

}  // namespace lnncomm::svg
