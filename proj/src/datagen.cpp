#include "lnncomm/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"

namespace lnncomm {

GroundTruthNetwork gen_ground_truth(const GroundTruthSpec& spec, std::uint64_t seed) {
  if (spec.modules == 0 || spec.units_per_module == 0)
    throw Error(ErrorKind::Config, "ground truth needs at least one module with one unit");
  const std::size_t width = spec.modules * spec.units_per_module;
  LayerTopology topo;
  topo.sizes.assign(spec.hidden_layers + 2, width);

  GroundTruthNetwork gt;
  gt.params = NetworkParams(topo);
  gt.modules = spec.modules;
  gt.module.assign(topo.depth(), std::vector<std::size_t>(width));
  for (auto& layer : gt.module)
    for (std::size_t k = 0; k < width; ++k) layer[k] = k / spec.units_per_module;

  const auto u = static_cast<Eigen::Index>(spec.units_per_module);
  for (std::size_t m = 0; m < spec.modules; ++m) {
    Rng rng = make_rng(seed, m);
    const auto off = static_cast<Eigen::Index>(m) * u;
    for (std::size_t d = 0; d + 1 < topo.depth(); ++d) {
      MatrixXd& w = gt.params.weights[d];
      for (Eigen::Index i = 0; i < u; ++i)
        for (Eigen::Index j = 0; j < u; ++j) {
          const double v = normal_variance(rng, 0.0, spec.weight_variance);
          w(off + i, off + j) = std::abs(v) <= spec.prune_threshold ? 0.0 : v;
        }
      for (Eigen::Index j = 0; j < u; ++j) gt.params.biases[d](off + j) = normal_variance(rng, 0.0, spec.bias_variance);
    }
  }
  return gt;
}

Dataset gen_synthetic_dataset(const NetworkParams& truth, std::size_t samples, std::uint64_t seed,
                              const SyntheticSpec& spec) {
  truth.validate();
  Rng rng = make_rng(seed, 0);
  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(truth.input_dim()));
  for (Eigen::Index n = 0; n < data.inputs.rows(); ++n)
    for (Eigen::Index i = 0; i < data.inputs.cols(); ++i) data.inputs(n, i) = normal_variance(rng, 0.0, spec.input_variance);
  data.outputs = forward_batch(truth, data.inputs).back();
  for (Eigen::Index n = 0; n < data.outputs.rows(); ++n)
    for (Eigen::Index j = 0; j < data.outputs.cols(); ++j) data.outputs(n, j) += normal_variance(rng, 0.0, spec.noise_variance);
  return data;
}

// ---------------------------------------------------------------------------

const std::vector<DiagramTemplate>& diagram_templates() {
  static const std::vector<DiagramTemplate> templates = {
      {1, "Rectangle", {{0.2, 0.2}, {0.2, 0.8}, {0.8, 0.8}, {0.8, 0.2}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {2, "Heart", {{0.1, 0.5}, {0.3, 0.8}, {0.5, 0.6}, {0.7, 0.8}, {0.9, 0.5}, {0.5, 0.2}},
       {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}},
      {3, "Triangle", {{0.5, 0.2}, {0.8, 0.8}, {0.2, 0.8}}, {{0, 1}, {1, 2}, {2, 0}}},
      {4, "Cross", {{0.2, 0.2}, {0.8, 0.8}, {0.2, 0.8}, {0.8, 0.2}}, {{0, 1}, {2, 3}}},
      {5, "Line", {{0.2, 0.8}, {0.8, 0.2}}, {{0, 1}}},
      {6, "Diamond", {{0.5, 0.9}, {0.9, 0.5}, {0.5, 0.1}, {0.1, 0.5}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {7, "Arrow", {{0.4, 0.9}, {0.1, 0.5}, {0.4, 0.1}, {0.9, 0.5}}, {{0, 1}, {1, 2}, {1, 3}}},
      {8, "Ribbon", {{0.2, 0.2}, {0.8, 0.8}, {0.8, 0.2}, {0.2, 0.8}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {9, "Face", {{0.3, 0.8}, {0.3, 0.6}, {0.7, 0.8}, {0.7, 0.6}, {0.2, 0.3}, {0.8, 0.3}}, {{0, 1}, {2, 3}, {4, 5}}},
      {10, "Two lines", {{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.8}, {0.8, 0.8}}, {{0, 1}, {2, 3}}},
  };
  return templates;
}

const DiagramTemplate& diagram_template(std::size_t class_id) {
  if (class_id < 1 || class_id > kDiagramClasses)
    throw Error(ErrorKind::Config, "diagram class " + std::to_string(class_id) + " outside 1..10");
  return diagram_templates()[class_id - 1];
}

namespace {

// Liang-Barsky clip of segment a-b against the unit square.
bool clip_unit_square(Point2& a, Point2& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x, 1.0 - a.x, a.y, 1.0 - a.y};
  for (int e = 0; e < 4; ++e) {
    if (p[e] == 0.0) {
      if (q[e] < 0.0) return false;
      continue;
    }
    const double r = q[e] / p[e];
    if (p[e] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const Point2 start{a.x + t0 * dx, a.y + t0 * dy};
  const Point2 end{a.x + t1 * dx, a.y + t1 * dy};
  a = start;
  b = end;
  return true;
}

int to_pixel(double coord) {
  const int p = static_cast<int>(std::floor(coord * 19.999));
  return std::clamp(p, 0, static_cast<int>(kDiagramSide) - 1);
}

void draw_line(Image& img, int c0, int r0, int c1, int r1) {
  // Canonical endpoint order so a segment and its reverse rasterize identically.
  if (std::tie(r1, c1) < std::tie(r0, c0)) {
    std::swap(r0, r1);
    std::swap(c0, c1);
  }
  const int dc = std::abs(c1 - c0), sc = c0 < c1 ? 1 : -1;
  const int dr = -std::abs(r1 - r0), sr = r0 < r1 ? 1 : -1;
  int err = dc + dr;
  for (;;) {
    img[static_cast<std::size_t>(r0) * kDiagramSide + static_cast<std::size_t>(c0)] = 1.0;
    if (c0 == c1 && r0 == r1) break;
    const int e2 = 2 * err;
    if (e2 >= dr) {
      err += dr;
      c0 += sc;
    }
    if (e2 <= dc) {
      err += dc;
      r0 += sr;
    }
  }
}

}  // namespace

Image rasterize(const std::vector<Point2>& points, const std::vector<std::pair<std::size_t, std::size_t>>& segments) {
  Image img{};
  for (const auto& [from, to] : segments) {
    Point2 a = points.at(from);
    Point2 b = points.at(to);
    if (!clip_unit_square(a, b)) continue;
    draw_line(img, to_pixel(a.x), to_pixel(a.y), to_pixel(b.x), to_pixel(b.y));
  }
  return img;
}

Image gen_diagram(std::size_t class_id, Rng& rng, const DiagramSpec& spec) {
  const DiagramTemplate& t = diagram_template(class_id);
  std::vector<Point2> points = t.points;
  if (spec.point_sd > 0.0) {
    std::normal_distribution<double> jitter(0.0, spec.point_sd);
    for (auto& p : points) {
      p.x += jitter(rng);
      p.y += jitter(rng);
    }
  }
  Image img = rasterize(points, t.segments);
  for (double& px : img) px += normal_variance(rng, 0.0, spec.pixel_noise_variance);
  return img;
}

Dataset gen_diagram_dataset(std::size_t n_per_class, std::uint64_t seed, const DiagramSpec& spec) {
  const std::size_t total = n_per_class * kDiagramClasses;
  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(kDiagramPixels));
  data.outputs = MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(kDiagramClasses));
  data.classes.resize(total);
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t cls = s / n_per_class;
    Rng rng = make_rng(seed, s);
    const Image img = gen_diagram(cls + 1, rng, spec);
    const auto row = static_cast<Eigen::Index>(s);
    for (std::size_t p = 0; p < kDiagramPixels; ++p) data.inputs(row, static_cast<Eigen::Index>(p)) = img[p];
    data.outputs(row, static_cast<Eigen::Index>(cls)) = 1.0;
    data.classes[s] = cls;
  }
  return data;
}

void write_pgm(const Image& image, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "P2\n" << kDiagramSide << ' ' << kDiagramSide << "\n255\n";
  for (std::size_t r = 0; r < kDiagramSide; ++r) {
    for (std::size_t c = 0; c < kDiagramSide; ++c) {
      const double v = std::clamp(image[r * kDiagramSide + c], 0.0, 1.0);
      out << (c ? " " : "") << static_cast<int>(std::lround(v * 255.0));
    }
    out << '\n';
  }
  write_text(out.str(), path);
}

// ---------------------------------------------------------------------------

std::size_t window_input_index(std::size_t window, std::size_t columns, std::size_t column, std::size_t lag) {
  if (lag < 1 || lag > window || column >= columns) throw Error(ErrorKind::Config, "lag or column out of range");
  return (window - lag) * columns + column;
}

Dataset window_timeseries(const TimeSeries& series, std::size_t window) {
  const std::size_t t_len = series.length();
  const std::size_t f = series.columns();
  if (window < 1) throw Error(ErrorKind::Config, "window must be >= 1");
  if (t_len <= window)
    throw Error(ErrorKind::Data, "series of length " + std::to_string(t_len) + " is too short for window " +
                                     std::to_string(window));
  const std::size_t count = t_len - window;
  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(window * f));
  data.outputs.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(f));
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t target = s + window;
    const auto row = static_cast<Eigen::Index>(s);
    for (std::size_t p = 0; p < window; ++p)
      for (std::size_t c = 0; c < f; ++c)
        data.inputs(row, static_cast<Eigen::Index>(p * f + c)) =
            series.values(static_cast<Eigen::Index>(target - window + p), static_cast<Eigen::Index>(c));
    data.outputs.row(row) = series.values.row(static_cast<Eigen::Index>(target));
  }
  return data;
}

VectorXd seasonal_component(std::size_t length, std::size_t column, const SeasonalSpec& spec) {
  const double phase = 0.7 * static_cast<double>(column);
  VectorXd v(static_cast<Eigen::Index>(length));
  for (std::size_t t = 0; t < length; ++t)
    v(static_cast<Eigen::Index>(t)) =
        spec.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / spec.period + phase);
  return v;
}

TimeSeries gen_seasonal_series(std::size_t length, std::size_t columns, std::uint64_t seed, const SeasonalSpec& spec) {
  if (length == 0 || columns == 0) throw Error(ErrorKind::Config, "series needs positive length and column count");
  if (!(spec.period > 0.0)) throw Error(ErrorKind::Config, "seasonal period must be > 0");
  TimeSeries series;
  series.values.resize(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(columns));
  for (std::size_t c = 0; c < columns; ++c) {
    series.labels.push_back("s" + std::to_string(c));
    const VectorXd seasonal = seasonal_component(length, c, spec);
    Rng rng = make_rng(seed, c);
    std::normal_distribution<double> shock(0.0, 1.0);
    double noise = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      noise = spec.ar_coefficient * noise + spec.noise_sd * shock(rng);
      series.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
          spec.level + spec.trend * static_cast<double>(t) + seasonal(static_cast<Eigen::Index>(t)) + noise;
    }
  }
  return series;
}

TimeSeries load_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open time series file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Data, path.string() + ": empty file");
  TimeSeries series;
  series.labels = split_csv_line(line);
  const std::size_t cols = series.labels.size();

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != cols)
      throw Error(ErrorKind::Data, path.string() + ": row " + std::to_string(line_no) + " has " +
                                       std::to_string(cells.size()) + " cells, header has " + std::to_string(cols));
    std::vector<double> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& cell = cells[c];
      const char* end = cell.data() + cell.size();
      auto [ptr, ec] = std::from_chars(cell.data(), end, row[c]);
      if (ec != std::errc() || ptr != end || !std::isfinite(row[c]))
        throw Error(ErrorKind::Data, path.string() + ": non-numeric cell '" + cell + "' at row " +
                                         std::to_string(line_no) + ", column " + std::to_string(c + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Data, path.string() + ": no data rows");
  series.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t c = 0; c < cols; ++c)
      series.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = rows[t][c];
  return series;
}

void write_timeseries_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::vector<std::string> header = series.labels;
  if (header.size() != series.columns()) {
    header.clear();
    for (std::size_t c = 0; c < series.columns(); ++c) header.push_back("s" + std::to_string(c));
  }
  write_matrix_csv(series.values, path, header);
}

}  // namespace lnncomm
