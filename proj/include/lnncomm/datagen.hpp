#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lnncomm/network.hpp"
#include "lnncomm/random.hpp"

namespace lnncomm {

// ---------------------------------------------------------------------------
// Ground-truth modular network

struct GroundTruthSpec {
  std::size_t modules = 3;
  std::size_t units_per_module = 15;  // per layer
  std::size_t hidden_layers = 2;
  double weight_variance = 1.0;
  double bias_variance = 0.5;
  double prune_threshold = 1.0;  // weights with |w| <= threshold are deleted
};

struct GroundTruthNetwork {
  NetworkParams params;
  /// module[d-1][k]: module of unit k in layer d. Module m owns units
  /// [m * units_per_module, (m + 1) * units_per_module) in every layer.
  std::vector<std::vector<std::size_t>> module;
  std::size_t modules = 0;
};

GroundTruthNetwork gen_ground_truth(const GroundTruthSpec& spec, std::uint64_t seed);

struct SyntheticSpec {
  double input_variance = 3.0;
  double noise_variance = 0.05;
};

/// X ~ N(0, input_variance) per dimension, Y = f(X, w_hat) + N(0, noise_variance).
Dataset gen_synthetic_dataset(const NetworkParams& truth, std::size_t samples, std::uint64_t seed,
                              const SyntheticSpec& spec = {});

// ---------------------------------------------------------------------------
// Diagram images

inline constexpr std::size_t kDiagramSide = 20;
inline constexpr std::size_t kDiagramPixels = kDiagramSide * kDiagramSide;
inline constexpr std::size_t kDiagramClasses = 10;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct DiagramTemplate {
  std::size_t class_id = 0;  // 1..10
  std::string name;
  std::vector<Point2> points;
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // 0-based point indices
};

const std::vector<DiagramTemplate>& diagram_templates();
const DiagramTemplate& diagram_template(std::size_t class_id);

struct DiagramSpec {
  double point_sd = 0.07;         // standard deviation of each point coordinate
  double pixel_noise_variance = 0.1;
};

using Image = std::array<double, kDiagramPixels>;  // row-major, row = floor(y * 19.999)

/// Binary raster of the segments between `points`; segments are clipped to
/// the unit square.
Image rasterize(const std::vector<Point2>& points, const std::vector<std::pair<std::size_t, std::size_t>>& segments);

Image gen_diagram(std::size_t class_id, Rng& rng, const DiagramSpec& spec = {});

/// n_per_class images of every class, class-major; targets are one-hot and
/// `classes` holds the 0-based labels. Sample s uses stream (seed, s).
Dataset gen_diagram_dataset(std::size_t n_per_class, std::uint64_t seed, const DiagramSpec& spec = {});

void write_pgm(const Image& image, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Time series

struct TimeSeries {
  MatrixXd values;  // T x F, row t is month t
  std::vector<std::string> labels;

  std::size_t length() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t columns() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

/// Input index of column `column` at `lag` months before the target
/// (lag in 1..window): (window - lag) * F + column.
std::size_t window_input_index(std::size_t window, std::size_t columns, std::size_t column, std::size_t lag);

/// One sample per target month t = window..T-1 (0-based); the input is months
/// t-window..t-1, oldest first, all columns in file order per month.
Dataset window_timeseries(const TimeSeries& series, std::size_t window);

struct SeasonalSpec {
  double period = 12.0;
  double amplitude = 10.0;
  double trend = 0.05;       // per month
  double level = 100.0;
  double ar_coefficient = 0.6;
  double noise_sd = 2.0;
};

/// Deterministic part of column `column`: the annual sinusoid only.
VectorXd seasonal_component(std::size_t length, std::size_t column, const SeasonalSpec& spec);

/// level + trend * t + seasonal + AR(1) noise, per column with a column phase.
TimeSeries gen_seasonal_series(std::size_t length, std::size_t columns, std::uint64_t seed,
                               const SeasonalSpec& spec = {});

TimeSeries load_timeseries_csv(const std::filesystem::path& path);
void write_timeseries_csv(const TimeSeries& series, const std::filesystem::path& path);

}  // namespace lnncomm
