#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnncomm/community_em.hpp"
#include "lnncomm/datagen.hpp"
#include "lnncomm/trainer.hpp"

namespace lnncomm {

enum class ExperimentKind { Synthetic, Timeseries, Diagrams, Custom };

const char* to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(const std::string& name);

/// Everything one pipeline run needs. Hyperparameters read from JSON under
/// either their short symbol or their long name:
///
///   n1 / train_samples           a1 / iterations_per_sample
///   eta / step_size              lambda / lasso_weight
///   epsilon1 / convergence_epsilon
///   xi / weight_threshold        C / communities
///   a2 / em_iterations           a3 / em_restarts
///   x_min / input_min            x_max / input_max
///   y_min / output_min           y_max / output_max
///
/// For diagrams n1 counts images per class; for timeseries it is derived from
/// the windowed series and may not be set.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Synthetic;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "lnncomm-out";
  unsigned threads = 1;

  std::size_t n1 = 5000;
  std::size_t test_samples = 1000;  // per class for diagrams
  std::vector<std::size_t> hidden;  // hidden layer widths

  GroundTruthSpec ground_truth{};
  SyntheticSpec synthetic{};

  std::filesystem::path series_csv;  // empty: generate a seasonal series
  std::size_t series_length = 541;
  std::size_t series_columns = 3;
  std::size_t window = 36;
  double train_fraction = 0.8;
  SeasonalSpec seasonal{};
  std::vector<std::size_t> baseline_windows;

  DiagramSpec diagram{};

  std::filesystem::path train_csv;  // custom experiments
  std::filesystem::path test_csv;

  NormBounds bounds{};
  TrainConfig train{};
  double init_variance = 0.5;
  double xi = 0.3;
  EMConfig em{};
  std::vector<std::size_t> communities_per_layer;
  bool roles_on_test = false;

  /// Throws Error(Config) naming the offending key.
  void validate() const;
};

ExperimentConfig default_config(ExperimentKind kind);

/// Starts from default_config(doc["experiment"]) and overrides present keys.
/// Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lnncomm
