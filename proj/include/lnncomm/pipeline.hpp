#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnncomm/community_em.hpp"
#include "lnncomm/config.hpp"
#include "lnncomm/datagen.hpp"
#include "lnncomm/io.hpp"
#include "lnncomm/linear_baseline.hpp"
#include "lnncomm/roles.hpp"

namespace lnncomm {

/// Raw (un-normalized) data for one experiment plus display labels.
struct ExperimentData {
  Dataset train;
  Dataset test;
  std::optional<GroundTruthNetwork> truth;
  std::optional<TimeSeries> series;
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;
};

std::string build_id();

ExperimentData prepare_data(const ExperimentConfig& config);
LayerTopology experiment_topology(const ExperimentConfig& config, const ExperimentData& data);

struct TrainedNetwork {
  ModelArchive archive;
  ErrorTrace trace;
  double train_error = 0.0;
  double test_error = 0.0;
};

TrainedNetwork train_network(const ExperimentConfig& config, const ExperimentData& data);

std::vector<CommunityAssignment> detect_communities(const ExperimentConfig& config, const NetworkParams& params);

RoleReport compute_roles(const ExperimentConfig& config, const ModelArchive& model, const ExperimentData& data,
                         const std::vector<CommunityAssignment>& assignments);

// Artifact writers. Each returns nothing and writes below `dir`.
void write_data_artifacts(const ExperimentConfig& config, const ExperimentData& data, const std::filesystem::path& dir);
void write_training_artifacts(const TrainedNetwork& trained, const std::filesystem::path& dir);
void write_community_artifacts(const ExperimentConfig& config, const NetworkParams& params,
                               const std::vector<CommunityAssignment>& assignments, const std::filesystem::path& dir);
void write_role_artifacts(const RoleReport& report, const std::vector<std::string>& input_labels,
                          const std::vector<std::string>& output_labels, const std::filesystem::path& dir);
void write_figures(const ExperimentConfig& config, const NetworkParams& params,
                   const std::vector<CommunityAssignment>& assignments, const std::filesystem::path& dir);
void write_baseline_artifacts(const ExperimentConfig& config, const TimeSeries& series,
                              const std::vector<std::string>& input_labels, const std::vector<std::string>& output_labels,
                              const std::filesystem::path& dir);

nlohmann::json role_report_to_json(const RoleReport& report);

/// Lists every regular file below `dir` except manifest.json, sorted by
/// relative path, with its SHA-256 and size, and writes dir/manifest.json.
nlohmann::json write_manifest(const std::filesystem::path& dir);

struct RunSummary {
  std::filesystem::path out_dir;
  nlohmann::json summary;
  nlohmann::json manifest;
};

/// gen/ingest -> normalize -> train -> detect per layer -> roles -> reports.
/// Failures are rethrown as Error with the stage name prefixed.
RunSummary run_experiment(const ExperimentConfig& config);

}  // namespace lnncomm
