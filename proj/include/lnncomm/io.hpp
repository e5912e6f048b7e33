#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnncomm/community_em.hpp"
#include "lnncomm/network.hpp"
#include "lnncomm/trainer.hpp"

namespace lnncomm {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "lnncomm-model";

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string build_id;
};

struct ModelArchive {
  int version = kModelFormatVersion;
  NetworkParams params;
  std::optional<NormInfo> norm;
  Provenance provenance;
};

void save_model(const ModelArchive& archive, const std::filesystem::path& path);
ModelArchive load_model(const std::filesystem::path& path);

nlohmann::json model_to_json(const ModelArchive& archive);
ModelArchive model_from_json(const nlohmann::json& doc);

// Datasets: header x0..x{M-1},y0..y{N-1}[,class]; one sample per row.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Writes a numeric matrix with a header row. Empty `header` numbers the
/// columns 0..cols-1; `row_labels`, when given, become a leading column.
void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path, const std::vector<std::string>& header = {},
                      const std::vector<std::string>& row_labels = {}, const std::string& corner = "row");

void write_trace_csv(const ErrorTrace& trace, const std::filesystem::path& path);

/// JSON array with one object per unit: {layer, unit_index, community, q_row,
/// expected_log_likelihood}. `community` is 1-based, `unit_index` 0-based.
nlohmann::json assignments_to_json(const std::vector<CommunityAssignment>& assignments);
std::vector<CommunityAssignment> assignments_from_json(const nlohmann::json& doc);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// Hex-encoded SHA-256.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

/// Splits one CSV line on commas (no quoting support; values are numeric or
/// simple labels).
std::vector<std::string> split_csv_line(const std::string& line);

/// Formats a double with round-trip precision.
std::string format_double(double v);

}  // namespace lnncomm
