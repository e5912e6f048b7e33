#include "lnncomm/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "lnncomm/error.hpp"

namespace lnncomm {

using nlohmann::json;

namespace {

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

VectorXd vector_from(const json& a, const std::string& what) {
  if (!a.is_array()) throw Error(ErrorKind::Data, what + " is not an array");
  VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw Error(ErrorKind::Data, what + " holds a non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

MatrixXd matrix_from(const json& rows, std::size_t expect_rows, std::size_t expect_cols, const std::string& what) {
  if (!rows.is_array() || rows.size() != expect_rows)
    throw Error(ErrorKind::Dimension, what + " should have " + std::to_string(expect_rows) + " rows");
  MatrixXd m(static_cast<Eigen::Index>(expect_rows), static_cast<Eigen::Index>(expect_cols));
  for (std::size_t i = 0; i < expect_rows; ++i) {
    const VectorXd r = vector_from(rows[i], what);
    if (static_cast<std::size_t>(r.size()) != expect_cols)
      throw Error(ErrorKind::Dimension, what + " row " + std::to_string(i) + " should have " +
                                            std::to_string(expect_cols) + " entries");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorKind::Data, std::string("missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorKind::Numerical, "cannot format number");
  return std::string(buf.data(), ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_json(const json& doc, const std::filesystem::path& path) { write_text(doc.dump(2) + "\n", path); }

json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, path.string() + ": parse error: " + e.what());
  }
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Io, "SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

// ---------------------------------------------------------------------------
// Model archive

json model_to_json(const ModelArchive& archive) {
  const NetworkParams& p = archive.params;
  json doc;
  doc["format"] = kModelFormatName;
  doc["version"] = archive.version;
  doc["topology"] = p.topology().sizes;
  doc["weights"] = json::array();
  doc["biases"] = json::array();
  for (std::size_t d = 0; d < p.weights.size(); ++d) {
    doc["weights"].push_back(matrix_json(p.weights[d]));
    doc["biases"].push_back(vector_json(p.biases[d]));
  }
  if (archive.norm) {
    const NormInfo& n = *archive.norm;
    doc["norm_info"] = {{"x_min", n.x_min},
                        {"x_max", n.x_max},
                        {"y_min", n.y_min},
                        {"y_max", n.y_max},
                        {"input_lo", vector_json(n.input_lo)},
                        {"input_hi", vector_json(n.input_hi)},
                        {"output_lo", vector_json(n.output_lo)},
                        {"output_hi", vector_json(n.output_hi)}};
  } else {
    doc["norm_info"] = nullptr;
  }
  doc["provenance"] = {{"config_hash", archive.provenance.config_hash},
                       {"seed", archive.provenance.seed},
                       {"build_id", archive.provenance.build_id}};
  return doc;
}

ModelArchive model_from_json(const json& doc) {
  try {
    if (!doc.is_object() || member(doc, "format") != kModelFormatName)
      throw Error(ErrorKind::Data, "not an lnncomm model archive");
    const int version = member(doc, "version").get<int>();
    if (version != kModelFormatVersion)
      throw Error(ErrorKind::Data, "unsupported version " + std::to_string(version) + " (expected " +
                                       std::to_string(kModelFormatVersion) + ")");
    ModelArchive archive;
    archive.version = version;
    LayerTopology topo;
    topo.sizes = member(doc, "topology").get<std::vector<std::size_t>>();
    topo.validate();
    const json& weights = member(doc, "weights");
    const json& biases = member(doc, "biases");
    if (!weights.is_array() || !biases.is_array() || weights.size() + 1 != topo.depth() ||
        biases.size() + 1 != topo.depth())
      throw Error(ErrorKind::Dimension, "weight/bias layer count does not match the topology");
    for (std::size_t d = 0; d + 1 < topo.depth(); ++d) {
      archive.params.weights.push_back(
          matrix_from(weights[d], topo.sizes[d], topo.sizes[d + 1], "weights[" + std::to_string(d) + "]"));
      VectorXd b = vector_from(biases[d], "biases[" + std::to_string(d) + "]");
      if (static_cast<std::size_t>(b.size()) != topo.sizes[d + 1])
        throw Error(ErrorKind::Dimension, "biases[" + std::to_string(d) + "] has the wrong length");
      archive.params.biases.push_back(std::move(b));
    }
    archive.params.validate();

    const json& norm = member(doc, "norm_info");
    if (!norm.is_null()) {
      NormInfo n;
      n.x_min = member(norm, "x_min").get<double>();
      n.x_max = member(norm, "x_max").get<double>();
      n.y_min = member(norm, "y_min").get<double>();
      n.y_max = member(norm, "y_max").get<double>();
      n.input_lo = vector_from(member(norm, "input_lo"), "input_lo");
      n.input_hi = vector_from(member(norm, "input_hi"), "input_hi");
      n.output_lo = vector_from(member(norm, "output_lo"), "output_lo");
      n.output_hi = vector_from(member(norm, "output_hi"), "output_hi");
      if (static_cast<std::size_t>(n.input_lo.size()) != topo.input_dim() || n.input_hi.size() != n.input_lo.size() ||
          static_cast<std::size_t>(n.output_lo.size()) != topo.output_dim() || n.output_hi.size() != n.output_lo.size())
        throw Error(ErrorKind::Dimension, "norm_info ranges do not match the topology");
      archive.norm = n;
    }
    const json& prov = member(doc, "provenance");
    archive.provenance.config_hash = member(prov, "config_hash").get<std::string>();
    archive.provenance.seed = member(prov, "seed").get<std::uint64_t>();
    archive.provenance.build_id = member(prov, "build_id").get<std::string>();
    return archive;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("malformed model archive: ") + e.what());
  }
}

void save_model(const ModelArchive& archive, const std::filesystem::path& path) {
  write_json(model_to_json(archive), path);
}

ModelArchive load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, "model file not found: " + path.string());
  return model_from_json(read_json(path));
}

// ---------------------------------------------------------------------------
// CSV

void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::string>& row_labels, const std::string& corner) {
  const bool labelled = !row_labels.empty();
  if (labelled && row_labels.size() != static_cast<std::size_t>(m.rows()))
    throw Error(ErrorKind::Dimension, "row label count does not match the matrix");
  if (!header.empty() && header.size() != static_cast<std::size_t>(m.cols()))
    throw Error(ErrorKind::Dimension, "header length does not match the matrix");
  std::ostringstream out;
  if (labelled) out << corner << (m.cols() ? "," : "");
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    out << (j ? "," : "") << (header.empty() ? std::to_string(j) : header[static_cast<std::size_t>(j)]);
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (labelled) out << row_labels[static_cast<std::size_t>(i)] << (m.cols() ? "," : "");
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  write_text(out.str(), path);
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ostringstream out;
  const std::size_t m = data.input_dim(), n = data.output_dim();
  const bool with_class = !data.classes.empty();
  for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << 'x' << i;
  for (std::size_t j = 0; j < n; ++j) out << (m + j ? "," : "") << 'y' << j;
  if (with_class) out << ",class";
  out << '\n';
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << format_double(data.inputs(r, static_cast<Eigen::Index>(i)));
    for (std::size_t j = 0; j < n; ++j)
      out << (m + j ? "," : "") << format_double(data.outputs(r, static_cast<Eigen::Index>(j)));
    if (with_class) out << ',' << data.classes[s];
    out << '\n';
  }
  write_text(out.str(), path);
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Data, path.string() + ": empty file");
  const auto header = split_csv_line(line);
  std::size_t m = 0, n = 0;
  bool with_class = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h == "x" + std::to_string(m) && n == 0 && !with_class) {
      ++m;
    } else if (h == "y" + std::to_string(n) && !with_class) {
      ++n;
    } else if (h == "class" && c + 1 == header.size()) {
      with_class = true;
    } else {
      throw Error(ErrorKind::Data, path.string() + ": unexpected header column '" + h + "'");
    }
  }
  if (m == 0 || n == 0) throw Error(ErrorKind::Data, path.string() + ": header needs x0.. and y0.. columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> classes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::Data, path.string() + ": row " + std::to_string(line_no) + " has " +
                                       std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    std::vector<double> row(m + n);
    for (std::size_t c = 0; c < m + n; ++c) {
      const std::string& cell = cells[c];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorKind::Data, path.string() + ": non-numeric cell '" + cell + "' at row " +
                                         std::to_string(line_no) + ", column " + std::to_string(c + 1));
    }
    if (with_class) {
      std::size_t label = 0;
      const std::string& cell = cells.back();
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorKind::Data, path.string() + ": bad class label at row " + std::to_string(line_no));
      classes.push_back(label);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Data, path.string() + ": no data rows");

  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  data.outputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < rows.size(); ++s) {
    for (std::size_t i = 0; i < m; ++i) data.inputs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = rows[s][i];
    for (std::size_t j = 0; j < n; ++j)
      data.outputs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = rows[s][m + j];
  }
  data.classes = std::move(classes);
  return data;
}

void write_trace_csv(const ErrorTrace& trace, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "step,train_error,test_error\n";
  for (const auto& p : trace)
    out << p.step << ',' << format_double(p.train_error) << ',' << (p.test_error ? format_double(*p.test_error) : "")
        << '\n';
  write_text(out.str(), path);
}

// ---------------------------------------------------------------------------
// Community assignments

json assignments_to_json(const std::vector<CommunityAssignment>& assignments) {
  json units = json::array();
  for (const auto& a : assignments) {
    for (std::size_t k = 0; k < a.community.size(); ++k) {
      json q_row = json::array();
      for (Eigen::Index c = 0; c < a.q.cols(); ++c) q_row.push_back(a.q(static_cast<Eigen::Index>(k), c));
      units.push_back({{"layer", a.depth},
                       {"unit_index", k},
                       {"community", a.community[k] + 1},
                       {"q_row", std::move(q_row)},
                       {"expected_log_likelihood", a.expected_log_likelihood},
                       {"best_restart", a.best_restart}});
    }
  }
  return units;
}

std::vector<CommunityAssignment> assignments_from_json(const json& doc) {
  try {
    if (!doc.is_array()) throw Error(ErrorKind::Data, "assignment document must be an array");
    std::vector<CommunityAssignment> out;
    std::vector<std::vector<VectorXd>> q_rows;
    for (const auto& unit : doc) {
      const auto layer = member(unit, "layer").get<std::size_t>();
      const auto index = member(unit, "unit_index").get<std::size_t>();
      const auto community = member(unit, "community").get<std::size_t>();
      if (layer < 1 || community < 1) throw Error(ErrorKind::Data, "layer and community are 1-based");
      if (out.empty() || out.back().depth != layer) {
        if (!out.empty() && layer != out.back().depth + 1)
          throw Error(ErrorKind::Data, "assignment layers must be listed in increasing order");
        CommunityAssignment a;
        a.depth = layer;
        a.expected_log_likelihood = member(unit, "expected_log_likelihood").get<double>();
        a.best_restart = unit.value("best_restart", std::size_t{0});
        out.push_back(std::move(a));
        q_rows.emplace_back();
      }
      CommunityAssignment& a = out.back();
      if (index != a.community.size()) throw Error(ErrorKind::Data, "unit indices must be consecutive from 0");
      a.community.push_back(community - 1);
      q_rows.back().push_back(vector_from(member(unit, "q_row"), "q_row"));
    }
    for (std::size_t l = 0; l < out.size(); ++l) {
      const auto& rows = q_rows[l];
      const auto c = rows.front().size();
      out[l].communities = static_cast<std::size_t>(c);
      out[l].q.resize(static_cast<Eigen::Index>(rows.size()), c);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != c) throw Error(ErrorKind::Data, "q rows differ in length");
        out[l].q.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("malformed assignment document: ") + e.what());
  }
}

}  // namespace lnncomm
