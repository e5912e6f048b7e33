#include "lnncomm/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include "lnncomm/adjacency.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/matching.hpp"
#include "lnncomm/random.hpp"
#include "lnncomm/svg.hpp"

namespace lnncomm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Stream : std::uint64_t {
  kTruthStream = 10,
  kTrainDataStream = 11,
  kTestDataStream = 12,
  kSeriesStream = 15,
  kInitStream = 20,
  kTrainStream = 21,
  kDetectStream = 30,
};

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    throw Error(ErrorKind::Numerical, std::string(name) + ": out of memory");
  }
}

std::vector<std::string> numbered(const char* prefix, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::string layer_name(std::size_t depth) { return "layer" + std::to_string(depth); }

std::vector<std::string> community_names(const LayerRoles& layer) {
  std::vector<std::string> out;
  for (const auto& c : layer.communities) out.push_back("c" + std::to_string(c.community + 1));
  return out;
}

json vector_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::string build_id() { return "lnncomm-" LNNCOMM_VERSION_STRING; }

ExperimentData prepare_data(const ExperimentConfig& config) {
  ExperimentData data;
  const std::uint64_t seed = config.seed;
  switch (config.kind) {
    case ExperimentKind::Synthetic: {
      data.truth = gen_ground_truth(config.ground_truth, derive_seed(seed, kTruthStream));
      data.train = gen_synthetic_dataset(data.truth->params, config.n1, derive_seed(seed, kTrainDataStream),
                                         config.synthetic);
      if (config.test_samples > 0)
        data.test = gen_synthetic_dataset(data.truth->params, config.test_samples, derive_seed(seed, kTestDataStream),
                                          config.synthetic);
      data.input_labels = numbered("x", data.train.input_dim());
      data.output_labels = numbered("y", data.train.output_dim());
      break;
    }
    case ExperimentKind::Timeseries: {
      data.series = config.series_csv.empty()
                        ? gen_seasonal_series(config.series_length, config.series_columns,
                                              derive_seed(seed, kSeriesStream), config.seasonal)
                        : load_timeseries_csv(config.series_csv);
      if (data.series->length() <= config.window)
        throw Error(ErrorKind::Data, "series has " + std::to_string(data.series->length()) +
                                         " months, need more than window " + std::to_string(config.window));
      auto split = split_chronological(window_timeseries(*data.series, config.window), config.train_fraction);
      if (split.train.empty()) throw Error(ErrorKind::Data, "chronological split left no training samples");
      data.train = std::move(split.train);
      data.test = std::move(split.test);
      const std::size_t F = data.series->columns();
      data.input_labels.resize(config.window * F);
      for (std::size_t lag = 1; lag <= config.window; ++lag)
        for (std::size_t col = 0; col < F; ++col)
          data.input_labels[window_input_index(config.window, F, col, lag)] =
              data.series->labels[col] + "[t-" + std::to_string(lag) + "]";
      data.output_labels = data.series->labels;
      break;
    }
    case ExperimentKind::Diagrams: {
      data.train = gen_diagram_dataset(config.n1, derive_seed(seed, kTrainDataStream), config.diagram);
      if (config.test_samples > 0)
        data.test = gen_diagram_dataset(config.test_samples, derive_seed(seed, kTestDataStream), config.diagram);
      for (std::size_t r = 0; r < kDiagramSide; ++r)
        for (std::size_t c = 0; c < kDiagramSide; ++c)
          data.input_labels.push_back("p" + std::to_string(r) + "_" + std::to_string(c));
      for (const auto& t : diagram_templates()) data.output_labels.push_back(t.name);
      break;
    }
    case ExperimentKind::Custom: {
      data.train = read_dataset_csv(config.train_csv);
      if (!config.test_csv.empty()) {
        data.test = read_dataset_csv(config.test_csv);
        if (data.test.input_dim() != data.train.input_dim() || data.test.output_dim() != data.train.output_dim())
          throw Error(ErrorKind::Dimension, "test set dimensions differ from the training set");
      }
      if (data.train.empty()) throw Error(ErrorKind::Data, "training set is empty");
      data.input_labels = numbered("x", data.train.input_dim());
      data.output_labels = numbered("y", data.train.output_dim());
      break;
    }
  }
  data.train.validate();
  if (!data.test.empty()) data.test.validate();
  return data;
}

LayerTopology experiment_topology(const ExperimentConfig& config, const ExperimentData& data) {
  LayerTopology topo;
  topo.sizes.push_back(data.train.input_dim());
  if (config.hidden.empty() && data.truth) {
    const auto truth = data.truth->params.topology();
    topo.sizes.insert(topo.sizes.end(), truth.sizes.begin() + 1, truth.sizes.end() - 1);
  } else {
    topo.sizes.insert(topo.sizes.end(), config.hidden.begin(), config.hidden.end());
  }
  topo.sizes.push_back(data.train.output_dim());
  topo.validate();
  return topo;
}

TrainedNetwork train_network(const ExperimentConfig& config, const ExperimentData& data) {
  const Dataset train_set = normalize_dataset(data.train, config.bounds);
  std::optional<Dataset> test_set;
  if (!data.test.empty()) test_set = apply_normalization(data.test, *train_set.norm);

  const auto topo = experiment_topology(config, data);
  const auto initial = init_params(topo, derive_seed(config.seed, kInitStream), config.init_variance);

  TrainConfig tc = config.train;
  tc.seed = derive_seed(config.seed, kTrainStream);
  auto result = train(initial, train_set, test_set ? &*test_set : nullptr, tc);
  result.params.validate();

  TrainedNetwork out;
  out.archive.params = std::move(result.params);
  out.archive.norm = train_set.norm;
  out.archive.provenance.config_hash = sha256_hex(config_to_json(config).dump());
  out.archive.provenance.seed = config.seed;
  out.archive.provenance.build_id = build_id();
  out.trace = std::move(result.trace);
  out.train_error = training_error(out.archive.params, train_set);
  out.test_error = test_set ? generalization_error(out.archive.params, *test_set) : 0.0;
  return out;
}

std::vector<CommunityAssignment> detect_communities(const ExperimentConfig& config, const NetworkParams& params) {
  if (!config.communities_per_layer.empty() && config.communities_per_layer.size() != params.depth())
    throw Error(ErrorKind::Config, "communities_per_layer has " + std::to_string(config.communities_per_layer.size()) +
                                       " entries, network has " + std::to_string(params.depth()) + " layers");
  EMConfig em = config.em;
  em.seed = derive_seed(config.seed, kDetectStream);
  em.threads = config.threads;
  return detect_all_layers(params, config.xi, em, config.communities_per_layer);
}

RoleReport compute_roles(const ExperimentConfig& config, const ModelArchive& model, const ExperimentData& data,
                         const std::vector<CommunityAssignment>& assignments) {
  Dataset reference = data.train;
  Dataset sample = config.roles_on_test && !data.test.empty() ? data.test : data.train;
  if (model.norm) {
    reference = apply_normalization(reference, *model.norm);
    sample = apply_normalization(sample, *model.norm);
  }
  return role_report(model.params, sample, reference, assignments, config.threads);
}

void write_data_artifacts(const ExperimentConfig& config, const ExperimentData& data, const fs::path& dir) {
  const fs::path d = dir / "data";
  fs::create_directories(d);
  write_dataset_csv(data.train, d / "train.csv");
  if (!data.test.empty()) write_dataset_csv(data.test, d / "test.csv");
  if (data.series) write_timeseries_csv(*data.series, d / "series.csv");
  if (data.truth) {
    ModelArchive truth;
    truth.params = data.truth->params;
    truth.provenance.seed = config.seed;
    truth.provenance.build_id = build_id();
    json doc = model_to_json(truth);
    doc["modules"] = data.truth->module;
    write_json(doc, d / "ground_truth.json");
  }
  if (config.kind == ExperimentKind::Diagrams) {
    // first training image of every class
    for (std::size_t k = 0; k < kDiagramClasses; ++k) {
      const std::size_t row = k * config.n1;
      Image img{};
      for (std::size_t p = 0; p < kDiagramPixels; ++p) img[p] = data.train.inputs(row, p);
      write_pgm(img, d / ("class" + std::to_string(k + 1) + ".pgm"));
    }
  }
}

void write_training_artifacts(const TrainedNetwork& trained, const fs::path& dir) {
  save_model(trained.archive, dir / "model.json");
  write_trace_csv(trained.trace, dir / "error_trace.csv");
}

void write_community_artifacts(const ExperimentConfig& config, const NetworkParams& params,
                               const std::vector<CommunityAssignment>& assignments, const fs::path& dir) {
  const fs::path d = dir / "communities";
  fs::create_directories(d);
  write_json(assignments_to_json(assignments), d / "assignments.json");
  for (const auto& a : assignments) {
    write_matrix_csv(a.q, d / ("q_" + layer_name(a.depth) + ".csv"), numbered("c", a.communities), {}, "unit");
    write_adjacency_csv(extract(params, a.depth, config.xi), d, layer_name(a.depth) + "_");
  }
}

json role_report_to_json(const RoleReport& report) {
  json layers = json::array();
  for (const auto& layer : report.layers) {
    json comms = json::array();
    for (const auto& c : layer.communities) {
      json entry{{"community", c.community + 1}, {"members", c.members}};
      entry["v_in"] = c.v_in ? vector_json(*c.v_in) : json(nullptr);
      entry["v_out"] = c.v_out ? vector_json(*c.v_out) : json(nullptr);
      comms.push_back(std::move(entry));
    }
    layers.push_back({{"layer", layer.depth}, {"communities", std::move(comms)}});
  }
  return {{"sample_count", report.sample_count}, {"layers", std::move(layers)}};
}

void write_role_artifacts(const RoleReport& report, const std::vector<std::string>& input_labels,
                          const std::vector<std::string>& output_labels, const fs::path& dir) {
  const fs::path d = dir / "roles";
  fs::create_directories(d);
  write_json(role_report_to_json(report), d / "report.json");
  for (const auto& layer : report.layers) {
    if (layer.communities.empty()) continue;
    const auto rows = community_names(layer);
    const auto emit = [&](const char* kind, const std::vector<std::string>& columns, auto pick) {
      if (!pick(layer.communities.front())) return;
      MatrixXd m(static_cast<Eigen::Index>(layer.communities.size()), static_cast<Eigen::Index>(columns.size()));
      for (std::size_t r = 0; r < layer.communities.size(); ++r) m.row(r) = pick(layer.communities[r])->transpose();
      const std::string stem = layer_name(layer.depth) + "_" + kind;
      write_matrix_csv(m, d / (stem + ".csv"), columns, rows, "community");
      svg::write(svg::heatmap(m, {stem, rows, columns}), d / (stem + ".svg"));
    };
    emit("v_in", input_labels, [](const CommunityRole& c) { return c.v_in ? &*c.v_in : nullptr; });
    emit("v_out", output_labels, [](const CommunityRole& c) { return c.v_out ? &*c.v_out : nullptr; });
  }
}

void write_figures(const ExperimentConfig& config, const NetworkParams& params,
                   const std::vector<CommunityAssignment>& assignments, const fs::path& dir) {
  const fs::path d = dir / "figures";
  fs::create_directories(d);
  svg::write(svg::network_diagram(params, config.xi), d / "network.svg");
  if (!assignments.empty()) svg::write(svg::network_diagram(params, config.xi, assignments), d / "communities.svg");
  if (config.kind == ExperimentKind::Diagrams && !assignments.empty() &&
      assignments.front().community.size() == kDiagramPixels)
    svg::write(svg::label_grid(assignments.front().community, kDiagramSide, "input pixel communities"),
               d / "input_communities.svg");
}

void write_baseline_artifacts(const ExperimentConfig& config, const TimeSeries& series,
                              const std::vector<std::string>& input_labels,
                              const std::vector<std::string>& output_labels, const fs::path& dir) {
  const fs::path d = dir / "baseline";
  fs::create_directories(d);
  SweepConfig sc;
  sc.train_fraction = config.train_fraction;
  sc.bounds = config.bounds;
  std::vector<std::size_t> windows;
  for (std::size_t w : config.baseline_windows)
    if (w >= 1 && w < series.length()) windows.push_back(w);
  const auto sweep = sweep_window(series, windows, sc);
  std::ostringstream csv;
  csv << "window,train_samples,test_samples,train_error,generalization_error\n";
  for (const auto& r : sweep)
    csv << r.window << ',' << r.train_samples << ',' << r.test_samples << ',' << format_double(r.train_error) << ','
        << format_double(r.generalization_error) << '\n';
  write_text(csv.str(), d / "sweep.csv");

  const auto model = fit_window(series, config.window, sc);
  write_matrix_csv(model.coefficients, d / "coefficients.csv", output_labels, input_labels, "input");
  write_matrix_csv(model.intercept.transpose(), d / "intercept.csv", output_labels);
  svg::write(svg::heatmap(model.coefficients, {"linear coefficients", input_labels, output_labels}),
             d / "coefficients.svg");
}

json write_manifest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir);
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  json list = json::array();
  for (const auto& rel : files)
    list.push_back({{"path", rel.generic_string()},
                    {"sha256", sha256_file(dir / rel)},
                    {"bytes", static_cast<std::uint64_t>(fs::file_size(dir / rel))}});
  json manifest{{"build_id", build_id()}, {"files", std::move(list)}};
  write_json(manifest, dir / "manifest.json");
  return manifest;
}

RunSummary run_experiment(const ExperimentConfig& config) {
  stage("config", [&] { config.validate(); });
  const fs::path dir = config.out_dir;
  stage("io", [&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    if (fs::exists(dir / "manifest.json")) fs::remove(dir / "manifest.json");
    write_json(config_to_json(config), dir / "config.json");
  });

  const auto data = stage("data", [&] { return prepare_data(config); });
  stage("data", [&] { write_data_artifacts(config, data, dir); });

  const auto trained = stage("train", [&] { return train_network(config, data); });
  stage("train", [&] { write_training_artifacts(trained, dir); });
  const NetworkParams& params = trained.archive.params;

  const auto assignments = stage("detect", [&] { return detect_communities(config, params); });
  stage("detect", [&] { write_community_artifacts(config, params, assignments, dir); });

  const auto roles = stage("roles", [&] { return compute_roles(config, trained.archive, data, assignments); });
  stage("roles", [&] { write_role_artifacts(roles, data.input_labels, data.output_labels, dir); });

  stage("render", [&] { write_figures(config, params, assignments, dir); });

  if (data.series)
    stage("baseline", [&] { write_baseline_artifacts(config, *data.series, data.input_labels, data.output_labels, dir); });

  RunSummary out;
  out.out_dir = dir;
  json layers = json::array();
  for (const auto& a : assignments) {
    std::vector<std::size_t> sizes(a.communities, 0);
    for (std::size_t c : a.community) ++sizes[c];
    json layer{{"layer", a.depth},
               {"units", a.community.size()},
               {"communities", a.communities},
               {"community_sizes", sizes},
               {"expected_log_likelihood", a.expected_log_likelihood},
               {"best_restart", a.best_restart}};
    if (data.truth && a.depth <= data.truth->module.size() && data.truth->module[a.depth - 1].size() == a.community.size())
      layer["module_accuracy"] = match_labels(a.community, data.truth->module[a.depth - 1]).accuracy;
    layers.push_back(std::move(layer));
  }
  out.summary = {{"experiment", to_string(config.kind)},
                 {"seed", config.seed},
                 {"build_id", build_id()},
                 {"config_hash", trained.archive.provenance.config_hash},
                 {"topology", params.topology().sizes},
                 {"train_samples", data.train.size()},
                 {"test_samples", data.test.size()},
                 {"train_error", trained.train_error},
                 {"layers", std::move(layers)}};
  if (!data.test.empty()) out.summary["test_error"] = trained.test_error;
  stage("report", [&] {
    write_json(out.summary, dir / "summary.json");
    out.manifest = write_manifest(dir);
  });
  return out;
}

}  // namespace lnncomm
