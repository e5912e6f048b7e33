#include "lnncomm/config.hpp"

#include <set>
#include <string>

#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"

namespace lnncomm {

using nlohmann::json;

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Synthetic: return "synthetic";
    case ExperimentKind::Timeseries: return "timeseries";
    case ExperimentKind::Diagrams: return "diagrams";
    case ExperimentKind::Custom: return "custom";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "synthetic") return ExperimentKind::Synthetic;
  if (name == "timeseries") return ExperimentKind::Timeseries;
  if (name == "diagrams") return ExperimentKind::Diagrams;
  if (name == "custom") return ExperimentKind::Custom;
  throw Error(ErrorKind::Config, "unknown experiment kind '" + name + "' (synthetic, timeseries, diagrams, custom)");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Synthetic:
      c.n1 = 5000;
      c.test_samples = 1000;
      c.train.a1 = 2000;
      c.train.lambda = 9.0e-7;
      c.xi = 0.3;
      c.em.communities = 3;
      break;
    case ExperimentKind::Timeseries:
      c.n1 = 0;
      c.hidden = {20, 20};
      c.train.a1 = 100;
      c.train.lambda = 1.1e-5;
      c.xi = 5.0e-3;
      c.em.communities = 3;
      c.baseline_windows = {1, 2, 3, 6, 9, 12, 18, 24, 29, 30, 36};
      break;
    case ExperimentKind::Diagrams:
      c.n1 = 1000;
      c.test_samples = 100;
      c.hidden = {30, 20};
      c.train.a1 = 500;
      c.train.lambda = 4.0e-5;
      c.train.sampling = SamplingMode::ClassCyclic;
      c.xi = 5.0e-4;
      c.em.communities = 10;
      break;
    case ExperimentKind::Custom:
      c.n1 = 0;
      c.hidden = {10};
      c.train.a1 = 100;
      c.train.lambda = 1.0e-5;
      c.xi = 0.1;
      c.em.communities = 3;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  bounds.validate();
  train.validate();
  em.validate();
  if (!(xi > 0.0)) throw Error(ErrorKind::Config, "xi must be > 0");
  if (threads < 1) throw Error(ErrorKind::Config, "threads must be >= 1");
  if (!(init_variance >= 0.0)) throw Error(ErrorKind::Config, "init_variance must be >= 0");
  for (std::size_t h : hidden)
    if (h == 0) throw Error(ErrorKind::Config, "hidden layer widths must be positive");
  for (std::size_t c : communities_per_layer)
    if (c == 0) throw Error(ErrorKind::Config, "communities_per_layer entries must be positive");
  switch (kind) {
    case ExperimentKind::Synthetic:
      if (n1 == 0) throw Error(ErrorKind::Config, "n1 must be positive");
      if (ground_truth.modules == 0 || ground_truth.units_per_module == 0)
        throw Error(ErrorKind::Config, "modules and units_per_module must be positive");
      break;
    case ExperimentKind::Timeseries:
      if (window == 0) throw Error(ErrorKind::Config, "window must be >= 1");
      if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorKind::Config, "train_fraction must lie in (0, 1)");
      if (series_csv.empty() && (series_length <= window || series_columns == 0))
        throw Error(ErrorKind::Config, "series_length must exceed window and series_columns must be positive");
      break;
    case ExperimentKind::Diagrams:
      if (n1 == 0) throw Error(ErrorKind::Config, "n1 (images per class) must be positive");
      break;
    case ExperimentKind::Custom:
      if (train_csv.empty()) throw Error(ErrorKind::Config, "custom experiments need train_csv");
      break;
  }
}

namespace {

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {
    if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  }

  template <class T>
  void get(const char* key, T& target) {
    if (!doc_.contains(key)) return;
    seen_.insert(key);
    assign(key, doc_.at(key), target);
  }

  template <class T>
  void get_alias(const char* symbol, const char* long_name, T& target) {
    const bool has_symbol = doc_.contains(symbol), has_long = doc_.contains(long_name);
    if (has_symbol && has_long && doc_.at(symbol) != doc_.at(long_name))
      throw Error(ErrorKind::Config, std::string("'") + symbol + "' and '" + long_name + "' disagree");
    if (has_symbol) get(symbol, target);
    if (has_long) get(long_name, target);
  }

  bool has(const char* key) const { return doc_.contains(key); }
  void mark(const char* key) { seen_.insert(key); }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_.items())
      if (!seen_.count(key)) throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  }

 private:
  template <class T>
  static void assign(const std::string& key, const json& value, T& target) {
    try {
      if constexpr (std::is_same_v<T, std::filesystem::path>) {
        target = value.get<std::string>();
      } else if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!value.is_number_integer() || value.get<long long>() < 0)
          throw Error(ErrorKind::Config, "'" + key + "' must be a nonnegative integer");
        target = value.get<T>();
      } else {
        target = value.get<T>();
      }
    } catch (const json::exception&) {
      throw Error(ErrorKind::Config, "'" + key + "' has the wrong type");
    }
  }

  const json& doc_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  ExperimentKind kind = ExperimentKind::Synthetic;
  if (doc.contains("experiment")) {
    if (!doc.at("experiment").is_string()) throw Error(ErrorKind::Config, "'experiment' must be a string");
    kind = parse_experiment_kind(doc.at("experiment").get<std::string>());
  }
  ExperimentConfig c = default_config(kind);
  Reader r(doc);
  r.mark("experiment");

  r.get("seed", c.seed);
  r.get("out_dir", c.out_dir);
  r.get("threads", c.threads);
  if (kind == ExperimentKind::Timeseries && (r.has("n1") || r.has("train_samples")))
    throw Error(ErrorKind::Config, "n1 is derived from the windowed series for timeseries experiments");
  r.get_alias("n1", "train_samples", c.n1);
  r.get("test_samples", c.test_samples);
  r.get("hidden", c.hidden);

  r.get("modules", c.ground_truth.modules);
  r.get("units_per_module", c.ground_truth.units_per_module);
  r.get("hidden_layers", c.ground_truth.hidden_layers);
  r.get("weight_variance", c.ground_truth.weight_variance);
  r.get("bias_variance", c.ground_truth.bias_variance);
  r.get("prune_threshold", c.ground_truth.prune_threshold);
  r.get("input_variance", c.synthetic.input_variance);
  r.get("noise_variance", c.synthetic.noise_variance);

  r.get("series_csv", c.series_csv);
  r.get("series_length", c.series_length);
  r.get("series_columns", c.series_columns);
  r.get("window", c.window);
  r.get("train_fraction", c.train_fraction);
  r.get("baseline_windows", c.baseline_windows);
  if (doc.contains("seasonal")) {
    r.mark("seasonal");
    Reader s(doc.at("seasonal"));
    s.get("period", c.seasonal.period);
    s.get("amplitude", c.seasonal.amplitude);
    s.get("trend", c.seasonal.trend);
    s.get("level", c.seasonal.level);
    s.get("ar_coefficient", c.seasonal.ar_coefficient);
    s.get("noise_sd", c.seasonal.noise_sd);
    s.reject_unknown();
  }

  r.get("point_sd", c.diagram.point_sd);
  r.get("pixel_noise_variance", c.diagram.pixel_noise_variance);

  r.get("train_csv", c.train_csv);
  r.get("test_csv", c.test_csv);

  r.get_alias("x_min", "input_min", c.bounds.x_min);
  r.get_alias("x_max", "input_max", c.bounds.x_max);
  r.get_alias("y_min", "output_min", c.bounds.y_min);
  r.get_alias("y_max", "output_max", c.bounds.y_max);
  r.get_alias("a1", "iterations_per_sample", c.train.a1);
  r.get_alias("eta", "step_size", c.train.eta0);
  r.get_alias("lambda", "lasso_weight", c.train.lambda);
  r.get_alias("epsilon1", "convergence_epsilon", c.train.epsilon1);
  if (doc.contains("sampling")) {
    std::string mode;
    r.get("sampling", mode);
    if (mode == "uniform") c.train.sampling = SamplingMode::UniformRandom;
    else if (mode == "class-cyclic") c.train.sampling = SamplingMode::ClassCyclic;
    else throw Error(ErrorKind::Config, "sampling must be 'uniform' or 'class-cyclic'");
  }
  r.get("track_test_error", c.train.track_test_error);
  r.get("init_variance", c.init_variance);

  r.get_alias("xi", "weight_threshold", c.xi);
  r.get_alias("C", "communities", c.em.communities);
  r.get_alias("a2", "em_iterations", c.em.iterations);
  r.get_alias("a3", "em_restarts", c.em.restarts);
  r.get("communities_per_layer", c.communities_per_layer);
  r.get("roles_on_test", c.roles_on_test);

  r.reject_unknown();
  c.train.seed = c.seed;
  c.em.seed = c.seed;
  c.em.threads = c.threads;
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["experiment"] = to_string(c.kind);
  doc["seed"] = c.seed;
  if (c.kind != ExperimentKind::Timeseries) doc["n1"] = c.n1;
  doc["test_samples"] = c.test_samples;
  doc["hidden"] = c.hidden;
  switch (c.kind) {
    case ExperimentKind::Synthetic:
      doc["modules"] = c.ground_truth.modules;
      doc["units_per_module"] = c.ground_truth.units_per_module;
      doc["hidden_layers"] = c.ground_truth.hidden_layers;
      doc["weight_variance"] = c.ground_truth.weight_variance;
      doc["bias_variance"] = c.ground_truth.bias_variance;
      doc["prune_threshold"] = c.ground_truth.prune_threshold;
      doc["input_variance"] = c.synthetic.input_variance;
      doc["noise_variance"] = c.synthetic.noise_variance;
      break;
    case ExperimentKind::Timeseries:
      doc["series_csv"] = c.series_csv.string();
      doc["series_length"] = c.series_length;
      doc["series_columns"] = c.series_columns;
      doc["window"] = c.window;
      doc["train_fraction"] = c.train_fraction;
      doc["baseline_windows"] = c.baseline_windows;
      doc["seasonal"] = {{"period", c.seasonal.period},       {"amplitude", c.seasonal.amplitude},
                         {"trend", c.seasonal.trend},         {"level", c.seasonal.level},
                         {"ar_coefficient", c.seasonal.ar_coefficient}, {"noise_sd", c.seasonal.noise_sd}};
      break;
    case ExperimentKind::Diagrams:
      doc["point_sd"] = c.diagram.point_sd;
      doc["pixel_noise_variance"] = c.diagram.pixel_noise_variance;
      break;
    case ExperimentKind::Custom:
      doc["train_csv"] = c.train_csv.string();
      doc["test_csv"] = c.test_csv.string();
      break;
  }
  doc["x_min"] = c.bounds.x_min;
  doc["x_max"] = c.bounds.x_max;
  doc["y_min"] = c.bounds.y_min;
  doc["y_max"] = c.bounds.y_max;
  doc["a1"] = c.train.a1;
  doc["eta"] = c.train.eta0;
  doc["lambda"] = c.train.lambda;
  doc["epsilon1"] = c.train.epsilon1;
  doc["sampling"] = c.train.sampling == SamplingMode::ClassCyclic ? "class-cyclic" : "uniform";
  doc["track_test_error"] = c.train.track_test_error;
  doc["init_variance"] = c.init_variance;
  doc["xi"] = c.xi;
  doc["C"] = c.em.communities;
  doc["a2"] = c.em.iterations;
  doc["a3"] = c.em.restarts;
  doc["communities_per_layer"] = c.communities_per_layer;
  doc["roles_on_test"] = c.roles_on_test;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::Config, "config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace lnncomm
