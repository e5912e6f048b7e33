#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"
#include "lnncomm/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lnncomm;

namespace {

struct Overrides {
  std::string config_path;
  json values = json::object();
  std::string model_path;
  std::string assignments_path;
};

template <class T>
void flag(CLI::App& app, Overrides& o, const std::string& names, const std::string& key, const std::string& help) {
  app.add_option_function<T>(names, [&o, key](const T& v) { o.values[key] = v; }, help);
}

ExperimentConfig resolve(const Overrides& o) {
  json doc = json::object();
  if (!o.config_path.empty()) {
    if (!fs::exists(o.config_path)) throw Error(ErrorKind::Config, "config file not found: " + o.config_path);
    try {
      doc = json::parse(read_text(o.config_path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Config, o.config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  }
  for (const auto& [key, value] : o.values.items()) {
    // a flag replaces both spellings of an aliased key
    doc[key] = value;
  }
  static const std::vector<std::pair<const char*, const char*>> aliases = {
      {"n1", "train_samples"},  {"a1", "iterations_per_sample"}, {"eta", "step_size"},
      {"lambda", "lasso_weight"}, {"epsilon1", "convergence_epsilon"}, {"xi", "weight_threshold"},
      {"C", "communities"},     {"a2", "em_iterations"},          {"a3", "em_restarts"},
      {"x_min", "input_min"},   {"x_max", "input_max"},           {"y_min", "output_min"},
      {"y_max", "output_max"}};
  for (const auto& [sym, name] : aliases)
    if (o.values.contains(sym)) doc.erase(name);
  return config_from_json(doc);
}

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

ModelArchive load_model_for(const Overrides& o, const ExperimentConfig& config) {
  return load_model(or_default(o.model_path, config.out_dir / "model.json"));
}

std::vector<CommunityAssignment> load_assignments_for(const Overrides& o, const ExperimentConfig& config) {
  return assignments_from_json(
      read_json(or_default(o.assignments_path, config.out_dir / "communities" / "assignments.json")));
}

void check_against(const NetworkParams& params, const std::vector<CommunityAssignment>& assignments) {
  const auto topo = params.topology();
  if (assignments.size() != topo.depth())
    throw Error(ErrorKind::Dimension, "assignments cover " + std::to_string(assignments.size()) +
                                          " layers, model has " + std::to_string(topo.depth()));
  for (const auto& a : assignments)
    if (a.depth < 1 || a.depth > topo.depth() || a.community.size() != topo.units(a.depth))
      throw Error(ErrorKind::Dimension, "assignments for layer " + std::to_string(a.depth) +
                                            " do not match the model");
}

int cmd_gen_data(const ExperimentConfig& config) {
  const auto data = prepare_data(config);
  fs::create_directories(config.out_dir);
  write_data_artifacts(config, data, config.out_dir);
  std::cout << "wrote " << data.train.size() << " training and " << data.test.size() << " test samples to "
            << (config.out_dir / "data").string() << '\n';
  return 0;
}

int cmd_train(const ExperimentConfig& config) {
  const auto data = prepare_data(config);
  const auto trained = train_network(config, data);
  fs::create_directories(config.out_dir);
  write_training_artifacts(trained, config.out_dir);
  std::cout << "train_error " << format_double(trained.train_error);
  if (!data.test.empty()) std::cout << " test_error " << format_double(trained.test_error);
  std::cout << '\n';
  return 0;
}

int cmd_detect(const Overrides& o, const ExperimentConfig& config) {
  const auto model = load_model_for(o, config);
  const auto assignments = detect_communities(config, model.params);
  write_community_artifacts(config, model.params, assignments, config.out_dir);
  for (const auto& a : assignments) {
    std::cout << "layer " << a.depth << ':';
    for (std::size_t c = 0; c < a.communities; ++c) std::cout << ' ' << a.members(c).size();
    std::cout << " (L " << format_double(a.expected_log_likelihood) << ")\n";
  }
  return 0;
}

int cmd_roles(const Overrides& o, const ExperimentConfig& config) {
  const auto model = load_model_for(o, config);
  const auto assignments = load_assignments_for(o, config);
  check_against(model.params, assignments);
  const auto data = prepare_data(config);
  const auto report = compute_roles(config, model, data, assignments);
  write_role_artifacts(report, data.input_labels, data.output_labels, config.out_dir);
  std::cout << "wrote " << (config.out_dir / "roles").string() << '\n';
  return 0;
}

int cmd_baseline(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::Timeseries)
    throw Error(ErrorKind::Config, "baseline needs a timeseries experiment");
  const auto data = prepare_data(config);
  write_baseline_artifacts(config, *data.series, data.input_labels, data.output_labels, config.out_dir);
  std::cout << "wrote " << (config.out_dir / "baseline").string() << '\n';
  return 0;
}

int cmd_render(const Overrides& o, const ExperimentConfig& config) {
  const auto model = load_model_for(o, config);
  std::vector<CommunityAssignment> assignments;
  const fs::path apath = or_default(o.assignments_path, config.out_dir / "communities" / "assignments.json");
  if (fs::exists(apath)) {
    assignments = assignments_from_json(read_json(apath));
    check_against(model.params, assignments);
  }
  write_figures(config, model.params, assignments, config.out_dir);
  std::cout << "wrote " << (config.out_dir / "figures").string() << '\n';
  return 0;
}

int cmd_run(const ExperimentConfig& config) {
  const auto result = run_experiment(config);
  std::cout << result.summary.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse layered network training, community detection and role analysis"};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("--config", o.config_path, "JSON config file")->option_text("PATH");
  flag<std::string>(app, o, "--experiment", "experiment", "synthetic | timeseries | diagrams | custom");
  flag<std::uint64_t>(app, o, "--seed", "seed", "master random seed");
  flag<std::string>(app, o, "--out-dir", "out_dir", "artifact directory");
  flag<unsigned>(app, o, "--threads", "threads", "worker threads (results do not depend on it)");

  flag<std::size_t>(app, o, "--n1,--train-samples", "n1", "training samples (per class for diagrams)");
  flag<std::size_t>(app, o, "--test-samples", "test_samples", "test samples (per class for diagrams)");
  flag<std::vector<std::size_t>>(app, o, "--hidden", "hidden", "hidden layer widths");
  flag<std::size_t>(app, o, "--a1,--iterations-per-sample", "a1", "update steps per training sample");
  flag<double>(app, o, "--eta,--step-size", "eta", "initial step size");
  flag<double>(app, o, "--lambda,--lasso-weight", "lambda", "LASSO weight");
  flag<double>(app, o, "--epsilon1,--convergence-epsilon", "epsilon1", "added to o(1-o) in backprop");
  flag<std::string>(app, o, "--sampling", "sampling", "uniform | class-cyclic");
  flag<double>(app, o, "--init-variance", "init_variance", "variance of initial weights");
  flag<double>(app, o, "--xi,--weight-threshold", "xi", "connection threshold");
  flag<std::size_t>(app, o, "--C,--communities", "C", "communities per layer");
  flag<std::vector<std::size_t>>(app, o, "--communities-per-layer", "communities_per_layer",
                                 "community count for each layer");
  flag<std::size_t>(app, o, "--a2,--em-iterations", "a2", "EM iterations");
  flag<std::size_t>(app, o, "--a3,--em-restarts", "a3", "EM restarts");
  flag<double>(app, o, "--x-min,--input-min", "x_min", "input normalization lower bound");
  flag<double>(app, o, "--x-max,--input-max", "x_max", "input normalization upper bound");
  flag<double>(app, o, "--y-min,--output-min", "y_min", "output normalization lower bound");
  flag<double>(app, o, "--y-max,--output-max", "y_max", "output normalization upper bound");
  flag<std::size_t>(app, o, "--modules", "modules", "ground-truth modules");
  flag<std::size_t>(app, o, "--units-per-module", "units_per_module", "ground-truth units per module and layer");
  flag<std::string>(app, o, "--series-csv", "series_csv", "time series CSV (timeseries)");
  flag<std::size_t>(app, o, "--series-length", "series_length", "months of generated series");
  flag<std::size_t>(app, o, "--window", "window", "months of history per sample");
  flag<double>(app, o, "--train-fraction", "train_fraction", "chronological training share");
  flag<std::vector<std::size_t>>(app, o, "--baseline-windows", "baseline_windows", "windows for the linear sweep");
  flag<std::string>(app, o, "--train-csv", "train_csv", "training CSV (custom)");
  flag<std::string>(app, o, "--test-csv", "test_csv", "test CSV (custom)");
  app.add_flag_callback("--roles-on-test", [&o] { o.values["roles_on_test"] = true; },
                        "average role fluctuations over the test set");

  auto* gen = app.add_subcommand("gen-data", "generate or ingest the experiment data");
  auto* train = app.add_subcommand("train", "train the network and write model.json");
  auto* detect = app.add_subcommand("detect", "detect communities in every layer of a trained model");
  auto* roles = app.add_subcommand("roles", "compute community role vectors");
  auto* baseline = app.add_subcommand("baseline", "linear regression window sweep (timeseries)");
  auto* run = app.add_subcommand("run", "full pipeline");
  auto* render = app.add_subcommand("render", "draw network figures");
  for (auto* sub : {detect, roles, render}) {
    sub->add_option("--model", o.model_path, "model archive (default OUT_DIR/model.json)");
    sub->add_option("--assignments", o.assignments_path,
                    "assignments JSON (default OUT_DIR/communities/assignments.json)");
  }
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = resolve(o);
    if (*gen) return cmd_gen_data(config);
    if (*train) return cmd_train(config);
    if (*detect) return cmd_detect(o, config);
    if (*roles) return cmd_roles(o, config);
    if (*baseline) return cmd_baseline(config);
    if (*run) return cmd_run(config);
    if (*render) return cmd_render(o, config);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
