#include <doctest.h>

#include <chrono>
#include <filesystem>

#include "../support/fixtures.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"
#include "lnncomm/pipeline.hpp"

using namespace lnncomm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentConfig tiny_synthetic(const fs::path& dir) {
  auto c = config_from_json({{"experiment", "synthetic"},
                             {"units_per_module", 4},
                             {"n1", 200},
                             {"test_samples", 50},
                             {"a1", 20},
                             {"a3", 10},
                             {"seed", 5}});
  c.out_dir = dir;
  return c;
}

}  // namespace

TEST_CASE("tiny synthetic run completes and lists every artifact") {
  const auto dir = fixture::temp_dir("pipeline_syn");
  const auto start = std::chrono::steady_clock::now();
  const auto run = run_experiment(tiny_synthetic(dir));
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));

  std::size_t on_disk = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") ++on_disk;
  CHECK(run.manifest["files"].size() == on_disk);
  for (const auto& f : run.manifest["files"]) {
    const fs::path p = dir / f["path"].get<std::string>();
    CHECK(fs::exists(p));
    CHECK(sha256_file(p) == f["sha256"].get<std::string>());
  }
  for (const char* name : {"config.json", "model.json", "error_trace.csv", "summary.json", "data/train.csv",
                           "data/ground_truth.json", "communities/assignments.json", "roles/report.json",
                           "figures/network.svg"})
    CHECK(fs::exists(dir / name));

  const auto model = load_model(dir / "model.json");
  CHECK(model.params.topology().sizes == std::vector<std::size_t>{12, 12, 12, 12});
  CHECK(model.norm.has_value());
  const auto assignments = assignments_from_json(read_json(dir / "communities/assignments.json"));
  CHECK(assignments.size() == 4);
  const auto report = read_json(dir / "roles/report.json");
  CHECK(report["layers"].size() == 4);
  CHECK(run.summary["layers"].size() == 4);
}

TEST_CASE("rerunning gives identical manifests across thread counts") {
  const auto a = fixture::temp_dir("pipeline_a"), b = fixture::temp_dir("pipeline_b");
  auto ca = tiny_synthetic(a), cb = tiny_synthetic(b);
  cb.threads = 8;
  cb.em.threads = 8;
  run_experiment(ca);
  run_experiment(cb);
  CHECK(read_text(a / "manifest.json") == read_text(b / "manifest.json"));
}

TEST_CASE("invalid threshold fails before any compute") {
  const auto dir = fixture::temp_dir("pipeline_bad");
  auto c = tiny_synthetic(dir / "out");
  c.xi = 0.0;
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).rfind("config:", 0) == 0);
  }
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("stage failures carry the stage name") {
  const auto dir = fixture::temp_dir("pipeline_stage");
  auto c = config_from_json({{"experiment", "custom"}, {"train_csv", (dir / "missing.csv").string()}});
  c.out_dir = dir / "out";
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("data:", 0) == 0);
  }
}

TEST_CASE("custom experiment from csv files") {
  const auto dir = fixture::temp_dir("pipeline_custom");
  auto rng = make_rng(3);
  write_dataset_csv(fixture::random_dataset(40, 3, 2, rng), dir / "train.csv");
  write_dataset_csv(fixture::random_dataset(10, 3, 2, rng), dir / "test.csv");
  auto c = config_from_json({{"experiment", "custom"},
                             {"train_csv", (dir / "train.csv").string()},
                             {"test_csv", (dir / "test.csv").string()},
                             {"hidden", {4}},
                             {"a1", 5},
                             {"a3", 3},
                             {"C", 2}});
  c.out_dir = dir / "out";
  const auto run = run_experiment(c);
  CHECK(run.summary["topology"] == json({3, 4, 2}));
  CHECK(run.summary.contains("test_error"));
}

TEST_CASE("timeseries and diagram runs emit their extra artifacts") {
  const auto dir = fixture::temp_dir("pipeline_other");
  auto ts = config_from_json({{"experiment", "timeseries"},
                              {"series_length", 120},
                              {"window", 6},
                              {"hidden", {5}},
                              {"a1", 5},
                              {"a3", 2},
                              {"baseline_windows", {1, 3, 6}}});
  ts.out_dir = dir / "ts";
  run_experiment(ts);
  CHECK(fs::exists(dir / "ts/baseline/sweep.csv"));
  CHECK(fs::exists(dir / "ts/baseline/coefficients.svg"));
  CHECK(fs::exists(dir / "ts/data/series.csv"));

  auto dg = config_from_json(
      {{"experiment", "diagrams"}, {"n1", 3}, {"test_samples", 1}, {"hidden", {6}}, {"a1", 2}, {"a3", 2}});
  dg.out_dir = dir / "dg";
  run_experiment(dg);
  CHECK(fs::exists(dir / "dg/data/class5.pgm"));
  CHECK(fs::exists(dir / "dg/figures/input_communities.svg"));
}

TEST_CASE("topology follows the ground truth unless hidden widths are given") {
  auto c = tiny_synthetic("unused");
  const auto data = prepare_data(c);
  CHECK(experiment_topology(c, data).sizes == std::vector<std::size_t>{12, 12, 12, 12});
  c.hidden = {7};
  CHECK(experiment_topology(c, data).sizes == std::vector<std::size_t>{12, 7, 12});
}
