#include <doctest.h>

#include <filesystem>
#include <limits>

#include "../support/fixtures.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"
#include "lnncomm/svg.hpp"
#include "lnncomm/trainer.hpp"

using namespace lnncomm;
namespace fs = std::filesystem;

namespace {

ModelArchive sample_archive(std::uint64_t seed) {
  auto rng = make_rng(seed);
  ModelArchive a;
  a.params = fixture::random_params({4, 6, 3}, rng);
  a.params.weights[0](1, 1) = 1.0 / 3.0;
  a.params.weights[1](0, 0) = std::numeric_limits<double>::denorm_min();
  auto data = fixture::random_dataset(10, 4, 3, rng);
  a.norm = normalize_dataset(data, NormBounds{}).norm;
  a.provenance = {"abc123", seed, "lnncomm-test"};
  return a;
}

}  // namespace

TEST_CASE("model round trip is bit exact") {
  const auto dir = fixture::temp_dir("model");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = sample_archive(seed);
    save_model(a, dir / "m.json");
    const auto b = load_model(dir / "m.json");
    for (std::size_t d = 0; d < a.params.weights.size(); ++d) {
      CHECK(a.params.weights[d] == b.params.weights[d]);
      CHECK(a.params.biases[d] == b.params.biases[d]);
    }
    REQUIRE(b.norm.has_value());
    CHECK(b.norm->input_lo == a.norm->input_lo);
    CHECK(b.norm->output_hi == a.norm->output_hi);
    CHECK(b.provenance.config_hash == "abc123");
    CHECK(b.provenance.seed == seed);
    CHECK(b.version == kModelFormatVersion);
  }
  ModelArchive bare;
  bare.params = NetworkParams(LayerTopology{{2, 1}});
  save_model(bare, dir / "bare.json");
  CHECK_FALSE(load_model(dir / "bare.json").norm.has_value());
}

TEST_CASE("model load errors") {
  const auto dir = fixture::temp_dir("model_errors");
  CHECK_THROWS_AS(load_model(dir / "missing.json"), Error);

  save_model(sample_archive(4), dir / "m.json");
  const auto text = read_text(dir / "m.json");
  write_text(text.substr(0, text.size() / 2), dir / "truncated.json");
  try {
    load_model(dir / "truncated.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }

  auto doc = read_json(dir / "m.json");
  doc["version"] = 7;
  write_json(doc, dir / "v7.json");
  try {
    load_model(dir / "v7.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("unsupported version") != std::string::npos);
  }

  doc = read_json(dir / "m.json");
  doc["weights"][0].erase(0);
  write_json(doc, dir / "shape.json");
  CHECK_THROWS_AS(load_model(dir / "shape.json"), Error);

  doc = read_json(dir / "m.json");
  doc["topology"] = {4, 5, 3};
  write_json(doc, dir / "topo.json");
  CHECK_THROWS_AS(load_model(dir / "topo.json"), Error);
}

TEST_CASE("dataset csv round trip") {
  const auto dir = fixture::temp_dir("dataset");
  auto rng = make_rng(5);
  auto d = fixture::random_dataset(6, 3, 2, rng);
  write_dataset_csv(d, dir / "d.csv");
  const auto header = read_text(dir / "d.csv").substr(0, 14);
  CHECK(header == "x0,x1,x2,y0,y1");
  const auto back = read_dataset_csv(dir / "d.csv");
  CHECK(back.inputs == d.inputs);
  CHECK(back.outputs == d.outputs);
  CHECK(back.classes.empty());
  d.classes = {0, 1, 2, 0, 1, 2};
  write_dataset_csv(d, dir / "c.csv");
  CHECK(read_dataset_csv(dir / "c.csv").classes == d.classes);

  write_text("x0,y0\n1,oops\n", dir / "bad.csv");
  CHECK_THROWS_AS(read_dataset_csv(dir / "bad.csv"), Error);
  write_text("a,b\n1,2\n", dir / "header.csv");
  CHECK_THROWS_AS(read_dataset_csv(dir / "header.csv"), Error);
}

TEST_CASE("assignments json round trip") {
  CommunityAssignment a;
  a.depth = 2;
  a.community = {1, 0, 1};
  a.communities = 2;
  a.q.resize(3, 2);
  a.q << 0.1, 0.9, 0.8, 0.2, 0.3, 0.7;
  a.expected_log_likelihood = -12.5;
  a.best_restart = 4;
  const auto doc = assignments_to_json({a});
  REQUIRE(doc.size() == 3);
  CHECK(doc[0]["layer"] == 2);
  CHECK(doc[0]["unit_index"] == 0);
  CHECK(doc[0]["community"] == 2);
  CHECK(doc[1]["community"] == 1);
  CHECK(doc[2]["q_row"].size() == 2);
  const auto back = assignments_from_json(doc);
  REQUIRE(back.size() == 1);
  CHECK(back[0].community == a.community);
  CHECK(back[0].q == a.q);
  CHECK(back[0].depth == 2);
  CHECK(back[0].communities == 2);
  CHECK(back[0].expected_log_likelihood == -12.5);
  CHECK(back[0].best_restart == 4);
}

TEST_CASE("format double round trips") {
  auto rng = make_rng(6);
  const MatrixXd m = fixture::random_matrix(50, 1, rng, 1e3);
  for (Eigen::Index i = 0; i < m.size(); ++i) CHECK(std::stod(format_double(m(i))) == m(i));
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("sha256 known digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = fixture::temp_dir("sha");
  write_text("abc", dir / "f");
  CHECK(sha256_file(dir / "f") == sha256_hex("abc"));
}

TEST_CASE("csv helpers") {
  CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
  const auto dir = fixture::temp_dir("matrix");
  MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  write_matrix_csv(m, dir / "m.csv", {"p", "q"}, {"r0", "r1"}, "name");
  CHECK(read_text(dir / "m.csv") == "name,p,q\nr0,1,2\nr1,3,4\n");
  write_matrix_csv(m, dir / "n.csv");
  CHECK(read_text(dir / "n.csv") == "0,1\n1,2\n3,4\n");
  ErrorTrace t{{0, 0.5, std::nullopt}, {10, 0.25, 0.3}};
  write_trace_csv(t, dir / "t.csv");
  CHECK(read_text(dir / "t.csv") == "step,train_error,test_error\n0,0.5,\n10,0.25,0.3\n");
  CHECK_THROWS_AS(read_json(dir / "missing.json"), Error);
  write_text("{", dir / "broken.json");
  CHECK_THROWS_AS(read_json(dir / "broken.json"), Error);
}

TEST_CASE("svg output") {
  MatrixXd m(2, 3);
  m << 0, 1, -2, 0.5, 0.25, 0;
  const auto s = svg::heatmap(m, {"t", {"a", "b"}, {"x", "y", "z"}});
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find(">x<") != std::string::npos);

  NetworkParams p(LayerTopology{{2, 2}});
  p.weights[0] << 0.9, -0.9, 0.0, 0.05;
  const auto net = svg::network_diagram(p, 0.1);
  CHECK(net.find("stroke-dasharray") != std::string::npos);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = net.find("<line", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == 2);
  CHECK(svg::label_grid(std::vector<std::size_t>(400, 1), 20, "g").find("<rect") != std::string::npos);
}
