#include <doctest.h>

#include "../support/fixtures.hpp"
#include "lnncomm/config.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/io.hpp"

using namespace lnncomm;
using nlohmann::json;

namespace {

ErrorKind kind_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("defaults per experiment") {
  const auto syn = default_config(ExperimentKind::Synthetic);
  CHECK(syn.n1 == 5000);
  CHECK(syn.train.a1 == 2000);
  CHECK(syn.train.lambda == 9e-7);
  CHECK(syn.train.eta0 == 0.7);
  CHECK(syn.train.epsilon1 == 0.001);
  CHECK(syn.xi == 0.3);
  CHECK(syn.em.communities == 3);
  CHECK(syn.em.iterations == 200);
  CHECK(syn.em.restarts == 300);
  CHECK(syn.bounds.x_min == -1.0);
  CHECK(syn.bounds.y_max == 0.99);

  const auto ts = default_config(ExperimentKind::Timeseries);
  CHECK(ts.train.a1 == 100);
  CHECK(ts.train.lambda == 1.1e-5);
  CHECK(ts.xi == 5e-3);
  CHECK(ts.window == 36);

  const auto dg = default_config(ExperimentKind::Diagrams);
  CHECK(dg.n1 == 1000);
  CHECK(dg.train.a1 == 500);
  CHECK(dg.train.lambda == 4e-5);
  CHECK(dg.xi == 5e-4);
  CHECK(dg.em.communities == 10);
  CHECK(dg.train.sampling == SamplingMode::ClassCyclic);
}

TEST_CASE("symbols and long names are interchangeable") {
  const auto a = config_from_json({{"experiment", "synthetic"}, {"a1", 7}, {"lambda", 0.01}, {"xi", 0.2}, {"C", 4}});
  const auto b = config_from_json(
      {{"iterations_per_sample", 7}, {"lasso_weight", 0.01}, {"weight_threshold", 0.2}, {"communities", 4}});
  CHECK(a.train.a1 == b.train.a1);
  CHECK(a.train.lambda == b.train.lambda);
  CHECK(a.xi == b.xi);
  CHECK(a.em.communities == 4);
  CHECK(b.em.communities == 4);
  CHECK(kind_of({{"a1", 7}, {"iterations_per_sample", 8}}) == ErrorKind::Config);
  CHECK_NOTHROW(config_from_json({{"a1", 7}, {"iterations_per_sample", 7}}));
}

TEST_CASE("invalid configs are rejected") {
  CHECK(kind_of({{"xi", 0.0}}) == ErrorKind::Config);
  CHECK(kind_of({{"xi", -1.0}}) == ErrorKind::Config);
  CHECK(kind_of({{"lambda", -1.0}}) == ErrorKind::Config);
  CHECK(kind_of({{"a2", 0}}) == ErrorKind::Config);
  CHECK(kind_of({{"x_min", 2.0}}) == ErrorKind::Config);
  CHECK(kind_of({{"unknown_key", 1}}) == ErrorKind::Config);
  CHECK(kind_of({{"experiment", "speech"}}) == ErrorKind::Config);
  CHECK(kind_of({{"a1", "many"}}) == ErrorKind::Config);
  CHECK(kind_of({{"a1", -3}}) == ErrorKind::Config);
  CHECK(kind_of({{"experiment", "timeseries"}, {"n1", 10}}) == ErrorKind::Config);
  CHECK(kind_of({{"experiment", "custom"}}) == ErrorKind::Config);
  CHECK(kind_of({{"sampling", "random"}}) == ErrorKind::Config);
  CHECK(kind_of({{"experiment", "timeseries"}, {"seasonal", {{"phase", 1}}}}) == ErrorKind::Config);
  CHECK(kind_of(json::array()) == ErrorKind::Config);
}

TEST_CASE("config json round trip") {
  auto c = config_from_json({{"experiment", "timeseries"},
                             {"seed", 9},
                             {"window", 12},
                             {"hidden", {8, 6}},
                             {"seasonal", {{"period", 6.0}}},
                             {"a3", 5}});
  CHECK(c.seasonal.period == 6.0);
  const auto doc = config_to_json(c);
  CHECK(doc.contains("lambda"));
  CHECK_FALSE(doc.contains("n1"));
  const auto back = config_from_json(doc);
  CHECK(config_to_json(back) == doc);
  CHECK(back.seed == 9);
  CHECK(back.hidden == std::vector<std::size_t>{8, 6});

  const auto dir = fixture::temp_dir("config");
  write_json(doc, dir / "c.json");
  CHECK(config_to_json(load_config(dir / "c.json")) == doc);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), Error);
  write_text("{oops", dir / "bad.json");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), Error);
}
