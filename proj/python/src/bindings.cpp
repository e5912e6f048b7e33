#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lnncomm/adjacency.hpp"
#include "lnncomm/community_em.hpp"
#include "lnncomm/config.hpp"
#include "lnncomm/datagen.hpp"
#include "lnncomm/error.hpp"
#include "lnncomm/linear_baseline.hpp"
#include "lnncomm/network.hpp"
#include "lnncomm/pipeline.hpp"
#include "lnncomm/roles.hpp"
#include "lnncomm/trainer.hpp"

namespace py = pybind11;
using namespace lnncomm;

namespace {

Dataset make_dataset(const MatrixXd& inputs, const std::optional<MatrixXd>& outputs) {
  Dataset d;
  d.inputs = inputs;
  d.outputs = outputs ? *outputs : MatrixXd::Zero(inputs.rows(), 0);
  return d;
}

py::dict adjacency_dict(const SignedAdjacency& adj) {
  py::dict out;
  out["depth"] = adj.depth;
  out["a_pos"] = adj.a_pos;
  out["a_neg"] = adj.a_neg;
  out["b_pos"] = adj.b_pos;
  out["b_neg"] = adj.b_neg;
  return out;
}

py::dict assignment_dict(const CommunityAssignment& a) {
  py::dict out;
  out["depth"] = a.depth;
  out["community"] = a.community;
  out["q"] = a.q;
  out["expected_log_likelihood"] = a.expected_log_likelihood;
  out["best_restart"] = a.best_restart;
  return out;
}

EMConfig em_config(std::size_t communities, std::size_t iterations, std::size_t restarts, std::uint64_t seed,
                   unsigned threads) {
  EMConfig cfg;
  cfg.communities = communities;
  cfg.iterations = iterations;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Community detection in layered neural networks";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<NetworkParams>(m, "Network")
      .def(py::init([](const std::vector<std::size_t>& sizes) { return NetworkParams(LayerTopology{sizes}); }),
           py::arg("sizes"))
      .def(py::init([](std::vector<MatrixXd> weights, std::vector<VectorXd> biases) {
             NetworkParams p;
             p.weights = std::move(weights);
             p.biases = std::move(biases);
             p.validate();
             return p;
           }),
           py::arg("weights"), py::arg("biases"))
      .def_readwrite("weights", &NetworkParams::weights)
      .def_readwrite("biases", &NetworkParams::biases)
      .def_property_readonly("sizes", [](const NetworkParams& p) { return p.topology().sizes; })
      .def_property_readonly("depth", &NetworkParams::depth)
      .def("forward", [](const NetworkParams& p, const VectorXd& x) { return forward(p, x).layers; }, py::arg("x"))
      .def("predict", [](const NetworkParams& p, const MatrixXd& X) { return forward_batch(p, X).back(); },
           py::arg("inputs"))
      .def("error", [](const NetworkParams& p, const MatrixXd& X, const MatrixXd& Y) {
             return training_error(p, make_dataset(X, Y));
           },
           py::arg("inputs"), py::arg("outputs"))
      .def("__repr__", [](const NetworkParams& p) {
        std::string s = "Network([";
        const auto sizes = p.topology().sizes;
        for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? ", " : "") + std::to_string(sizes[i]);
        return s + "])";
      });

  m.def("sigmoid", &sigmoid, py::arg("x"));
  m.def("learning_rate", &learning_rate, py::arg("t"), py::arg("a1"), py::arg("n1"), py::arg("eta0") = 0.7);
  m.def("init_params", [](const std::vector<std::size_t>& sizes, std::uint64_t seed,
                          double variance) { return init_params(LayerTopology{sizes}, seed, variance); },
        py::arg("sizes"), py::arg("seed"), py::arg("variance") = 0.5);

  m.def(
      "train",
      [](const NetworkParams& initial, const MatrixXd& X, const MatrixXd& Y, std::size_t a1, double lam,
         double epsilon1, double eta0, std::uint64_t seed, const std::optional<std::vector<std::size_t>>& classes) {
        Dataset d = make_dataset(X, Y);
        TrainConfig cfg;
        cfg.a1 = a1;
        cfg.lambda = lam;
        cfg.epsilon1 = epsilon1;
        cfg.eta0 = eta0;
        cfg.seed = seed;
        if (classes) {
          d.classes = *classes;
          cfg.sampling = SamplingMode::ClassCyclic;
        }
        py::gil_scoped_release release;
        return train(initial, d, nullptr, cfg).params;
      },
      py::arg("network"), py::arg("inputs"), py::arg("outputs"), py::arg("a1") = 2000, py::arg("lam") = 9e-7,
      py::arg("epsilon1") = 0.001, py::arg("eta0") = 0.7, py::arg("seed") = 0, py::arg("classes") = py::none());

  m.def("normalize",
        [](const MatrixXd& X, const MatrixXd& Y) {
          const auto d = normalize_dataset(make_dataset(X, Y), NormBounds{});
          return py::make_tuple(d.inputs, d.outputs);
        },
        py::arg("inputs"), py::arg("outputs"));

  m.def("extract_adjacency",
        [](const NetworkParams& p, std::size_t depth, double xi, bool softened) {
          auto adj = extract(p, depth, xi);
          return adjacency_dict(softened ? soften(adj) : adj);
        },
        py::arg("network"), py::arg("depth"), py::arg("xi"), py::arg("soften") = true);

  m.def(
      "detect",
      [](const NetworkParams& p, std::size_t depth, double xi, std::size_t communities, std::size_t iterations,
         std::size_t restarts, std::uint64_t seed, unsigned threads) {
        const auto adj = soften(extract(p, depth, xi));
        CommunityAssignment a;
        {
          py::gil_scoped_release release;
          a = detect(adj, em_config(communities, iterations, restarts, seed, threads));
        }
        return assignment_dict(a);
      },
      py::arg("network"), py::arg("depth"), py::arg("xi"), py::arg("communities") = 3, py::arg("iterations") = 200,
      py::arg("restarts") = 300, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "detect_all_layers",
      [](const NetworkParams& p, double xi, std::size_t communities, std::size_t iterations, std::size_t restarts,
         std::uint64_t seed, unsigned threads) {
        std::vector<CommunityAssignment> layers;
        {
          py::gil_scoped_release release;
          layers = detect_all_layers(p, xi, em_config(communities, iterations, restarts, seed, threads));
        }
        py::list out;
        for (const auto& a : layers) out.append(assignment_dict(a));
        return out;
      },
      py::arg("network"), py::arg("xi"), py::arg("communities") = 3, py::arg("iterations") = 200,
      py::arg("restarts") = 300, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("input_effect",
        [](const NetworkParams& p, const MatrixXd& X, std::size_t depth, const std::vector<std::size_t>& members) {
          return input_effect(p, make_dataset(X, std::nullopt), depth, members);
        },
        py::arg("network"), py::arg("inputs"), py::arg("depth"), py::arg("members"));
  m.def("output_effect",
        [](const NetworkParams& p, const MatrixXd& X, std::size_t depth, const std::vector<std::size_t>& members) {
          return output_effect(p, make_dataset(X, std::nullopt), depth, members);
        },
        py::arg("network"), py::arg("inputs"), py::arg("depth"), py::arg("members"));

  m.def(
      "ground_truth",
      [](std::size_t modules, std::size_t units_per_module, std::size_t hidden_layers, double weight_variance,
         double bias_variance, double prune_threshold, std::uint64_t seed) {
        const auto gt = gen_ground_truth(
            {modules, units_per_module, hidden_layers, weight_variance, bias_variance, prune_threshold}, seed);
        return py::make_tuple(gt.params, gt.module);
      },
      py::arg("modules") = 3, py::arg("units_per_module") = 15, py::arg("hidden_layers") = 2,
      py::arg("weight_variance") = 1.0, py::arg("bias_variance") = 0.5, py::arg("prune_threshold") = 1.0,
      py::arg("seed") = 0);

  m.def("synthetic_dataset",
        [](const NetworkParams& truth, std::size_t samples, std::uint64_t seed, double input_variance,
           double noise_variance) {
          const auto d = gen_synthetic_dataset(truth, samples, seed, {input_variance, noise_variance});
          return py::make_tuple(d.inputs, d.outputs);
        },
        py::arg("truth"), py::arg("samples"), py::arg("seed") = 0, py::arg("input_variance") = 3.0,
        py::arg("noise_variance") = 0.05);

  m.def("diagram_dataset",
        [](std::size_t n_per_class, std::uint64_t seed) {
          const auto d = gen_diagram_dataset(n_per_class, seed);
          return py::make_tuple(d.inputs, d.outputs, d.classes);
        },
        py::arg("n_per_class"), py::arg("seed") = 0);

  m.def("fit_linear",
        [](const MatrixXd& X, const MatrixXd& Y) {
          const auto model = fit_linear(make_dataset(X, Y));
          return py::make_tuple(model.coefficients, model.intercept);
        },
        py::arg("inputs"), py::arg("outputs"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::filesystem::path& out_dir) {
        auto cfg = config_from_json(nlohmann::json::parse(config_json));
        cfg.out_dir = out_dir;
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = run_experiment(cfg);
        }
        return s.summary.dump();
      },
      py::arg("config_json"), py::arg("out_dir"));

  m.attr("__version__") = build_id();
}
