// Copyright 2026 The FedShield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the fedshield core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fedshield/aggregation.h"
#include "fedshield/bench.h"
#include "fedshield/cli.h"
#include "fedshield/config.h"
#include "fedshield/error.h"
#include "fedshield/gshield.h"
#include "fedshield/numkit.h"
#include "fedshield/results.h"
#include "fedshield/simulator.h"

namespace py = pybind11;
using namespace fedshield;

namespace {

std::vector<ClientUpdate> ToUpdates(const std::vector<Vec64>& gradients,
                                    const std::vector<int>& ids,
                                    const std::vector<size_t>& samples) {
  std::vector<ClientUpdate> out;
  for (size_t i = 0; i < gradients.size(); ++i) {
    out.push_back({ids.empty() ? static_cast<int>(i) : ids.at(i), gradients[i],
                   samples.empty() ? 1 : samples.at(i)});
  }
  return out;
}

py::dict ResultDict(const AggregationResult& r) {
  py::dict d;
  d["aggregate"] = r.aggregate;
  d["selected_ids"] = r.selected_ids;
  d["rejected_ids"] = r.rejected_ids;
  d["wall_time_seconds"] = r.wall_time_seconds;
  return d;
}

py::dict RecordDict(const RoundRecord& r) {
  py::dict d;
  d["round"] = r.round;
  d["participant_ids"] = r.participant_ids;
  d["malicious_participant_ids"] = r.malicious_participant_ids;
  d["selected_ids"] = r.selected_ids;
  d["rejected_ids"] = r.rejected_ids;
  d["f1"] = r.f1;
  d["source_recall"] = r.source_recall;
  d["detection_precision"] = r.detection_precision;
  d["detection_recall"] = r.detection_recall;
  d["agg_wall_time_s"] = r.agg_wall_time_s;
  d["fallback_used"] = r.fallback_used;
  return d;
}

py::dict SelectionDict(const SelectionOutcome& s) {
  py::dict d;
  d["benign_ids"] = s.benign_ids;
  d["rejected_ids"] = s.rejected_ids;
  d["per_client_sim"] = s.per_client_sim;
  d["per_client_distance"] = s.per_client_distance;
  d["fallback_used"] = s.fallback_used;
  return d;
}

#define KW(name) py::arg(name)

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "fedshield core: aggregation rules, GShield and the FL simulator";
  m.attr("__version__") = FEDSHIELD_VERSION;
  // Locals, not globals: arg defaults own Python objects.
  const auto kIds = py::arg("ids") = std::vector<int>{};
  const auto kSamples = py::arg("num_samples") = std::vector<size_t>{};

  // Translators run newest first, so the subclass is registered last.
  auto& error = py::register_exception<Error>(m, "FedshieldError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  m.def("cosine_similarity", [](const Vec64& a, const Vec64& b) {
    return CosineSimilarity(a, b);
  });
  m.def("pairwise_cosine", [](const std::vector<Vec64>& rows) {
    const SimMatrix s = PairwiseCosine(rows);
    std::vector<Vec64> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i].assign(s.row(i).begin(), s.row(i).end());
    return out;
  });
  m.def(
      "kmeans2",
      [](const std::vector<Vec64>& points, int max_iters, uint64_t seed) {
        const KMeansResult r = KMeans2(points, max_iters, seed);
        return py::make_tuple(r.assignments, std::vector<Vec64>{r.centroids[0], r.centroids[1]},
                              r.sse);
      },
      KW("points"), py::arg("max_iters") = 100, py::arg("seed") = 0);
  m.def("gaussian_fit", [](const Vec64& v) {
    const GaussianStats g = GaussianFit(v);
    return py::make_tuple(g.mean, g.std);
  });

  m.def("fedavg", [](const std::vector<Vec64>& g, const std::vector<int>& ids,
                     const std::vector<size_t>& n) { return ResultDict(FedAvg(ToUpdates(g, ids, n))); },
        KW("gradients"), kIds, kSamples);
  m.def("krum", [](const std::vector<Vec64>& g, int f, const std::vector<int>& ids) {
          return ResultDict(Krum(ToUpdates(g, ids, {}), f));
        },
        KW("gradients"), KW("num_malicious"), kIds);
  m.def("coord_median", [](const std::vector<Vec64>& g, const std::vector<int>& ids) {
          return ResultDict(CoordMedian(ToUpdates(g, ids, {})));
        },
        KW("gradients"), kIds);
  m.def("trimmed_mean",
        [](const std::vector<Vec64>& g, double beta, const std::vector<int>& ids) {
          return ResultDict(TrimmedMean(ToUpdates(g, ids, {}), beta));
        },
        KW("gradients"), KW("trim_fraction"), kIds);
  m.def("flame_lite",
        [](const std::vector<Vec64>& g, double lambda, uint64_t seed, const std::vector<int>& ids) {
          return ResultDict(FlameLite(ToUpdates(g, ids, {}), lambda, seed));
        },
        KW("gradients"), py::arg("noise_scale") = 0.001, py::arg("seed") = 0, kIds);

  m.def("client_similarity_scores", [](const std::vector<Vec64>& g, const std::vector<int>& ids) {
          std::vector<std::pair<int, Vec64>> in;
          for (size_t i = 0; i < g.size(); ++i) {
            in.emplace_back(ids.empty() ? static_cast<int>(i) : ids.at(i), g[i]);
          }
          return ClientSimilarityScores(in).sim;
        },
        KW("last_layer_gradients"), kIds);
  m.def(
      "detect",
      [](const std::map<int, double>& sims, double mu, double sigma, double z_alpha) {
        BenignProfile p = BenignProfile::Create(1, z_alpha);
        p.phase = Phase::kDetection;
        p.safe_means = {mu};
        p.safe_stds = {sigma};
        p.mu = mu;
        p.sigma = sigma;
        return SelectionDict(Detect(sims, p));
      },
      KW("sims"), KW("mu"), KW("sigma"), py::arg("z_alpha") = 2.0);

  m.def("parse_config", [](const std::string& text) { return FormatConfig(ParseConfig(text)); },
        "Parse config text and return its canonical form (raises ConfigError).");
  m.def("default_config", [] { return FormatConfig(FederationConfig{}); });
  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        FederationConfig cfg = ParseConfig(config_text);
        cfg.Validate();
        std::vector<RoundRecord> records;
        {
          py::gil_scoped_release release;
          records = RunExperiment(cfg);
        }
        py::list out;
        for (const RoundRecord& r : records) out.append(RecordDict(r));
        return out;
      },
      KW("config_text"));

  m.def("cmd_run", [](const std::filesystem::path& config, const std::filesystem::path& out_dir) {
    std::ostringstream out, err;
    const int code = CmdRun(config, out_dir, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
  m.def(
      "cmd_bench",
      [](int clients, int model_dim, int last_layer_dim, int repeats,
         const std::filesystem::path& out_dir) {
        BenchOptions o{clients, model_dim, last_layer_dim, repeats, 1};
        std::ostringstream out, err;
        const int code = CmdBench(o, out_dir, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("clients") = 25, py::arg("model_dim") = 10000, py::arg("last_layer_dim") = 128,
      py::arg("repeats") = 11, py::arg("output_dir") = ".");
}
