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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fedshield/aggregation.h"
#include "fedshield/bench.h"
#include "fedshield/cli.h"
#include "fedshield/config.h"
#include "fedshield/gshield.h"
#include "fedshield/model.h"
#include "fedshield/numkit.h"
#include "fedshield/results.h"
#include "fedshield/simulator.h"
#include "oracles.h"

namespace fedshield {
namespace {

constexpr uint64_t kSeeds[] = {1, 2, 3};

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string& name, const Verdict& v) {
  std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string Fmt(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::vector<ClientUpdate> FromRows(const std::vector<Vec64>& rows) {
  std::vector<ClientUpdate> out;
  for (size_t i = 0; i < rows.size(); ++i) out.push_back({static_cast<int>(i), rows[i], 1});
  return out;
}

std::vector<Vec64> RandomRows(std::mt19937_64& rng, size_t k, size_t d) {
  std::normal_distribution<double> n(0, 1);
  std::vector<Vec64> rows(k, Vec64(d));
  for (auto& r : rows)
    for (double& v : r) v = n(rng);
  return rows;
}

Verdict AggregatorOracles() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<size_t> k_dist(1, 20), d_dist(1, 50);
  std::uniform_real_distribution<double> beta_dist(0.0, 0.49);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto rows = RandomRows(rng, k_dist(rng), d_dist(rng));
    const Vec64 med = CoordMedian(FromRows(rows)).aggregate;
    const Vec64 med_ref = oracle::SortMedian(rows);
    double beta = beta_dist(rng);
    while (2 * static_cast<size_t>(std::floor(beta * rows.size())) >= rows.size()) beta /= 2;
    const Vec64 tm = TrimmedMean(FromRows(rows), beta).aggregate;
    const Vec64 tm_ref = oracle::SortTrimmedMean(rows, beta);
    for (size_t j = 0; j < med.size(); ++j) {
      worst = std::max({worst, std::abs(med[j] - med_ref[j]), std::abs(tm[j] - tm_ref[j])});
    }
  }
  int krum_mismatch = 0;
  std::uniform_int_distribution<size_t> kk(3, 8);
  for (int t = 0; t < 50; ++t) {
    const size_t k = kk(rng);
    const int f = static_cast<int>((k - 3) / 2);
    const auto rows = RandomRows(rng, k, d_dist(rng));
    const auto got = Krum(FromRows(rows), f).selected_ids;
    krum_mismatch += got != std::vector<int>{static_cast<int>(oracle::BruteKrum(rows, f))};
  }
  return {worst <= 1e-12 && krum_mismatch == 0,
          Fmt("median/tmean max |diff| %.3g over 100 rounds; krum mismatches %g of 50", worst,
              krum_mismatch)};
}

double MaxRelGradError(const WeightVector& w, const Vec64& x, const std::vector<int>& y) {
  const double eps = 1e-5;
  const Vec64 g = LossAndGrad(w, x, y).grad;
  double worst = 0.0;
  for (size_t k = 0; k < w.values.size(); ++k) {
    WeightVector p = w, m = w;
    p.values[k] += eps;
    m.values[k] -= eps;
    const double fd = (LossAndGrad(p, x, y).loss - LossAndGrad(m, x, y).loss) / (2 * eps);
    worst = std::max(worst, std::abs(fd - g[k]) / std::max({std::abs(fd), std::abs(g[k]), 1e-6}));
  }
  return worst;
}

Verdict GradientCheck() {
  std::mt19937_64 rng(202);
  std::normal_distribution<double> n(0, 1);
  double worst = 0.0;
  for (size_t hidden : {size_t{0}, size_t{6}}) {
    for (int t = 0; t < 20; ++t) {
      const ModelLayout layout(5, hidden, 4);
      WeightVector w = InitWeights(layout, 300 + t);
      for (double& v : w.values) v += 0.1 * n(rng);
      Vec64 x(8 * 5);
      for (double& v : x) v = n(rng);
      std::vector<int> y(8);
      for (int& l : y) l = static_cast<int>(rng() % 4);
      worst = std::max(worst, MaxRelGradError(w, x, y));
    }
  }
  return {worst <= 1e-4, Fmt("max relative error %.3g over 40 (weights, batch) pairs", worst)};
}

struct Averages {
  double srecall = 0, f1 = 0, det_precision = 0, det_recall = 0;
};

Averages RunSeeds(FederationConfig cfg) {
  Averages avg;
  for (uint64_t seed : kSeeds) {
    cfg.master_seed = seed;
    const RunSummary s = Summarize(RunExperiment(cfg), cfg.t_safe);
    avg.srecall += s.final_source_recall / 3;
    avg.f1 += s.final_f1 / 3;
    avg.det_precision += s.mean_detection_precision / 3;
    avg.det_recall += s.mean_detection_recall / 3;
  }
  return avg;
}

FederationConfig Scenario(AggregatorKind kind, double pmr) {
  FederationConfig cfg;  // defaults are the desk-scale scenario
  cfg.aggregator = kind;
  cfg.pmr = pmr;
  return cfg;
}

Verdict DeterminismViaCli() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fedshield_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "exp.conf") << FormatConfig(Scenario(AggregatorKind::kGShield, 0.25));
  std::stringstream out, err;
  if (CmdRun(dir / "exp.conf", dir / "a", out, err) != kExitOk ||
      CmdRun(dir / "exp.conf", dir / "b", out, err) != kExitOk) {
    return {false, "cmd_run failed: " + err.str()};
  }
  auto strip = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string line, all;
    while (std::getline(in, line)) all += line.substr(0, line.rfind(',')) + "\n";
    return all;
  };
  const std::string a = strip(dir / "a" / "rounds.csv");
  const bool same = !a.empty() && a == strip(dir / "b" / "rounds.csv");
  return {same, same ? "rounds.csv identical except agg_wall_time_s"
                     : "rounds.csv differs between identical runs"};
}

Verdict GShieldInvariants() {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::string> broken;
  auto make = [&](int k) {
    Vec64 base(16);
    for (double& v : base) v = n(rng);
    std::vector<std::pair<int, Vec64>> g;
    for (int i = 0; i < k; ++i) {
      Vec64 v = base;
      const double spread = i < k - 2 ? 0.7 : 3.0;
      for (double& x : v) x = (i < k - 2 ? x : -x) + spread * n(rng);
      g.emplace_back(i, v);
    }
    return g;
  };
  auto updates_for = [](const std::vector<std::pair<int, Vec64>>& g) {
    std::vector<ClientUpdate> u;
    for (const auto& [id, v] : g) {
      Vec64 full = v;
      full.push_back(id);
      u.push_back({id, full, static_cast<size_t>(id + 1)});
    }
    return u;
  };
  for (int trial = 0; trial < 10; ++trial) {
    BenignProfile p = BenignProfile::Create(3, 2.0), ps = p;
    int transitions = 0;
    for (int round = 1; round <= 8; ++round) {
      const auto g = make(9);
      auto scaled = g;
      for (auto& [id, v] : scaled)
        for (double& x : v) x *= 17.0;
      const Phase before = p.phase;
      const GShieldRound r = GShieldAggregate(updates_for(g), g, p, round, trial);
      const GShieldRound s = GShieldAggregate(updates_for(scaled), scaled, ps, round, trial);
      transitions += before != p.phase;
      if (before != p.phase && round != 3) broken.push_back("transition round");
      if (r.selection.benign_ids != s.selection.benign_ids) broken.push_back("scale");
      std::vector<ClientUpdate> kept;
      for (const auto& u : updates_for(g)) {
        if (std::count(r.selection.benign_ids.begin(), r.selection.benign_ids.end(),
                       u.client_id)) {
          kept.push_back(u);
        }
      }
      const Vec64 ref = FedAvg(kept).aggregate;
      for (size_t j = 0; j < ref.size(); ++j) {
        if (std::abs(ref[j] - r.aggregation.aggregate[j]) > 1e-12) {
          broken.push_back("benign fedavg");
          break;
        }
      }
      if (p.phase == Phase::kDetection) {
        const SimilarityScores sc = ClientSimilarityScores(g);
        size_t prev = 0;
        for (double z : {0.5, 1.0, 2.0, 4.0, 8.0}) {
          BenignProfile pz = p;
          pz.z_alpha = z;
          const SelectionOutcome o = Detect(sc.sim, pz);
          const size_t size = o.fallback_used ? 0 : o.benign_ids.size();
          if (size < prev) broken.push_back("z monotone");
          prev = size;
        }
        std::map<int, double> half;
        for (const auto& [id, v] : sc.sim) {
          if (id % 2) half[id] = v;
        }
        const SelectionOutcome full = Detect(sc.sim, p), part = Detect(half, p);
        if (!full.fallback_used && !part.fallback_used) {
          for (const auto& [id, v] : half) {
            const bool a = std::count(full.benign_ids.begin(), full.benign_ids.end(), id);
            const bool b = std::count(part.benign_ids.begin(), part.benign_ids.end(), id);
            if (a != b) broken.push_back("pointwise");
          }
        }
      }
    }
    if (transitions != 1) broken.push_back("transition count");
  }
  return {broken.empty(), broken.empty() ? "scale, monotonicity, transition, benign-fedavg and "
                                           "pointwise checks hold on 10 trials x 8 rounds"
                                         : "broken: " + broken.front()};
}

Verdict TimingOrder() {
  BenchOptions opts;  // K=25, D=1e4, L=128, R=11
  const auto rows = RunAggregationBenchmark(opts);
  std::map<AggregatorKind, double> med;
  std::string detail;
  for (const BenchRow& r : rows) {
    med[r.kind] = r.median_s;
    detail += std::string(AggregatorName(r.kind)) + "=" + Fmt("%.3g", r.median_s) + "s ";
  }
  const double g = med[AggregatorKind::kGShield];
  const bool order = med[AggregatorKind::kMedian] < g &&
                     med[AggregatorKind::kTrimmedMean] < g && g < med[AggregatorKind::kKrum];
  detail += order ? "(Median,TMean < GShield < Krum)" : "(expected Median,TMean < GShield < Krum)";
  detail += g < med[AggregatorKind::kFlameLite] ? "; GShield < FlameLite" : "; GShield >= FlameLite";
  return {order, detail};
}

Verdict KMeansOracle() {
  std::mt19937_64 rng(1010);
  int mismatches = 0;
  for (int t = 0; t < 30; ++t) {
    const size_t nn = 4 + rng() % 7;
    const auto pts = oracle::SeparatedInstance(rng, nn, 1 + rng() % 4, 8.0);
    const auto best = oracle::ExhaustiveTwoPartition(pts);
    const KMeansResult r = KMeans2(pts, 100, 7000 + t);
    mismatches += !oracle::SamePartition(r.assignments, best.labels);
  }
  return {mismatches == 0, Fmt("%g of 30 instances differ from the exhaustive optimum", mismatches)};
}

}  // namespace
}  // namespace fedshield

int main() {
  using namespace fedshield;
  Report(1, "aggregator oracles", AggregatorOracles());
  Report(2, "gradient check", GradientCheck());

  const Averages clean = RunSeeds(Scenario(AggregatorKind::kFedAvg, 0.0));
  const Averages attacked = RunSeeds(Scenario(AggregatorKind::kFedAvg, 0.25));
  const Averages shield = RunSeeds(Scenario(AggregatorKind::kGShield, 0.25));
  FederationConfig dp_cfg = Scenario(AggregatorKind::kGShield, 0.25);
  dp_cfg.dp = {true, 1.0, 0.1};
  const Averages shield_dp = RunSeeds(dp_cfg);

  Report(3, "attack efficacy",
         {attacked.srecall <= 0.5 * clean.srecall && std::abs(attacked.f1 - clean.f1) <= 0.15,
          Fmt("FedAvg SRecall %.2f under attack vs %.2f clean (need <= 50%%); F1 %.4f vs %.4f",
              attacked.srecall, clean.srecall, attacked.f1, clean.f1)});
  Report(4, "GShield defense",
         {shield.srecall >= attacked.srecall + 30 && shield.srecall >= 0.7 * clean.srecall,
          Fmt("GShield SRecall %.2f; need >= %.2f (FedAvg attacked + 30) and >= %.2f (70%% clean)",
              shield.srecall, attacked.srecall + 30, 0.7 * clean.srecall)});
  Report(5, "detection quality",
         {shield.det_recall >= 0.6 && shield.det_precision >= 0.6,
          Fmt("mean detection recall %.3f, precision %.3f (need both >= 0.6)", shield.det_recall,
              shield.det_precision)});
  Report(6, "GShield invariants", GShieldInvariants());
  Report(7, "determinism", DeterminismViaCli());
  Report(8, "timing order", TimingOrder());
  Report(9, "DP robustness",
         {std::abs(shield_dp.srecall - shield.srecall) <= 15,
          Fmt("GShield SRecall %.2f with DP vs %.2f without (need within 15)", shield_dp.srecall,
              shield.srecall)});
  Report(10, "k-means oracle", KMeansOracle());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
