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

#include "fedshield/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "fedshield/aggregation.h"
#include "fedshield/gshield.h"
#include "fedshield/results.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

struct SyntheticRound {
  std::vector<ClientUpdate> updates;
  std::vector<std::pair<int, Vec64>> last_layer;
};

SyntheticRound MakeRound(const BenchOptions& o, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> samples(20, 80);
  Vec64 shared(o.model_dim);
  for (double& v : shared) v = normal(rng);
  SyntheticRound round;
  for (int id = 0; id < o.clients; ++id) {
    ClientUpdate u;
    u.client_id = id;
    u.num_samples = samples(rng);
    u.gradient.resize(o.model_dim);
    for (int j = 0; j < o.model_dim; ++j) u.gradient[j] = shared[j] + normal(rng);
    round.last_layer.emplace_back(
        id, Vec64(u.gradient.end() - o.last_layer_dim, u.gradient.end()));
    round.updates.push_back(std::move(u));
  }
  return round;
}

template <typename Fn>
double TimeSeconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void BenchOptions::Validate() const {
  if (clients < 4) throw ConfigError("clients", "must be >= 4");
  if (last_layer_dim < 2) throw ConfigError("last_layer_dim", "must be >= 2");
  if (model_dim < last_layer_dim) {
    throw ConfigError("model_dim", "must be >= last_layer_dim");
  }
  if (repeats < 3) throw ConfigError("repeats", "must be >= 3");
}

double Quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

std::vector<BenchRow> RunAggregationBenchmark(const BenchOptions& opts) {
  opts.Validate();
  const int krum_f = static_cast<int>(std::ceil(0.25 * opts.clients));
  const int krum_f_ok = std::min(krum_f, (opts.clients - 3) / 2);

  // One safe round fits the benign profile; the timed calls are all detection.
  BenignProfile profile = BenignProfile::Create(1, 2.0);
  {
    SyntheticRound warm = MakeRound(opts, DeriveSeed(opts.seed, {0}));
    GShieldAggregate(warm.updates, warm.last_layer, profile, 1, opts.seed);
  }

  std::vector<BenchRow> rows;
  for (AggregatorKind kind : kAllAggregators) rows.push_back(BenchRow{kind, {}});

  for (int r = 1; r <= opts.repeats; ++r) {
    const SyntheticRound round = MakeRound(opts, DeriveSeed(opts.seed, {uint64_t(r)}));
    for (BenchRow& row : rows) {
      double t = 0.0;
      switch (row.kind) {
        case AggregatorKind::kFedAvg:
          t = TimeSeconds([&] { FedAvg(round.updates); });
          break;
        case AggregatorKind::kKrum:
          t = TimeSeconds([&] { Krum(round.updates, krum_f_ok); });
          break;
        case AggregatorKind::kMedian:
          t = TimeSeconds([&] { CoordMedian(round.updates); });
          break;
        case AggregatorKind::kTrimmedMean:
          t = TimeSeconds([&] { TrimmedMean(round.updates, 0.2); });
          break;
        case AggregatorKind::kFlameLite:
          t = TimeSeconds([&] { FlameLite(round.updates, 0.001, opts.seed + r); });
          break;
        case AggregatorKind::kGShield: {
          BenignProfile p = profile;
          t = TimeSeconds(
              [&] { GShieldAggregate(round.updates, round.last_layer, p, 2, opts.seed); });
          break;
        }
      }
      row.seconds.push_back(t);
    }
  }
  for (BenchRow& row : rows) {
    row.median_s = Quantile(row.seconds, 0.5);
    row.q1_s = Quantile(row.seconds, 0.25);
    row.q3_s = Quantile(row.seconds, 0.75);
  }
  return rows;
}

void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "aggregator,median_s,iqr_s,q1_s,q3_s,repeats\n";
  for (const BenchRow& r : rows) {
    out << AggregatorName(r.kind) << ',' << FormatDouble(r.median_s) << ','
        << FormatDouble(r.iqr_s()) << ',' << FormatDouble(r.q1_s) << ','
        << FormatDouble(r.q3_s) << ',' << r.seconds.size() << '\n';
  }
}

void PrintBenchTable(const std::vector<BenchRow>& rows, std::ostream& out) {
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %14s %14s\n", "aggregator", "median_s", "iqr_s");
  out << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof(line), "%-10s %14.6e %14.6e\n",
                  std::string(AggregatorName(r.kind)).c_str(), r.median_s, r.iqr_s());
    out << line;
  }
}

}  // namespace fedshield
