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

#ifndef FEDSHIELD_BENCH_H_
#define FEDSHIELD_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fedshield/simulator.h"

namespace fedshield {

struct BenchOptions {
  int clients = 25;
  int model_dim = 10000;
  int last_layer_dim = 128;
  int repeats = 11;
  uint64_t seed = 1;

  // Throws ConfigError: needs clients >= 4, model_dim >= last_layer_dim >= 2,
  // repeats >= 3.
  void Validate() const;
};

struct BenchRow {
  AggregatorKind kind;
  std::vector<double> seconds;  // one sample per repeat
  double median_s = 0.0;
  double q1_s = 0.0;
  double q3_s = 0.0;
  double iqr_s() const { return q3_s - q1_s; }
};

// Linear-interpolated quantile of an unsorted sample, q in [0, 1].
double Quantile(std::vector<double> xs, double q);

// Times the pure aggregation step of every aggregator on `repeats` rounds of
// synthetic updates (a shared random direction plus per-client noise, so the
// cosine structure is realistic). GShield is timed in its detection phase,
// with a profile fitted on one warm-up round.
std::vector<BenchRow> RunAggregationBenchmark(const BenchOptions& opts);

void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out);
void PrintBenchTable(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace fedshield

#endif  // FEDSHIELD_BENCH_H_
