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

#ifndef FEDSHIELD_AGGREGATION_H_
#define FEDSHIELD_AGGREGATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedshield/numkit.h"

namespace fedshield {

// One client's contribution to a round.
struct ClientUpdate {
  int client_id = 0;
  Vec64 gradient;  // full-model g_i^t
  size_t num_samples = 1;
};

struct AggregationResult {
  Vec64 aggregate;
  std::vector<int> selected_ids;  // ascending
  std::vector<int> rejected_ids;  // ascending
  double wall_time_seconds = 0.0;
};

// Every aggregator canonicalises its input by ascending client_id before
// reducing, so results are independent of input order. All throw
// Error(kEmptyRound) on an empty round and Error(kDimMismatch) on ragged
// gradients or duplicate ids.

// Sample-count-weighted mean; every client is selected.
AggregationResult FedAvg(std::span<const ClientUpdate> updates);

// Single Krum: the update with the smallest sum of squared distances to its
// K - f - 2 nearest neighbours, returned verbatim. Ties go to the lowest id.
// Requires K >= 2f + 3, else Error(kTooFewClients).
AggregationResult Krum(std::span<const ClientUpdate> updates, int num_malicious);

// Unweighted coordinate-wise median (mean of the middle pair for even K).
AggregationResult CoordMedian(std::span<const ClientUpdate> updates);

// Unweighted coordinate-wise mean after dropping floor(beta * K) values from
// each end. Requires 0 <= beta < 0.5 and at least one survivor.
AggregationResult TrimmedMean(std::span<const ClientUpdate> updates,
                              double trim_fraction);

// Simplified FLAME: 2-means over cosine-distance profiles of the full
// gradients keeps the majority cluster. Kept updates are clipped to their
// median L2 norm S before averaging; N(0, (noise_scale * S)^2) noise is then
// added per coordinate. Zero-norm updates are rejected outright. Needs K >= 3.
AggregationResult FlameLite(std::span<const ClientUpdate> updates,
                            double noise_scale, uint64_t seed,
                            int kmeans_iters = 100);

}  // namespace fedshield

#endif  // FEDSHIELD_AGGREGATION_H_
