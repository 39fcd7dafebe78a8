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

#ifndef FEDSHIELD_GSHIELD_H_
#define FEDSHIELD_GSHIELD_H_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fedshield/aggregation.h"
#include "fedshield/numkit.h"

namespace fedshield {

enum class Phase { kSafe, kDetection };

// Gaussian baseline of benign similarity scores, learned during the first
// t_safe rounds. mu and sigma are meaningful only in the detection phase.
struct BenignProfile {
  Phase phase = Phase::kSafe;
  std::vector<double> safe_means;
  std::vector<double> safe_stds;
  double mu = 0.0;
  double sigma = 0.0;
  int t_safe = 5;
  double z_alpha = 2.0;

  static BenignProfile Create(int t_safe, double z_alpha);
};

struct SimilarityScores {
  std::vector<int> ids;  // ascending; row i of `matrix` belongs to ids[i]
  SimMatrix matrix;
  std::map<int, double> sim;
  std::vector<int> zero_norm_ids;
};

struct SelectionOutcome {
  std::vector<int> benign_ids;    // ascending
  std::vector<int> rejected_ids;  // ascending
  std::map<int, double> per_client_sim;
  std::map<int, double> per_client_distance;  // detection phase only
  std::pair<size_t, size_t> cluster_sizes{0, 0};  // safe phase only: (|C_max|, other)
  bool fallback_used = false;  // detection admitted nobody; closest kept
};

// Pairwise cosine of the last-layer gradients and each client's mean
// off-diagonal similarity. A zero-norm gradient gets sim = -1, its row and
// column are zeroed (diagonal kept at 1) and it is left out of the other
// clients' means. Needs >= 2 clients.
SimilarityScores ClientSimilarityScores(
    const std::vector<std::pair<int, Vec64>>& last_layer_grads);

// Safe-phase selection: 2-means over the rows of the similarity matrix, the
// larger cluster is benign (ties: higher mean sim, then lowest id). Zero-norm
// clients are always rejected. Appends (mean, std) of the benign sims to the
// profile; the profile is finalised when `round` == t_safe.
SelectionOutcome SafeRoundSelect(const SimilarityScores& scores,
                                 BenignProfile& profile, int round,
                                 uint64_t seed, int kmeans_iters = 100);

// Detection-phase threshold: benign iff |sim - mu| / sigma <= z_alpha. If that
// admits nobody, the client with the smallest distance is kept.
SelectionOutcome Detect(const std::map<int, double>& sims,
                        const BenignProfile& profile);

struct GShieldRound {
  AggregationResult aggregation;
  SelectionOutcome selection;
};

// Routes round `round` (1-based) to the safe or detection step and averages
// the benign clients' full-model gradients with FedAvg. wall_time covers
// the whole step, from scoring to the final average.
GShieldRound GShieldAggregate(
    std::span<const ClientUpdate> updates,
    const std::vector<std::pair<int, Vec64>>& last_layer_grads,
    BenignProfile& profile, int round, uint64_t seed, int kmeans_iters = 100);

}  // namespace fedshield

#endif  // FEDSHIELD_GSHIELD_H_
