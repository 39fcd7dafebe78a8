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

#include "fedshield/aggregation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "fedshield/error.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Validates the round and returns pointers ordered by client_id.
std::vector<const ClientUpdate*> Canonical(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw Error(ErrorCode::kEmptyRound, "no client updates");
  std::vector<const ClientUpdate*> sorted;
  sorted.reserve(updates.size());
  for (const auto& u : updates) sorted.push_back(&u);
  std::sort(sorted.begin(), sorted.end(),
            [](const ClientUpdate* a, const ClientUpdate* b) {
              return a->client_id < b->client_id;
            });
  const size_t dim = sorted.front()->gradient.size();
  if (dim == 0) throw Error(ErrorCode::kDimMismatch, "empty gradient");
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i]->gradient.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "client " + std::to_string(sorted[i]->client_id) +
                      " gradient has length " +
                      std::to_string(sorted[i]->gradient.size()));
    }
    if (i > 0 && sorted[i]->client_id == sorted[i - 1]->client_id) {
      throw Error(ErrorCode::kDimMismatch,
                  "duplicate client id " + std::to_string(sorted[i]->client_id));
    }
  }
  return sorted;
}

std::vector<int> Ids(const std::vector<const ClientUpdate*>& sorted) {
  std::vector<int> ids;
  ids.reserve(sorted.size());
  for (const auto* u : sorted) ids.push_back(u->client_id);
  return ids;
}

}  // namespace

AggregationResult FedAvg(std::span<const ClientUpdate> updates) {
  const auto start = Clock::now();
  const auto sorted = Canonical(updates);
  const size_t dim = sorted.front()->gradient.size();
  double total = 0.0;
  for (const auto* u : sorted) {
    if (u->num_samples == 0) {
      throw Error(ErrorCode::kEmptyRound,
                  "client " + std::to_string(u->client_id) + " has no samples");
    }
    total += static_cast<double>(u->num_samples);
  }
  AggregationResult result;
  result.aggregate.assign(dim, 0.0);
  for (const auto* u : sorted) {
    const double weight = static_cast<double>(u->num_samples) / total;
    for (size_t j = 0; j < dim; ++j) result.aggregate[j] += weight * u->gradient[j];
  }
  result.selected_ids = Ids(sorted);
  result.wall_time_seconds = SecondsSince(start);
  return result;
}

AggregationResult Krum(std::span<const ClientUpdate> updates, int num_malicious) {
  const auto start = Clock::now();
  const auto sorted = Canonical(updates);
  const auto k = static_cast<long>(sorted.size());
  if (num_malicious < 0 || k < 2L * num_malicious + 3) {
    throw Error(ErrorCode::kTooFewClients,
                "Krum needs K >= 2f + 3, got K = " + std::to_string(k) +
                    ", f = " + std::to_string(num_malicious));
  }
  const size_t n = sorted.size();
  std::vector<double> dist(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d = SquaredDistance(sorted[i]->gradient, sorted[j]->gradient);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  const size_t neighbours = n - static_cast<size_t>(num_malicious) - 2;
  size_t winner = 0;
  double best = 0.0;
  std::vector<double> row;
  for (size_t i = 0; i < n; ++i) {
    row.clear();
    for (size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(dist[i * n + j]);
    }
    std::sort(row.begin(), row.end());
    double score = 0.0;
    for (size_t j = 0; j < neighbours; ++j) score += row[j];
    if (i == 0 || score < best) {
      best = score;
      winner = i;
    }
  }
  AggregationResult result;
  result.aggregate = sorted[winner]->gradient;
  for (size_t i = 0; i < n; ++i) {
    (i == winner ? result.selected_ids : result.rejected_ids)
        .push_back(sorted[i]->client_id);
  }
  result.wall_time_seconds = SecondsSince(start);
  return result;
}

AggregationResult CoordMedian(std::span<const ClientUpdate> updates) {
  const auto start = Clock::now();
  const auto sorted = Canonical(updates);
  const size_t n = sorted.size();
  const size_t dim = sorted.front()->gradient.size();
  AggregationResult result;
  result.aggregate.resize(dim);
  std::vector<double> column(n);
  const size_t mid = n / 2;
  for (size_t j = 0; j < dim; ++j) {
    for (size_t i = 0; i < n; ++i) column[i] = sorted[i]->gradient[j];
    std::nth_element(column.begin(), column.begin() + mid, column.end());
    const double upper = column[mid];
    if (n % 2 == 1) {
      result.aggregate[j] = upper;
    } else {
      const double lower = *std::max_element(column.begin(), column.begin() + mid);
      result.aggregate[j] = (lower + upper) / 2.0;
    }
  }
  result.selected_ids = Ids(sorted);
  result.wall_time_seconds = SecondsSince(start);
  return result;
}

AggregationResult TrimmedMean(std::span<const ClientUpdate> updates,
                              double trim_fraction) {
  const auto start = Clock::now();
  const auto sorted = Canonical(updates);
  const size_t n = sorted.size();
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw Error(ErrorCode::kOverTrimmed, "trim fraction must be in [0, 0.5)");
  }
  const auto trim =
      static_cast<size_t>(std::floor(trim_fraction * static_cast<double>(n)));
  if (n < 2 * trim + 1) {
    throw Error(ErrorCode::kOverTrimmed,
                "trimming " + std::to_string(trim) + " per side leaves nothing of " +
                    std::to_string(n));
  }
  const size_t dim = sorted.front()->gradient.size();
  const size_t kept = n - 2 * trim;
  AggregationResult result;
  result.aggregate.resize(dim);
  std::vector<double> column(n);
  for (size_t j = 0; j < dim; ++j) {
    for (size_t i = 0; i < n; ++i) column[i] = sorted[i]->gradient[j];
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (size_t i = trim; i < n - trim; ++i) s += column[i];
    result.aggregate[j] = s / static_cast<double>(kept);
  }
  result.selected_ids = Ids(sorted);
  result.wall_time_seconds = SecondsSince(start);
  return result;
}

AggregationResult FlameLite(std::span<const ClientUpdate> updates,
                            double noise_scale, uint64_t seed, int kmeans_iters) {
  const auto start = Clock::now();
  const auto sorted = Canonical(updates);
  if (sorted.size() < 3) {
    throw Error(ErrorCode::kTooFewClients, "FlameLite needs >= 3 updates");
  }
  if (!(noise_scale >= 0.0)) {
    throw Error(ErrorCode::kInvalidSpec, "noise scale must be >= 0");
  }

  std::vector<const ClientUpdate*> usable;
  std::vector<double> norms;
  AggregationResult result;
  for (const auto* u : sorted) {
    const double norm = L2Norm(u->gradient);
    if (norm < kZeroNormTolerance) {
      result.rejected_ids.push_back(u->client_id);
    } else {
      usable.push_back(u);
      norms.push_back(norm);
    }
  }
  if (usable.empty()) throw Error(ErrorCode::kEmptyRound, "all updates are zero");

  // Stage 1: majority cluster over cosine-distance profiles.
  std::vector<bool> keep(usable.size(), true);
  if (usable.size() >= 2) {
    std::vector<Vec64> rows;
    for (const auto* u : usable) rows.push_back(u->gradient);
    const SimMatrix cos = PairwiseCosine(rows);
    std::vector<Vec64> profiles(usable.size(), Vec64(usable.size()));
    for (size_t i = 0; i < usable.size(); ++i) {
      for (size_t j = 0; j < usable.size(); ++j) profiles[i][j] = 1.0 - cos(i, j);
    }
    const KMeansResult km =
        KMeans2(profiles, kmeans_iters, DeriveSeed(seed, {0x464c414dULL}));
    const auto ones = static_cast<size_t>(
        std::count(km.assignments.begin(), km.assignments.end(), 1));
    const size_t zeros = usable.size() - ones;
    // Larger cluster wins; on a tie the one holding the lowest id (index 0).
    const int majority = ones > zeros ? 1 : (ones < zeros ? 0 : km.assignments[0]);
    const size_t majority_size = std::max(ones, zeros);
    if (2 * majority_size >= sorted.size()) {
      for (size_t i = 0; i < usable.size(); ++i) {
        keep[i] = km.assignments[i] == majority;
      }
    }
  }

  // Stage 2: clip to the median norm of the kept updates.
  std::vector<double> kept_norms;
  for (size_t i = 0; i < usable.size(); ++i) {
    if (keep[i]) kept_norms.push_back(norms[i]);
  }
  std::sort(kept_norms.begin(), kept_norms.end());
  const size_t m = kept_norms.size();
  const double clip = m % 2 == 1
                          ? kept_norms[m / 2]
                          : (kept_norms[m / 2 - 1] + kept_norms[m / 2]) / 2.0;

  // Stage 3: average and noise.
  const size_t dim = sorted.front()->gradient.size();
  result.aggregate.assign(dim, 0.0);
  for (size_t i = 0; i < usable.size(); ++i) {
    if (!keep[i]) {
      result.rejected_ids.push_back(usable[i]->client_id);
      continue;
    }
    result.selected_ids.push_back(usable[i]->client_id);
    const double scale = std::min(1.0, clip / norms[i]) / static_cast<double>(m);
    for (size_t j = 0; j < dim; ++j) {
      result.aggregate[j] += scale * usable[i]->gradient[j];
    }
  }
  if (noise_scale > 0.0) {
    Rng rng(DeriveSeed(seed, {0x6e6f697365ULL}));
    std::normal_distribution<double> noise(0.0, noise_scale * clip);
    for (double& v : result.aggregate) v += noise(rng);
  }
  std::sort(result.rejected_ids.begin(), result.rejected_ids.end());
  result.wall_time_seconds = SecondsSince(start);
  return result;
}

}  // namespace fedshield
