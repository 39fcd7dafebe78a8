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

#include "fedshield/gshield.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "fedshield/error.h"

namespace fedshield {
namespace {

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

BenignProfile BenignProfile::Create(int t_safe, double z_alpha) {
  if (t_safe < 1) throw Error(ErrorCode::kInvalidSpec, "t_safe must be >= 1");
  if (!(z_alpha > 0.0)) throw Error(ErrorCode::kInvalidSpec, "z_alpha must be > 0");
  BenignProfile p;
  p.t_safe = t_safe;
  p.z_alpha = z_alpha;
  return p;
}

SimilarityScores ClientSimilarityScores(
    const std::vector<std::pair<int, Vec64>>& last_layer_grads) {
  if (last_layer_grads.size() < 2) {
    throw Error(ErrorCode::kEmptyRound, "similarity scoring needs >= 2 clients");
  }
  std::vector<const std::pair<int, Vec64>*> sorted;
  for (const auto& g : last_layer_grads) sorted.push_back(&g);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  const size_t k = sorted.size();
  const size_t dim = sorted.front()->second.size();
  SimilarityScores out;
  std::vector<bool> zero(k, false);
  std::vector<Vec64> rows;
  std::vector<size_t> live;  // indices with non-zero norm
  for (size_t i = 0; i < k; ++i) {
    const auto& [id, grad] = *sorted[i];
    if (i > 0 && id == sorted[i - 1]->first) {
      throw Error(ErrorCode::kDimMismatch, "duplicate client id " + std::to_string(id));
    }
    if (grad.size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "client " + std::to_string(id) + " last-layer length differs");
    }
    out.ids.push_back(id);
    if (L2Norm(grad) < kZeroNormTolerance) {
      zero[i] = true;
      out.zero_norm_ids.push_back(id);
    } else {
      live.push_back(i);
      rows.push_back(grad);
    }
  }

  out.matrix = SimMatrix(k);
  for (size_t i = 0; i < k; ++i) out.matrix(i, i) = 1.0;
  if (rows.size() >= 2) {
    const SimMatrix live_cos = PairwiseCosine(rows);
    for (size_t a = 0; a < live.size(); ++a) {
      for (size_t b = 0; b < live.size(); ++b) {
        if (a != b) out.matrix(live[a], live[b]) = live_cos(a, b);
      }
    }
  }

  for (size_t i = 0; i < k; ++i) {
    if (zero[i]) {
      out.sim[out.ids[i]] = -1.0;
      continue;
    }
    double s = 0.0;
    size_t peers = 0;
    for (size_t j : live) {
      if (j == i) continue;
      s += out.matrix(i, j);
      ++peers;
    }
    out.sim[out.ids[i]] = peers == 0 ? 0.0 : s / static_cast<double>(peers);
  }
  return out;
}

SelectionOutcome SafeRoundSelect(const SimilarityScores& scores,
                                 BenignProfile& profile, int round,
                                 uint64_t seed, int kmeans_iters) {
  if (profile.phase != Phase::kSafe) {
    throw Error(ErrorCode::kInvalidSpec, "profile already left the safe phase");
  }
  const size_t k = scores.ids.size();
  std::vector<Vec64> points;
  for (size_t i = 0; i < k; ++i) {
    auto r = scores.matrix.row(i);
    points.emplace_back(r.begin(), r.end());
  }
  const KMeansResult km = KMeans2(points, kmeans_iters, seed);

  std::array<std::vector<size_t>, 2> members;
  for (size_t i = 0; i < k; ++i) members[km.assignments[i]].push_back(i);
  auto mean_sim = [&](const std::vector<size_t>& idx) {
    double s = 0.0;
    for (size_t i : idx) s += scores.sim.at(scores.ids[i]);
    return idx.empty() ? -std::numeric_limits<double>::infinity()
                       : s / static_cast<double>(idx.size());
  };
  int major = 0;
  if (members[1].size() != members[0].size()) {
    major = members[1].size() > members[0].size() ? 1 : 0;
  } else {
    const double m0 = mean_sim(members[0]);
    const double m1 = mean_sim(members[1]);
    if (m0 != m1) {
      major = m1 > m0 ? 1 : 0;
    } else {
      major = km.assignments[0];  // cluster holding the lowest id
    }
  }

  const std::set<int> zero(scores.zero_norm_ids.begin(), scores.zero_norm_ids.end());
  SelectionOutcome outcome;
  outcome.per_client_sim = scores.sim;
  outcome.cluster_sizes = {members[major].size(), members[1 - major].size()};
  std::vector<double> benign_sims;
  for (size_t i = 0; i < k; ++i) {
    const int id = scores.ids[i];
    if (km.assignments[i] == major && !zero.count(id)) {
      outcome.benign_ids.push_back(id);
      benign_sims.push_back(scores.sim.at(id));
    } else {
      outcome.rejected_ids.push_back(id);
    }
  }
  if (!benign_sims.empty()) {
    const GaussianStats g = GaussianFit(benign_sims);
    profile.safe_means.push_back(g.mean);
    profile.safe_stds.push_back(g.std);
  }
  if (round >= profile.t_safe && !profile.safe_means.empty()) {
    profile.mu = Mean(profile.safe_means);
    profile.sigma = Mean(profile.safe_stds);
    profile.phase = Phase::kDetection;
  }
  return outcome;
}

SelectionOutcome Detect(const std::map<int, double>& sims,
                        const BenignProfile& profile) {
  if (profile.phase != Phase::kDetection) {
    throw Error(ErrorCode::kInvalidSpec, "profile is still in the safe phase");
  }
  const GaussianStats g{profile.mu, profile.sigma, profile.safe_means.size()};
  SelectionOutcome outcome;
  outcome.per_client_sim = sims;
  int closest = 0;
  double closest_d = std::numeric_limits<double>::infinity();
  bool have_closest = false;
  for (const auto& [id, sim] : sims) {
    const double d = ZScore(sim, g);
    outcome.per_client_distance[id] = d;
    if (d <= profile.z_alpha) {
      outcome.benign_ids.push_back(id);
    } else {
      outcome.rejected_ids.push_back(id);
    }
    if (!have_closest || d < closest_d) {
      closest = id;
      closest_d = d;
      have_closest = true;
    }
  }
  if (outcome.benign_ids.empty() && have_closest) {
    outcome.fallback_used = true;
    outcome.benign_ids.push_back(closest);
    std::erase(outcome.rejected_ids, closest);
  }
  return outcome;
}

GShieldRound GShieldAggregate(
    std::span<const ClientUpdate> updates,
    const std::vector<std::pair<int, Vec64>>& last_layer_grads,
    BenignProfile& profile, int round, uint64_t seed, int kmeans_iters) {
  const auto start = std::chrono::steady_clock::now();
  if (updates.empty()) throw Error(ErrorCode::kEmptyRound, "no client updates");
  std::set<int> update_ids;
  for (const auto& u : updates) update_ids.insert(u.client_id);
  std::set<int> grad_ids;
  for (const auto& g : last_layer_grads) grad_ids.insert(g.first);
  if (update_ids != grad_ids || update_ids.size() != updates.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "updates and last-layer gradients cover different clients");
  }

  GShieldRound out;
  if (updates.size() == 1) {
    // Nothing to compare against: a lone client is accepted as is.
    out.selection.benign_ids = {updates.front().client_id};
  } else {
    const SimilarityScores scores = ClientSimilarityScores(last_layer_grads);
    if (round <= profile.t_safe && profile.phase == Phase::kSafe) {
      out.selection = SafeRoundSelect(scores, profile, round, seed, kmeans_iters);
    } else {
      out.selection = Detect(scores.sim, profile);
    }
  }

  const std::set<int> benign(out.selection.benign_ids.begin(),
                             out.selection.benign_ids.end());
  std::vector<ClientUpdate> kept;
  for (const auto& u : updates) {
    if (benign.count(u.client_id)) kept.push_back(u);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptyRound, "no benign client survived selection");
  }
  out.aggregation = FedAvg(kept);
  out.aggregation.rejected_ids = out.selection.rejected_ids;
  out.aggregation.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace fedshield
