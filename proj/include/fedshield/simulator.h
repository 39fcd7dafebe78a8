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

#ifndef FEDSHIELD_SIMULATOR_H_
#define FEDSHIELD_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedshield/aggregation.h"
#include "fedshield/dataset.h"
#include "fedshield/error.h"
#include "fedshield/gshield.h"
#include "fedshield/model.h"

namespace fedshield {

enum class AggregatorKind { kFedAvg, kKrum, kMedian, kTrimmedMean, kFlameLite, kGShield };

inline constexpr AggregatorKind kAllAggregators[] = {
    AggregatorKind::kFedAvg,      AggregatorKind::kKrum,
    AggregatorKind::kMedian,      AggregatorKind::kTrimmedMean,
    AggregatorKind::kFlameLite,   AggregatorKind::kGShield};

// Canonical names: FedAvg, Krum, Median, TMean, FlameLite, GShield.
std::string_view AggregatorName(AggregatorKind kind);
// Case-insensitive; also accepts "trimmed_mean" and "flame".
std::optional<AggregatorKind> ParseAggregator(std::string_view name);

struct DataSourceConfig {
  enum class Kind { kSynthetic, kCsv };
  Kind kind = Kind::kSynthetic;
  int num_classes = 4;
  int samples_per_class = 250;
  int dim = 8;
  double separation = 6.0;
  std::string csv_path;
  std::string label_column = "-1";  // column name, or integer index
  double test_fraction = 0.2;
};

struct DpConfig {
  bool enabled = false;
  double clip_norm = 1.0;
  double noise_multiplier = 0.1;
};

struct FederationConfig {
  int num_clients = 20;
  double participation = 0.5;
  int rounds = 40;
  int t_safe = 5;
  double pmr = 0.25;
  AttackSpec attack{0, 1, 1.0};
  // Adversaries normally stay honest through the safe phase and start
  // poisoning at round t_safe + 1; setting this poisons from round 1.
  bool poison_safe_phase = false;
  AggregatorKind aggregator = AggregatorKind::kGShield;
  TrainConfig train{2, 16, 0.05, 0};
  int hidden_dim = 0;
  DataSourceConfig data;
  double dirichlet_alpha = 0.5;
  double z_alpha = 2.0;
  DpConfig dp;
  uint64_t master_seed = 1;
  // The server step is w -= server_lr * train.learning_rate * g_agg.
  double server_lr = 1.0;
  int krum_f = -1;  // < 0: ceil(0.25 * K)
  double trim_fraction = 0.2;
  double flame_noise = 0.001;
  int kmeans_iters = 100;

  // Throws ConfigError naming the first offending field.
  void Validate() const;
  int ParticipantsPerRound() const;
  int KrumF() const;
  int AttackStartRound() const { return poison_safe_phase ? 1 : t_safe + 1; }
};

struct RoundRecord {
  int round = 0;
  std::vector<int> participant_ids;
  std::vector<int> malicious_participant_ids;  // active adversaries only
  std::vector<int> selected_ids;
  std::vector<int> rejected_ids;
  double f1 = 0.0;
  double source_recall = 0.0;
  double detection_precision = 1.0;
  double detection_recall = 1.0;
  double agg_wall_time_s = 0.0;
  // GShield detail; empty for other aggregators.
  std::map<int, double> similarity;
  std::map<int, double> distance;
  bool fallback_used = false;
};

class RoundFailure : public Error {
 public:
  RoundFailure(int round, const std::string& message)
      : Error(ErrorCode::kRoundFailed,
              "round " + std::to_string(round) + ": " + message),
        round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

// floor(pmr * n) distinct ids drawn uniformly, ascending.
std::vector<int> AssignAdversaries(int num_clients, double pmr, uint64_t seed);

// Builds the dataset for a config (synthetic or CSV).
Dataset LoadExperimentData(const FederationConfig& cfg);

// Sees each round's updates as trained (`raw`) and as handed to the
// aggregator (`delivered`, after the DP hook).
using UpdateObserver =
    std::function<void(int round, const std::vector<ClientUpdate>& raw,
                       const std::vector<ClientUpdate>& delivered)>;

// Server-side state of one federated run.
class Simulation {
 public:
  explicit Simulation(const FederationConfig& cfg);
  // Same, with a pre-loaded dataset instead of cfg.data.
  Simulation(const FederationConfig& cfg, const Dataset& data);

  // Runs round t (1-based). Rounds must be run in order.
  RoundRecord RunRound(int t);

  const FederationConfig& config() const { return cfg_; }
  const WeightVector& global_weights() const { return weights_; }
  const std::set<int>& adversaries() const { return adversaries_; }
  const BenignProfile& profile() const { return profile_; }
  const Dataset& client_data(int id, bool poisoned) const;
  const Dataset& test_data() const { return split_.test; }
  const PartitionPlan& partition() const { return plan_; }
  // Clients whose local data held no source-class rows to flip.
  const std::vector<int>& inert_adversaries() const { return inert_; }

  // K ids sampled without replacement for round t, ascending.
  std::vector<int> SampleParticipants(int t) const;

  void set_update_observer(UpdateObserver obs) { observer_ = std::move(obs); }

 private:
  void Setup(const Dataset& data);

  FederationConfig cfg_;
  TrainTestSplit split_;
  PartitionPlan plan_;
  std::vector<Dataset> clean_;
  std::map<int, Dataset> poisoned_;
  std::set<int> adversaries_;
  std::vector<int> inert_;
  WeightVector weights_;
  BenignProfile profile_;
  int last_round_ = 0;
  UpdateObserver observer_;
};

// T rounds from a seeded model. Failures surface as RoundFailure.
std::vector<RoundRecord> RunExperiment(const FederationConfig& cfg,
                                       WeightVector* final_weights = nullptr);

}  // namespace fedshield

#endif  // FEDSHIELD_SIMULATOR_H_
