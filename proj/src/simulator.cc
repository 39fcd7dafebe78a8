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

#include "fedshield/simulator.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "fedshield/metrics.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

// Stream tags for DeriveSeed.
enum : uint64_t {
  kTagData = 1,
  kTagSplit,
  kTagPartition,
  kTagAdversary,
  kTagFlip,
  kTagInit,
  kTagSample,
  kTagTrain,
  kTagDp,
  kTagAggregate,
};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool InOpenUnit(double v) { return v > 0.0 && v <= 1.0; }

// Clips the model delta (learning_rate * g) to clip_norm and adds Gaussian
// noise of scale noise_multiplier * clip_norm to it, then maps back to the
// gradient scale the aggregators consume.
void ApplyDp(const DpConfig& dp, double learning_rate, Vec64& g, uint64_t seed) {
  const double delta_norm = learning_rate * L2Norm(g);
  const double scale =
      delta_norm > dp.clip_norm ? dp.clip_norm / delta_norm : 1.0;
  const double sigma = dp.noise_multiplier * dp.clip_norm / learning_rate;
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  for (double& v : g) {
    v *= scale;
    if (sigma > 0.0) v += noise(rng);
  }
}

}  // namespace

std::string_view AggregatorName(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kFedAvg:
      return "FedAvg";
    case AggregatorKind::kKrum:
      return "Krum";
    case AggregatorKind::kMedian:
      return "Median";
    case AggregatorKind::kTrimmedMean:
      return "TMean";
    case AggregatorKind::kFlameLite:
      return "FlameLite";
    case AggregatorKind::kGShield:
      return "GShield";
  }
  return "?";
}

std::optional<AggregatorKind> ParseAggregator(std::string_view name) {
  const std::string n = Lower(name);
  for (AggregatorKind k : kAllAggregators) {
    if (n == Lower(AggregatorName(k))) return k;
  }
  if (n == "trimmed_mean" || n == "trimmedmean") return AggregatorKind::kTrimmedMean;
  if (n == "flame" || n == "flame_lite") return AggregatorKind::kFlameLite;
  return std::nullopt;
}

void FederationConfig::Validate() const {
  if (num_clients < 2) throw ConfigError("num_clients", "must be >= 2");
  if (!InOpenUnit(participation)) {
    throw ConfigError("participation", "must be in (0, 1]");
  }
  if (rounds < 1) throw ConfigError("rounds", "must be >= 1");
  if (t_safe < 1) throw ConfigError("t_safe", "must be >= 1");
  if (t_safe >= rounds) throw ConfigError("t_safe", "must be < rounds");
  if (!(pmr >= 0.0 && pmr < 0.5)) {
    throw ConfigError("pmr",
                      "must satisfy 0 <= pmr < 0.5 (honest-majority bound)");
  }
  const int classes = data.kind == DataSourceConfig::Kind::kSynthetic
                          ? data.num_classes
                          : std::max({attack.source_class, attack.target_class}) + 1;
  if (attack.source_class < 0 || attack.source_class >= classes) {
    throw ConfigError("attack.source_class", "out of range");
  }
  if (attack.target_class < 0 || attack.target_class >= classes) {
    throw ConfigError("attack.target_class", "out of range");
  }
  if (attack.source_class == attack.target_class) {
    throw ConfigError("attack.target_class", "must differ from attack.source_class");
  }
  if (!InOpenUnit(attack.flip_fraction)) {
    throw ConfigError("attack.flip_fraction", "must be in (0, 1]");
  }
  if (train.epochs < 1) throw ConfigError("train.epochs", "must be >= 1");
  if (train.batch_size < 1) throw ConfigError("train.batch_size", "must be >= 1");
  if (!(train.learning_rate > 0.0)) {
    throw ConfigError("train.learning_rate", "must be > 0");
  }
  if (hidden_dim < 0) throw ConfigError("model.hidden_dim", "must be >= 0");
  if (data.kind == DataSourceConfig::Kind::kSynthetic) {
    if (data.num_classes < 2) throw ConfigError("data.num_classes", "must be >= 2");
    if (data.dim < 2) throw ConfigError("data.dim", "must be >= 2");
    if (data.samples_per_class < 1) {
      throw ConfigError("data.samples_per_class", "must be >= 1");
    }
    if (!(data.separation > 0.0)) throw ConfigError("data.separation", "must be > 0");
  } else if (data.csv_path.empty()) {
    throw ConfigError("data.csv_path", "required when data.source = csv");
  }
  if (!(data.test_fraction > 0.0 && data.test_fraction < 1.0)) {
    throw ConfigError("data.test_fraction", "must be in (0, 1)");
  }
  if (!(dirichlet_alpha > 0.0)) throw ConfigError("dirichlet_alpha", "must be > 0");
  if (!(z_alpha > 0.0)) throw ConfigError("z_alpha", "must be > 0");
  if (dp.enabled) {
    if (!(dp.clip_norm > 0.0)) throw ConfigError("dp.clip_norm", "must be > 0");
    if (!(dp.noise_multiplier >= 0.0)) {
      throw ConfigError("dp.noise_multiplier", "must be >= 0");
    }
  }
  if (!(server_lr > 0.0)) throw ConfigError("server_lr", "must be > 0");
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw ConfigError("tmean.trim_fraction", "must be in [0, 0.5)");
  }
  if (!(flame_noise >= 0.0)) throw ConfigError("flame.noise_scale", "must be >= 0");
  if (kmeans_iters < 1) throw ConfigError("kmeans.max_iters", "must be >= 1");
  if (aggregator == AggregatorKind::kKrum) {
    const int k = ParticipantsPerRound();
    if (k < 2 * KrumF() + 3) {
      throw ConfigError("krum.num_malicious",
                        "Krum needs K >= 2f + 3 (K = " + std::to_string(k) +
                            ", f = " + std::to_string(KrumF()) + ")");
    }
  }
  if (aggregator == AggregatorKind::kFlameLite && ParticipantsPerRound() < 3) {
    throw ConfigError("participation", "FlameLite needs >= 3 participants");
  }
}

int FederationConfig::ParticipantsPerRound() const {
  const auto k = static_cast<int>(std::lround(participation * num_clients));
  return std::clamp(k, 1, num_clients);
}

int FederationConfig::KrumF() const {
  if (krum_f >= 0) return krum_f;
  return static_cast<int>(std::ceil(0.25 * ParticipantsPerRound()));
}

std::vector<int> AssignAdversaries(int num_clients, double pmr, uint64_t seed) {
  if (!(pmr >= 0.0 && pmr < 0.5)) {
    throw ConfigError("pmr", "must satisfy 0 <= pmr < 0.5 (honest-majority bound)");
  }
  const auto count = static_cast<size_t>(std::floor(pmr * num_clients));
  std::vector<int> ids(static_cast<size_t>(num_clients));
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Dataset LoadExperimentData(const FederationConfig& cfg) {
  const auto& d = cfg.data;
  if (d.kind == DataSourceConfig::Kind::kSynthetic) {
    return GenerateSynthetic(d.num_classes, d.samples_per_class, d.dim,
                             d.separation, DeriveSeed(cfg.master_seed, {kTagData}));
  }
  LabelColumn label = d.label_column;
  try {
    size_t pos = 0;
    const int idx = std::stoi(d.label_column, &pos);
    if (pos == d.label_column.size()) label = idx;
  } catch (const std::exception&) {
  }
  return LoadCsv(d.csv_path, label);
}

Simulation::Simulation(const FederationConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  Setup(LoadExperimentData(cfg_));
}

Simulation::Simulation(const FederationConfig& cfg, const Dataset& data)
    : cfg_(cfg) {
  cfg_.Validate();
  Setup(data);
}

void Simulation::Setup(const Dataset& data) {
  data.Validate();
  cfg_.attack.Validate(data.num_classes);
  const uint64_t seed = cfg_.master_seed;
  split_ = StratifiedSplit(data, cfg_.data.test_fraction, DeriveSeed(seed, {kTagSplit}));
  plan_ = DirichletPartition(split_.train, cfg_.num_clients, cfg_.dirichlet_alpha,
                             DeriveSeed(seed, {kTagPartition}));
  clean_.clear();
  for (const auto& idx : plan_.client_indices) clean_.push_back(split_.train.Subset(idx));

  const auto adv = AssignAdversaries(cfg_.num_clients, cfg_.pmr,
                                     DeriveSeed(seed, {kTagAdversary}));
  adversaries_ = std::set<int>(adv.begin(), adv.end());
  for (int id : adv) {
    FlipResult flipped = FlipLabels(clean_[id], cfg_.attack,
                                    DeriveSeed(seed, {kTagFlip, static_cast<uint64_t>(id)}));
    if (flipped.no_source_samples) inert_.push_back(id);
    poisoned_.emplace(id, std::move(flipped.data));
  }

  const ModelLayout layout(data.dim, static_cast<size_t>(cfg_.hidden_dim),
                           data.num_classes);
  weights_ = InitWeights(layout, DeriveSeed(seed, {kTagInit}));
  profile_ = BenignProfile::Create(cfg_.t_safe, cfg_.z_alpha);
}

const Dataset& Simulation::client_data(int id, bool poisoned) const {
  if (poisoned) {
    auto it = poisoned_.find(id);
    if (it != poisoned_.end()) return it->second;
  }
  return clean_.at(static_cast<size_t>(id));
}

std::vector<int> Simulation::SampleParticipants(int t) const {
  std::vector<int> ids(static_cast<size_t>(cfg_.num_clients));
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(DeriveSeed(cfg_.master_seed, {kTagSample, static_cast<uint64_t>(t)}));
  const size_t k = static_cast<size_t>(cfg_.ParticipantsPerRound());
  // Partial Fisher-Yates.
  for (size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<size_t> pick(i, ids.size() - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

RoundRecord Simulation::RunRound(int t) {
  if (t != last_round_ + 1 || t > cfg_.rounds) {
    throw RoundFailure(t, "rounds must run in order 1.." + std::to_string(cfg_.rounds));
  }
  try {
    const uint64_t seed = cfg_.master_seed;
    const auto ut = static_cast<uint64_t>(t);
    const bool attack_active = t >= cfg_.AttackStartRound();

    RoundRecord rec;
    rec.round = t;
    rec.participant_ids = SampleParticipants(t);

    std::vector<ClientUpdate> raw;
    for (int id : rec.participant_ids) {
      const bool malicious = adversaries_.count(id) > 0;
      if (malicious && attack_active) rec.malicious_participant_ids.push_back(id);
      const Dataset& local = client_data(id, malicious && attack_active);
      TrainConfig tc = cfg_.train;
      tc.seed = DeriveSeed(seed, {kTagTrain, ut, static_cast<uint64_t>(id)});
      LocalTrainResult lt = LocalTrain(weights_, local, tc);
      raw.push_back({id, std::move(lt.cumulative_gradient), local.size()});
    }

    std::vector<ClientUpdate> delivered = raw;
    if (cfg_.dp.enabled) {
      for (auto& u : delivered) {
        ApplyDp(cfg_.dp, cfg_.train.learning_rate, u.gradient,
                DeriveSeed(seed, {kTagDp, ut, static_cast<uint64_t>(u.client_id)}));
      }
    }
    if (observer_) observer_(t, raw, delivered);

    const uint64_t agg_seed = DeriveSeed(seed, {kTagAggregate, ut});
    AggregationResult agg;
    switch (cfg_.aggregator) {
      case AggregatorKind::kFedAvg:
        agg = FedAvg(delivered);
        break;
      case AggregatorKind::kKrum:
        agg = Krum(delivered, cfg_.KrumF());
        break;
      case AggregatorKind::kMedian:
        agg = CoordMedian(delivered);
        break;
      case AggregatorKind::kTrimmedMean:
        agg = TrimmedMean(delivered, cfg_.trim_fraction);
        break;
      case AggregatorKind::kFlameLite:
        agg = FlameLite(delivered, cfg_.flame_noise, agg_seed, cfg_.kmeans_iters);
        break;
      case AggregatorKind::kGShield: {
        std::vector<std::pair<int, Vec64>> last;
        for (const auto& u : delivered) {
          auto s = LastLayerSlice(u.gradient, weights_.layout);
          last.emplace_back(u.client_id, Vec64(s.begin(), s.end()));
        }
        GShieldRound gs =
            GShieldAggregate(delivered, last, profile_, t, agg_seed, cfg_.kmeans_iters);
        agg = std::move(gs.aggregation);
        rec.similarity = std::move(gs.selection.per_client_sim);
        rec.distance = std::move(gs.selection.per_client_distance);
        rec.fallback_used = gs.selection.fallback_used;
        break;
      }
    }

    const double step = cfg_.server_lr * cfg_.train.learning_rate;
    for (size_t j = 0; j < weights_.values.size(); ++j) {
      weights_.values[j] -= step * agg.aggregate[j];
    }

    const std::vector<int> predicted = Predict(weights_, split_.test.features);
    rec.f1 = MacroF1(split_.test.labels, predicted, split_.test.num_classes);
    rec.source_recall =
        SourceRecall(split_.test.labels, predicted, cfg_.attack.source_class);
    rec.selected_ids = std::move(agg.selected_ids);
    rec.rejected_ids = std::move(agg.rejected_ids);
    const DetectionQuality dq = ComputeDetectionQuality(
        rec.rejected_ids, rec.malicious_participant_ids, rec.participant_ids);
    rec.detection_precision = dq.precision;
    rec.detection_recall = dq.recall;
    rec.agg_wall_time_s = agg.wall_time_seconds;
    last_round_ = t;
    return rec;
  } catch (const RoundFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw RoundFailure(t, e.what());
  }
}

std::vector<RoundRecord> RunExperiment(const FederationConfig& cfg,
                                       WeightVector* final_weights) {
  Simulation sim(cfg);
  std::vector<RoundRecord> records;
  records.reserve(static_cast<size_t>(cfg.rounds));
  for (int t = 1; t <= cfg.rounds; ++t) records.push_back(sim.RunRound(t));
  if (final_weights) *final_weights = sim.global_weights();
  return records;
}

}  // namespace fedshield
