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

#include "fedshield/config.h"

#include <cctype>
#include <limits>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "fedshield/error.h"

namespace fedshield {
namespace {

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double ToDouble(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

long long ToInt(std::string_view key, std::string_view v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

int ToInt32(std::string_view key, std::string_view v) {
  const long long x = ToInt(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(key), "integer out of range");
  }
  return static_cast<int>(x);
}

uint64_t ToU64(std::string_view key, std::string_view v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key), "expected true/false, got '" + std::string(v) + "'");
}

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

using Setter = std::function<void(FederationConfig&, std::string_view, std::string_view)>;
using Getter = std::function<std::string(const FederationConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

#define FS_DOUBLE(member)                                                     \
  Field {                                                                     \
    [](FederationConfig& c, std::string_view k, std::string_view v) {         \
      c.member = ToDouble(k, v);                                              \
    },                                                                        \
        [](const FederationConfig& c) { return Num(c.member); }               \
  }
#define FS_INT(member)                                                        \
  Field {                                                                     \
    [](FederationConfig& c, std::string_view k, std::string_view v) {         \
      c.member = ToInt32(k, v);                                               \
    },                                                                        \
        [](const FederationConfig& c) { return std::to_string(c.member); }    \
  }
#define FS_BOOL(member)                                                       \
  Field {                                                                     \
    [](FederationConfig& c, std::string_view k, std::string_view v) {         \
      c.member = ToBool(k, v);                                                \
    },                                                                        \
        [](const FederationConfig& c) {                                       \
          return std::string(c.member ? "true" : "false");                    \
        }                                                                     \
  }

// Ordered as written by FormatConfig.
const std::vector<std::pair<std::string, Field>>& Fields() {
  static const auto* fields = new std::vector<std::pair<std::string, Field>>{
      {"num_clients", FS_INT(num_clients)},
      {"participation", FS_DOUBLE(participation)},
      {"rounds", FS_INT(rounds)},
      {"t_safe", FS_INT(t_safe)},
      {"pmr", FS_DOUBLE(pmr)},
      {"aggregator",
       {[](FederationConfig& c, std::string_view k, std::string_view v) {
          auto kind = ParseAggregator(v);
          if (!kind) {
            throw ConfigError(std::string(k),
                              "unknown aggregator '" + std::string(v) +
                                  "' (FedAvg, Krum, Median, TMean, FlameLite, GShield)");
          }
          c.aggregator = *kind;
        },
        [](const FederationConfig& c) { return std::string(AggregatorName(c.aggregator)); }}},
      {"master_seed",
       {[](FederationConfig& c, std::string_view k, std::string_view v) {
          c.master_seed = ToU64(k, v);
        },
        [](const FederationConfig& c) { return std::to_string(c.master_seed); }}},
      {"dirichlet_alpha", FS_DOUBLE(dirichlet_alpha)},
      {"z_alpha", FS_DOUBLE(z_alpha)},
      {"server_lr", FS_DOUBLE(server_lr)},
      {"attack.source_class", FS_INT(attack.source_class)},
      {"attack.target_class", FS_INT(attack.target_class)},
      {"attack.flip_fraction", FS_DOUBLE(attack.flip_fraction)},
      {"attack.poison_safe_phase", FS_BOOL(poison_safe_phase)},
      {"train.epochs", FS_INT(train.epochs)},
      {"train.batch_size", FS_INT(train.batch_size)},
      {"train.learning_rate", FS_DOUBLE(train.learning_rate)},
      {"model.hidden_dim", FS_INT(hidden_dim)},
      {"data.source",
       {[](FederationConfig& c, std::string_view k, std::string_view v) {
          if (v == "synthetic") {
            c.data.kind = DataSourceConfig::Kind::kSynthetic;
          } else if (v == "csv") {
            c.data.kind = DataSourceConfig::Kind::kCsv;
          } else {
            throw ConfigError(std::string(k), "expected 'synthetic' or 'csv'");
          }
        },
        [](const FederationConfig& c) {
          return std::string(c.data.kind == DataSourceConfig::Kind::kCsv ? "csv"
                                                                         : "synthetic");
        }}},
      {"data.num_classes", FS_INT(data.num_classes)},
      {"data.samples_per_class", FS_INT(data.samples_per_class)},
      {"data.dim", FS_INT(data.dim)},
      {"data.separation", FS_DOUBLE(data.separation)},
      {"data.csv_path",
       {[](FederationConfig& c, std::string_view, std::string_view v) {
          c.data.csv_path = std::string(v);
        },
        [](const FederationConfig& c) { return c.data.csv_path; }}},
      {"data.label_column",
       {[](FederationConfig& c, std::string_view, std::string_view v) {
          c.data.label_column = std::string(v);
        },
        [](const FederationConfig& c) { return c.data.label_column; }}},
      {"data.test_fraction", FS_DOUBLE(data.test_fraction)},
      {"dp.enabled", FS_BOOL(dp.enabled)},
      {"dp.clip_norm", FS_DOUBLE(dp.clip_norm)},
      {"dp.noise_multiplier", FS_DOUBLE(dp.noise_multiplier)},
      {"krum.num_malicious",
       {[](FederationConfig& c, std::string_view k, std::string_view v) {
          c.krum_f = v == "auto" ? -1 : ToInt32(k, v);
        },
        [](const FederationConfig& c) {
          return c.krum_f < 0 ? std::string("auto") : std::to_string(c.krum_f);
        }}},
      {"tmean.trim_fraction", FS_DOUBLE(trim_fraction)},
      {"flame.noise_scale", FS_DOUBLE(flame_noise)},
      {"kmeans.max_iters", FS_INT(kmeans_iters)},
  };
  return *fields;
}

#undef FS_DOUBLE
#undef FS_INT
#undef FS_BOOL

const Field* FindField(std::string_view key) {
  for (const auto& [name, field] : Fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

}  // namespace

void ApplyOverride(FederationConfig& cfg, std::string_view key,
                   std::string_view value) {
  const Field* field = FindField(key);
  if (!field) throw ConfigError(std::string(key), "unknown key");
  field->set(cfg, key, TrimView(value));
}

FederationConfig ParseConfig(std::string_view text) {
  FederationConfig cfg;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = TrimView(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    ApplyOverride(cfg, TrimView(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

FederationConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string FormatConfig(const FederationConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : Fields()) {
    out += name + " = " + field.get(cfg) + "\n";
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [name, field] : Fields()) keys.push_back(name);
  return keys;
}

bool ApplySeedEnvironment(FederationConfig& cfg) {
  const char* v = std::getenv(kSeedEnvVar);
  if (!v || !*v) return false;
  cfg.master_seed = ToU64(kSeedEnvVar, TrimView(v));
  return true;
}

}  // namespace fedshield
