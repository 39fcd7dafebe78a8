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

#ifndef FEDSHIELD_CONFIG_H_
#define FEDSHIELD_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fedshield/simulator.h"

namespace fedshield {

// Experiment configs are flat `key = value` text. Keys use dotted section
// prefixes (`attack.source_class = 3`); `#` starts a comment; blank lines are
// ignored. Unknown keys and malformed values raise ConfigError naming the key.
// Parsing does not run FederationConfig::Validate.
FederationConfig ParseConfig(std::string_view text);
FederationConfig LoadConfigFile(const std::filesystem::path& path);

// Canonical text form; ParseConfig(FormatConfig(c)) reproduces c exactly.
std::string FormatConfig(const FederationConfig& cfg);

void ApplyOverride(FederationConfig& cfg, std::string_view key,
                   std::string_view value);

std::vector<std::string> ConfigKeys();

inline constexpr const char* kSeedEnvVar = "FEDSHIELD_SEED";

// Replaces master_seed with $FEDSHIELD_SEED when set. Returns true if it did.
bool ApplySeedEnvironment(FederationConfig& cfg);

}  // namespace fedshield

#endif  // FEDSHIELD_CONFIG_H_
