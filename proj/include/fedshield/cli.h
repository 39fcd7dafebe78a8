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

#ifndef FEDSHIELD_CLI_H_
#define FEDSHIELD_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedshield/bench.h"

namespace fedshield {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

// Writes rounds.csv, summary.json, selections.jsonl, config.txt and
// manifest.json into output_dir. $FEDSHIELD_SEED overrides master_seed.
int CmdRun(const std::filesystem::path& config_path,
           const std::filesystem::path& output_dir, std::ostream& out,
           std::ostream& err);

struct SweepOptions {
  std::filesystem::path config_path;
  std::vector<double> pmrs;
  std::vector<int> t_safes;
  std::vector<std::string> aggregators;
  std::filesystem::path output_dir;
};

// Seed used by a sweep cell. Derived from the base seed and the (pmr, t_safe)
// coordinates only, so every aggregator in a row of the grid sees the same
// data and the same client sampling.
uint64_t SweepCellSeed(uint64_t master_seed, double pmr, int t_safe);

std::string SweepCellName(std::string_view aggregator, double pmr, int t_safe);

// One sub-directory per (aggregator, pmr, t_safe) cell plus comparison.csv and
// manifest.json. Failed cells are reported and skipped; the exit status is 2
// if any cell failed.
int CmdSweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

// Prints the timing table and writes bench.csv into output_dir.
int CmdBench(const BenchOptions& opts, const std::filesystem::path& output_dir,
             std::ostream& out, std::ostream& err);

}  // namespace fedshield

#endif  // FEDSHIELD_CLI_H_
