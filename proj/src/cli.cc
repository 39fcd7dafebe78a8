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

#include "fedshield/cli.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fedshield/config.h"
#include "fedshield/results.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

namespace fs = std::filesystem;

struct RunOutcome {
  RunSummary summary;
  std::vector<std::string> files;
};

// Runs one validated config and writes its per-run artifacts.
RunOutcome RunAndWrite(const FederationConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  const std::vector<RoundRecord> records = RunExperiment(cfg);
  RunOutcome outcome;
  outcome.summary = Summarize(records, cfg.t_safe);
  WriteRoundsCsv(records, dir / "rounds.csv");
  WriteSelectionsJsonl(records, dir / "selections.jsonl");
  WriteTextFile(dir / "summary.json", SummaryJson(outcome.summary, cfg));
  WriteTextFile(dir / "config.txt", FormatConfig(cfg));
  outcome.files = {"rounds.csv", "selections.jsonl", "summary.json", "config.txt"};
  return outcome;
}

}  // namespace

int CmdRun(const fs::path& config_path, const fs::path& output_dir, std::ostream& out,
           std::ostream& err) {
  const std::string started = UtcTimestamp();
  FederationConfig cfg;
  try {
    cfg = LoadConfigFile(config_path);
    ApplySeedEnvironment(cfg);
    cfg.Validate();
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    RunOutcome outcome = RunAndWrite(cfg, output_dir);
    ManifestEntry entry{"run", "ok", "", outcome.files};
    WriteTextFile(output_dir / "manifest.json",
                  ManifestJson("run", FormatConfig(cfg), started, {entry}));
    out << "final_f1 " << FormatDouble(outcome.summary.final_f1) << "\nfinal_srecall "
        << FormatDouble(outcome.summary.final_source_recall) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

uint64_t SweepCellSeed(uint64_t master_seed, double pmr, int t_safe) {
  const auto pmr_ppm = static_cast<uint64_t>(std::llround(pmr * 1e6));
  return DeriveSeed(master_seed, {pmr_ppm, static_cast<uint64_t>(t_safe)});
}

std::string SweepCellName(std::string_view aggregator, double pmr, int t_safe) {
  std::ostringstream os;
  os << aggregator << "_pmr" << pmr << "_tsafe" << t_safe;
  return os.str();
}

int CmdSweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  const std::string started = UtcTimestamp();
  FederationConfig base;
  std::vector<AggregatorKind> kinds;
  try {
    if (opts.pmrs.empty()) throw ConfigError("--pmr", "needs at least one value");
    if (opts.t_safes.empty()) throw ConfigError("--tsafe", "needs at least one value");
    if (opts.aggregators.empty()) {
      throw ConfigError("--aggregator", "needs at least one value");
    }
    base = LoadConfigFile(opts.config_path);
    ApplySeedEnvironment(base);
    for (const std::string& name : opts.aggregators) {
      auto kind = ParseAggregator(name);
      if (!kind) throw ConfigError("--aggregator", "unknown aggregator '" + name + "'");
      kinds.push_back(*kind);
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  fs::create_directories(opts.output_dir);
  std::ostringstream comparison;
  comparison << "aggregator,pmr,t_safe,final_f1,final_srecall,"
                "mean_detection_precision,mean_detection_recall\n";
  std::vector<ManifestEntry> entries;
  int failures = 0;
  for (AggregatorKind kind : kinds) {
    for (double pmr : opts.pmrs) {
      for (int t_safe : opts.t_safes) {
        const std::string name = SweepCellName(AggregatorName(kind), pmr, t_safe);
        FederationConfig cfg = base;
        cfg.aggregator = kind;
        cfg.pmr = pmr;
        cfg.t_safe = t_safe;
        cfg.master_seed = SweepCellSeed(base.master_seed, pmr, t_safe);
        ManifestEntry entry{name, "ok", "", {}};
        try {
          cfg.Validate();
          RunOutcome outcome = RunAndWrite(cfg, opts.output_dir / name);
          entry.files = outcome.files;
          const RunSummary& s = outcome.summary;
          comparison << AggregatorName(kind) << ',' << FormatDouble(pmr) << ',' << t_safe
                     << ',' << FormatDouble(s.final_f1) << ','
                     << FormatDouble(s.final_source_recall) << ','
                     << FormatDouble(s.mean_detection_precision) << ','
                     << FormatDouble(s.mean_detection_recall) << '\n';
          out << name << ": ok\n";
        } catch (const std::exception& e) {
          ++failures;
          entry.status = "failed";
          entry.error = e.what();
          err << name << ": failed: " << e.what() << '\n';
        }
        entries.push_back(std::move(entry));
      }
    }
  }
  try {
    WriteTextFile(opts.output_dir / "comparison.csv", comparison.str());
    WriteTextFile(opts.output_dir / "manifest.json",
                  ManifestJson("sweep", FormatConfig(base), started, entries));
  } catch (const std::exception& e) {
    err << "sweep failed: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  out << entries.size() - failures << " of " << entries.size() << " cells succeeded\n";
  return failures == 0 ? kExitOk : kExitRuntimeError;
}

int CmdBench(const BenchOptions& opts, const fs::path& output_dir, std::ostream& out,
             std::ostream& err) {
  std::vector<BenchRow> rows;
  try {
    opts.Validate();
  } catch (const Error& e) {
    err << "argument error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    rows = RunAggregationBenchmark(opts);
    fs::create_directories(output_dir);
    std::ofstream csv(output_dir / "bench.csv", std::ios::binary);
    if (!csv) throw Error(ErrorCode::kIoError, "cannot write bench.csv");
    WriteBenchCsv(rows, csv);
  } catch (const std::exception& e) {
    err << "bench failed: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  PrintBenchTable(rows, out);
  return kExitOk;
}

}  // namespace fedshield
