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

#ifndef FEDSHIELD_RESULTS_H_
#define FEDSHIELD_RESULTS_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedshield/simulator.h"

namespace fedshield {

// 17 significant digits, enough to round-trip any double.
std::string FormatDouble(double v);

inline constexpr const char* kRoundsCsvHeader =
    "round,f1,source_recall,n_participants,n_malicious_participants,"
    "n_selected,n_rejected,detection_precision,detection_recall,"
    "agg_wall_time_s";

// One parsed rounds.csv line.
struct RoundRow {
  int round = 0;
  double f1 = 0.0;
  double source_recall = 0.0;
  int n_participants = 0;
  int n_malicious_participants = 0;
  int n_selected = 0;
  int n_rejected = 0;
  double detection_precision = 0.0;
  double detection_recall = 0.0;
  double agg_wall_time_s = 0.0;

  bool operator==(const RoundRow&) const = default;
};

RoundRow ToRow(const RoundRecord& rec);

void WriteRoundsCsv(const std::vector<RoundRecord>& records, std::ostream& out);
void WriteRoundsCsv(const std::vector<RoundRecord>& records,
                    const std::filesystem::path& path);
// Throws Error(kParseError) on a wrong header or malformed row.
std::vector<RoundRow> ReadRoundsCsv(std::istream& in);
std::vector<RoundRow> ReadRoundsCsv(const std::filesystem::path& path);

// Per-round id lists and GShield scores, one JSON object per line.
void WriteSelectionsJsonl(const std::vector<RoundRecord>& records,
                          const std::filesystem::path& path);

struct RunSummary {
  int rounds = 0;
  double final_f1 = 0.0;
  double final_source_recall = 0.0;
  // Means over rounds after t_safe (all rounds when t_safe >= rounds).
  double mean_detection_precision = 0.0;
  double mean_detection_recall = 0.0;
  double mean_agg_wall_time_s = 0.0;
  int fallback_rounds = 0;
};

RunSummary Summarize(const std::vector<RoundRecord>& records, int t_safe);
std::string SummaryJson(const RunSummary& s, const FederationConfig& cfg);

struct ManifestEntry {
  std::string name;
  std::string status;  // "ok" or "failed"
  std::string error;
  std::vector<std::string> files;
};

// config_text is the FormatConfig snapshot that reproduces the run.
std::string ManifestJson(const std::string& command, const std::string& config_text,
                         const std::string& started_at,
                         const std::vector<ManifestEntry>& entries);

std::string UtcTimestamp();

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace fedshield

#endif  // FEDSHIELD_RESULTS_H_
