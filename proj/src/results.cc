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

#include "fedshield/results.h"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fedshield/config.h"
#include "fedshield/error.h"
#include "json.hpp"

namespace fedshield {
namespace {

using nlohmann::ordered_json;

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseField(std::string_view cell, size_t line_no, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::kParseError, "rounds.csv line " + std::to_string(line_no) +
                                            ": bad " + column + " '" + std::string(cell) +
                                            "'");
  }
  return value;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RoundRow ToRow(const RoundRecord& rec) {
  RoundRow row;
  row.round = rec.round;
  row.f1 = rec.f1;
  row.source_recall = rec.source_recall;
  row.n_participants = static_cast<int>(rec.participant_ids.size());
  row.n_malicious_participants = static_cast<int>(rec.malicious_participant_ids.size());
  row.n_selected = static_cast<int>(rec.selected_ids.size());
  row.n_rejected = static_cast<int>(rec.rejected_ids.size());
  row.detection_precision = rec.detection_precision;
  row.detection_recall = rec.detection_recall;
  row.agg_wall_time_s = rec.agg_wall_time_s;
  return row;
}

void WriteRoundsCsv(const std::vector<RoundRecord>& records, std::ostream& out) {
  out << kRoundsCsvHeader << '\n';
  for (const RoundRecord& rec : records) {
    const RoundRow r = ToRow(rec);
    out << r.round << ',' << FormatDouble(r.f1) << ',' << FormatDouble(r.source_recall)
        << ',' << r.n_participants << ',' << r.n_malicious_participants << ','
        << r.n_selected << ',' << r.n_rejected << ','
        << FormatDouble(r.detection_precision) << ','
        << FormatDouble(r.detection_recall) << ',' << FormatDouble(r.agg_wall_time_s)
        << '\n';
  }
}

void WriteRoundsCsv(const std::vector<RoundRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  WriteRoundsCsv(records, out);
}

std::vector<RoundRow> ReadRoundsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRoundsCsvHeader) {
    throw Error(ErrorCode::kParseError, "rounds.csv: unexpected header");
  }
  std::vector<RoundRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCommas(line);
    if (cells.size() != 10) {
      throw Error(ErrorCode::kParseError,
                  "rounds.csv line " + std::to_string(line_no) + ": expected 10 columns");
    }
    RoundRow r;
    r.round = ParseField<int>(cells[0], line_no, "round");
    r.f1 = ParseField<double>(cells[1], line_no, "f1");
    r.source_recall = ParseField<double>(cells[2], line_no, "source_recall");
    r.n_participants = ParseField<int>(cells[3], line_no, "n_participants");
    r.n_malicious_participants =
        ParseField<int>(cells[4], line_no, "n_malicious_participants");
    r.n_selected = ParseField<int>(cells[5], line_no, "n_selected");
    r.n_rejected = ParseField<int>(cells[6], line_no, "n_rejected");
    r.detection_precision = ParseField<double>(cells[7], line_no, "detection_precision");
    r.detection_recall = ParseField<double>(cells[8], line_no, "detection_recall");
    r.agg_wall_time_s = ParseField<double>(cells[9], line_no, "agg_wall_time_s");
    rows.push_back(r);
  }
  return rows;
}

std::vector<RoundRow> ReadRoundsCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ReadRoundsCsv(in);
}

void WriteSelectionsJsonl(const std::vector<RoundRecord>& records,
                          const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  for (const RoundRecord& rec : records) {
    ordered_json j;
    j["round"] = rec.round;
    j["participants"] = rec.participant_ids;
    j["malicious"] = rec.malicious_participant_ids;
    j["selected"] = rec.selected_ids;
    j["rejected"] = rec.rejected_ids;
    if (!rec.similarity.empty()) {
      ordered_json sim = ordered_json::object();
      ordered_json dist = ordered_json::object();
      for (const auto& [id, v] : rec.similarity) sim[std::to_string(id)] = v;
      for (const auto& [id, v] : rec.distance) dist[std::to_string(id)] = v;
      j["similarity"] = std::move(sim);
      j["distance"] = std::move(dist);
      j["fallback_used"] = rec.fallback_used;
    }
    out << j.dump() << '\n';
  }
}

RunSummary Summarize(const std::vector<RoundRecord>& records, int t_safe) {
  RunSummary s;
  s.rounds = static_cast<int>(records.size());
  if (records.empty()) return s;
  s.final_f1 = records.back().f1;
  s.final_source_recall = records.back().source_recall;
  int counted = 0;
  double wall = 0.0;
  for (const RoundRecord& rec : records) {
    wall += rec.agg_wall_time_s;
    if (rec.fallback_used) ++s.fallback_rounds;
    if (rec.round > t_safe || t_safe >= s.rounds) {
      s.mean_detection_precision += rec.detection_precision;
      s.mean_detection_recall += rec.detection_recall;
      ++counted;
    }
  }
  if (counted > 0) {
    s.mean_detection_precision /= counted;
    s.mean_detection_recall /= counted;
  }
  s.mean_agg_wall_time_s = wall / static_cast<double>(records.size());
  return s;
}

std::string SummaryJson(const RunSummary& s, const FederationConfig& cfg) {
  ordered_json j;
  j["aggregator"] = std::string(AggregatorName(cfg.aggregator));
  j["pmr"] = cfg.pmr;
  j["t_safe"] = cfg.t_safe;
  j["master_seed"] = cfg.master_seed;
  j["rounds"] = s.rounds;
  j["final_f1"] = s.final_f1;
  j["final_srecall"] = s.final_source_recall;
  j["mean_detection_precision"] = s.mean_detection_precision;
  j["mean_detection_recall"] = s.mean_detection_recall;
  j["mean_agg_wall_time_s"] = s.mean_agg_wall_time_s;
  j["fallback_rounds"] = s.fallback_rounds;
  return j.dump(2) + "\n";
}

std::string ManifestJson(const std::string& command, const std::string& config_text,
                         const std::string& started_at,
                         const std::vector<ManifestEntry>& entries) {
  ordered_json j;
  j["tool"] = "fedshield";
  j["version"] = FEDSHIELD_VERSION;
  j["command"] = command;
  j["started_at"] = started_at;
  j["config"] = config_text;
  ordered_json runs = ordered_json::array();
  for (const ManifestEntry& e : entries) {
    ordered_json r;
    r["name"] = e.name;
    r["status"] = e.status;
    if (!e.error.empty()) r["error"] = e.error;
    r["files"] = e.files;
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = OpenForWrite(path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace fedshield
