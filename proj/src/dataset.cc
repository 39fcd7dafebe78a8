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

#include "fedshield/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "fedshield/error.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

constexpr int kMaxPartitionRedraws = 32;

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(Trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(Trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::optional<double> ParseNumber(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long long> ParseInteger(const std::string& cell) {
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    return std::nullopt;
  }
  return value;
}

std::vector<double> SampleDirichlet(int k, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) {
    v = gamma(rng);
    total += v;
  }
  if (!(total > 0.0)) {
    // All draws underflowed (tiny alpha): put the mass on one client.
    std::fill(p.begin(), p.end(), 0.0);
    p[std::uniform_int_distribution<int>(0, k - 1)(rng)] = 1.0;
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  Dataset out;
  out.dim = dim;
  out.num_classes = num_classes;
  out.class_names = class_names;
  out.features.reserve(indices.size() * dim);
  out.labels.reserve(indices.size());
  for (size_t idx : indices) {
    auto r = row(idx);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[idx]);
  }
  return out;
}

std::vector<size_t> Dataset::ClassCounts() const {
  std::vector<size_t> counts(num_classes, 0);
  for (int l : labels) ++counts[l];
  return counts;
}

void Dataset::Validate() const {
  if (dim == 0) throw Error(ErrorCode::kInvalidSpec, "dataset has D = 0");
  if (num_classes < 1) throw Error(ErrorCode::kInvalidSpec, "num_classes < 1");
  if (features.size() != labels.size() * dim) {
    throw Error(ErrorCode::kInvalidSpec, "feature matrix shape mismatch");
  }
  for (int l : labels) {
    if (l < 0 || l >= num_classes) {
      throw Error(ErrorCode::kInvalidSpec,
                  "label " + std::to_string(l) + " out of range");
    }
  }
  for (double v : features) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidSpec, "non-finite feature value");
    }
  }
}

TrainTestSplit StratifiedSplit(const Dataset& data, double test_fraction,
                               uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "test_fraction must be in [0, 1)");
  }
  Rng rng(seed);
  std::vector<std::vector<size_t>> by_class(data.num_classes);
  for (size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
  std::vector<size_t> train_idx;
  std::vector<size_t> test_idx;
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n_test = static_cast<size_t>(
        std::llround(test_fraction * static_cast<double>(rows.size())));
    test_idx.insert(test_idx.end(), rows.begin(), rows.begin() + n_test);
    train_idx.insert(train_idx.end(), rows.begin() + n_test, rows.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {data.Subset(train_idx), data.Subset(test_idx)};
}

Dataset GenerateSynthetic(int num_classes, int samples_per_class, int dim,
                          double class_separation, uint64_t seed) {
  if (num_classes < 2 || dim < 2 || samples_per_class < 1 ||
      !(class_separation > 0.0)) {
    throw Error(ErrorCode::kInvalidSpec,
                "need num_classes >= 2, dim >= 2, samples_per_class >= 1 and "
                "separation > 0");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::vector<double>> centres(num_classes,
                                           std::vector<double>(dim, 0.0));
  if (num_classes <= dim) {
    // Scaled simplex corners e_c * sep / sqrt(2); the 1e-12 bump keeps the
    // rounded pairwise distance from landing just under the separation.
    const double scale = class_separation / std::sqrt(2.0) * (1.0 + 1e-12);
    for (int c = 0; c < num_classes; ++c) centres[c][c] = scale;
  } else {
    double spread = class_separation * num_classes;
    while (true) {
      for (auto& c : centres) {
        for (double& v : c) v = spread * normal(rng);
      }
      bool ok = true;
      for (int a = 0; a < num_classes && ok; ++a) {
        for (int b = a + 1; b < num_classes && ok; ++b) {
          double d2 = 0.0;
          for (int j = 0; j < dim; ++j) {
            d2 += (centres[a][j] - centres[b][j]) * (centres[a][j] - centres[b][j]);
          }
          ok = std::sqrt(d2) >= class_separation;
        }
      }
      if (ok) break;
      spread *= 1.1;
    }
  }

  Dataset out;
  out.dim = static_cast<size_t>(dim);
  out.num_classes = num_classes;
  out.features.reserve(static_cast<size_t>(num_classes) * samples_per_class * dim);
  for (int c = 0; c < num_classes; ++c) {
    for (int k = 0; k < samples_per_class; ++k) {
      for (int j = 0; j < dim; ++j) {
        out.features.push_back(centres[c][j] + normal(rng));
      }
      out.labels.push_back(c);
    }
  }
  return out;
}

Dataset LoadCsv(const std::filesystem::path& path, const LabelColumn& label) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());

  std::vector<std::vector<std::string>> rows;
  std::vector<size_t> line_numbers;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 &&
        line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (Trim(line).empty()) continue;
    rows.push_back(SplitCsvLine(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw Error(ErrorCode::kParseError, "empty file");
  const size_t ncols = rows.front().size();
  if (ncols < 2) {
    throw Error(ErrorCode::kParseError,
                "need at least one feature column and a label column");
  }

  const std::string* label_name = std::get_if<std::string>(&label);
  bool has_header = label_name != nullptr;
  size_t label_col = 0;
  if (!label_name) {
    const int idx = std::get<int>(label);
    const long long resolved = idx < 0 ? static_cast<long long>(ncols) + idx : idx;
    if (resolved < 0 || resolved >= static_cast<long long>(ncols)) {
      throw Error(ErrorCode::kMissingLabelColumn,
                  "label column index " + std::to_string(idx) +
                      " out of range for " + std::to_string(ncols) + " columns");
    }
    label_col = static_cast<size_t>(resolved);
    for (size_t j = 0; j < ncols && !has_header; ++j) {
      if (j != label_col && !ParseNumber(rows.front()[j])) has_header = true;
    }
  } else {
    auto it = std::find(rows.front().begin(), rows.front().end(), *label_name);
    if (it == rows.front().end()) {
      throw Error(ErrorCode::kMissingLabelColumn,
                  "no column named '" + *label_name + "'");
    }
    label_col = static_cast<size_t>(it - rows.front().begin());
  }

  const size_t first_data = has_header ? 1 : 0;
  if (rows.size() <= first_data) {
    throw Error(ErrorCode::kParseError, "no data rows");
  }
  const size_t dim = ncols - 1;
  const size_t n = rows.size() - first_data;
  Dataset out;
  out.dim = dim;
  out.features.resize(n * dim);
  std::vector<std::string> raw_labels(n);
  for (size_t r = first_data; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const size_t out_row = r - first_data;
    if (cells.size() != ncols) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_numbers[r]) + ": expected " +
                      std::to_string(ncols) + " columns, found " +
                      std::to_string(cells.size()));
    }
    size_t f = 0;
    for (size_t j = 0; j < ncols; ++j) {
      if (j == label_col) {
        raw_labels[out_row] = cells[j];
        continue;
      }
      auto v = ParseNumber(cells[j]);
      if (!v) {
        throw Error(ErrorCode::kNonNumericFeature,
                    "line " + std::to_string(line_numbers[r]) + ", column " +
                        std::to_string(j + 1) + ": '" + cells[j] + "'");
      }
      out.features[out_row * dim + f++] = *v;
    }
  }

  // Dense label encoding.
  bool all_int = true;
  for (const auto& l : raw_labels) all_int = all_int && ParseInteger(l).has_value();
  std::set<std::string> unique_labels(raw_labels.begin(), raw_labels.end());
  std::vector<std::string> distinct(unique_labels.begin(), unique_labels.end());
  if (all_int) {
    std::stable_sort(distinct.begin(), distinct.end(),
                     [](const std::string& a, const std::string& b) {
                       return *ParseInteger(a) < *ParseInteger(b);
                     });
  }
  std::map<std::string, int> code;
  for (size_t i = 0; i < distinct.size(); ++i) {
    code[distinct[i]] = static_cast<int>(i);
  }
  out.labels.resize(n);
  for (size_t i = 0; i < n; ++i) out.labels[i] = code.at(raw_labels[i]);
  out.num_classes = static_cast<int>(distinct.size());
  out.class_names = std::move(distinct);

  // Per-column z-score.
  for (size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += out.features[i * dim + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = out.features[i * dim + j] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (size_t i = 0; i < n; ++i) {
      double& v = out.features[i * dim + j];
      v = sd < 1e-12 ? 0.0 : (v - mean) / sd;
    }
  }
  return out;
}

void WriteCsv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (size_t j = 0; j < data.dim; ++j) out << "f" << j << ",";
  out << "label\n";
  out << std::setprecision(17);
  for (size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << v << ",";
    const int l = data.labels[i];
    if (static_cast<size_t>(l) < data.class_names.size()) {
      out << data.class_names[l] << "\n";
    } else {
      out << l << "\n";
    }
  }
}

PartitionPlan DirichletPartition(const Dataset& data, int num_clients,
                                 double alpha, uint64_t seed) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidAlpha, "Dirichlet alpha must be > 0");
  }
  if (num_clients < 2) {
    throw Error(ErrorCode::kInvalidSpec, "num_clients must be >= 2");
  }
  if (data.size() < static_cast<size_t>(num_clients)) {
    throw Error(ErrorCode::kInvalidSpec,
                "fewer samples than clients; cannot give every client a row");
  }
  Rng rng(seed);
  std::vector<std::vector<size_t>> by_class(data.num_classes);
  for (size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);

  PartitionPlan plan;
  plan.alpha = alpha;
  plan.seed = seed;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxPartitionRedraws; ++attempt) {
    plan.client_indices.assign(num_clients, {});
    for (const auto& rows : by_class) {
      if (rows.empty()) continue;
      const std::vector<double> p = SampleDirichlet(num_clients, alpha, rng);
      std::vector<double> cdf(p.size());
      std::partial_sum(p.begin(), p.end(), cdf.begin());
      for (size_t idx : rows) {
        const double u = unit(rng) * cdf.back();
        const auto client = std::min<size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
            p.size() - 1);
        plan.client_indices[client].push_back(idx);
      }
    }
    const bool any_empty = std::any_of(plan.client_indices.begin(),
                                       plan.client_indices.end(),
                                       [](const auto& v) { return v.empty(); });
    if (!any_empty) return plan;
  }
  // Round-robin top-up from the currently largest client.
  for (auto& client : plan.client_indices) {
    if (!client.empty()) continue;
    auto largest = std::max_element(
        plan.client_indices.begin(), plan.client_indices.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    client.push_back(largest->back());
    largest->pop_back();
  }
  return plan;
}

void AttackSpec::Validate(int num_classes) const {
  if (source_class < 0 || source_class >= num_classes || target_class < 0 ||
      target_class >= num_classes) {
    throw Error(ErrorCode::kInvalidSpec, "attack classes out of range");
  }
  if (source_class == target_class) {
    throw Error(ErrorCode::kInvalidSpec, "source and target class are equal");
  }
  if (!(flip_fraction > 0.0 && flip_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "flip_fraction must be in (0, 1]");
  }
}

FlipResult FlipLabels(const Dataset& data, const AttackSpec& spec,
                      uint64_t seed) {
  spec.Validate(data.num_classes);
  FlipResult result{data, 0, false};
  std::vector<size_t> source_rows;
  for (size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == spec.source_class) source_rows.push_back(i);
  }
  if (source_rows.empty()) {
    result.no_source_samples = true;
    return result;
  }
  size_t count = static_cast<size_t>(
      std::floor(spec.flip_fraction * static_cast<double>(source_rows.size())));
  count = std::clamp<size_t>(count, 1, source_rows.size());
  Rng rng(seed);
  std::shuffle(source_rows.begin(), source_rows.end(), rng);
  for (size_t k = 0; k < count; ++k) {
    result.data.labels[source_rows[k]] = spec.target_class;
  }
  result.flipped = count;
  return result;
}

}  // namespace fedshield
