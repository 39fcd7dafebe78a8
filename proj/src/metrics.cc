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

#include "fedshield/metrics.h"

#include <set>
#include <string>

#include "fedshield/error.h"

namespace fedshield {

ConfusionMatrix::ConfusionMatrix(std::span<const int> truth,
                                 std::span<const int> predicted, int num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<size_t>(num_classes) * num_classes, 0) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kDimMismatch, "label vectors differ in length");
  }
  if (num_classes < 1) throw Error(ErrorCode::kInvalidSpec, "num_classes < 1");
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes) {
      throw Error(ErrorCode::kDimMismatch,
                  "label out of range at position " + std::to_string(i));
    }
    ++counts_[static_cast<size_t>(truth[i]) * num_classes + predicted[i]];
    ++total_;
  }
}

int64_t ConfusionMatrix::row_total(int truth) const {
  int64_t s = 0;
  for (int p = 0; p < num_classes_; ++p) s += (*this)(truth, p);
  return s;
}

int64_t ConfusionMatrix::column_total(int predicted) const {
  int64_t s = 0;
  for (int t = 0; t < num_classes_; ++t) s += (*this)(t, predicted);
  return s;
}

double ConfusionMatrix::recall(int cls) const {
  const int64_t n = row_total(cls);
  return n == 0 ? 0.0 : static_cast<double>((*this)(cls, cls)) / n;
}

double ConfusionMatrix::precision(int cls) const {
  const int64_t n = column_total(cls);
  return n == 0 ? 0.0 : static_cast<double>((*this)(cls, cls)) / n;
}

double SourceRecall(std::span<const int> truth, std::span<const int> predicted,
                    int source_class) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kDimMismatch, "label vectors differ in length");
  }
  int64_t total = 0;
  int64_t hit = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != source_class) continue;
    ++total;
    if (predicted[i] == source_class) ++hit;
  }
  if (total == 0) {
    throw Error(ErrorCode::kSourceClassAbsent,
                "class " + std::to_string(source_class) + " not in evaluation set");
  }
  return 100.0 * static_cast<double>(hit) / static_cast<double>(total);
}

double MacroF1(std::span<const int> truth, std::span<const int> predicted,
               int num_classes) {
  const ConfusionMatrix cm(truth, predicted, num_classes);
  double sum = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    const double p = cm.precision(c);
    const double r = cm.recall(c);
    if (p + r > 0.0) sum += 2.0 * p * r / (p + r);
  }
  return sum / num_classes;
}

DetectionQuality ComputeDetectionQuality(std::span<const int> flagged_ids,
                                         std::span<const int> malicious_ids,
                                         std::span<const int> all_ids) {
  const std::set<int> all(all_ids.begin(), all_ids.end());
  const std::set<int> flagged(flagged_ids.begin(), flagged_ids.end());
  const std::set<int> truth(malicious_ids.begin(), malicious_ids.end());
  for (int id : flagged) {
    if (!all.count(id)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "flagged id " + std::to_string(id) + " not a participant");
    }
  }
  for (int id : truth) {
    if (!all.count(id)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "malicious id " + std::to_string(id) + " not a participant");
    }
  }
  size_t hit = 0;
  for (int id : flagged) hit += truth.count(id);
  DetectionQuality q;
  if (!flagged.empty()) q.precision = static_cast<double>(hit) / flagged.size();
  if (!truth.empty()) q.recall = static_cast<double>(hit) / truth.size();
  return q;
}

}  // namespace fedshield
