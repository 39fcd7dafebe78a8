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

#ifndef FEDSHIELD_METRICS_H_
#define FEDSHIELD_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace fedshield {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::span<const int> truth, std::span<const int> predicted,
                  int num_classes);

  int num_classes() const { return num_classes_; }
  int64_t operator()(int truth, int predicted) const {
    return counts_[static_cast<size_t>(truth) * num_classes_ + predicted];
  }
  int64_t total() const { return total_; }
  int64_t row_total(int truth) const;
  int64_t column_total(int predicted) const;
  double recall(int cls) const;     // 0 when the class is absent from truth
  double precision(int cls) const;  // 0 when the class is never predicted

 private:
  int num_classes_;
  int64_t total_ = 0;
  std::vector<int64_t> counts_;
};

// Recall of the attacker's source class, in percent [0, 100].
// Throws Error(kSourceClassAbsent) if no true label equals source_class.
double SourceRecall(std::span<const int> truth, std::span<const int> predicted,
                    int source_class);

// Unweighted mean over all num_classes of per-class F1 (0 where P + R == 0).
double MacroF1(std::span<const int> truth, std::span<const int> predicted,
               int num_classes);

struct DetectionQuality {
  double precision = 1.0;
  double recall = 1.0;
};

// precision = |flagged & truth| / |flagged| (1 if nothing flagged),
// recall = |flagged & truth| / |truth| (1 if truth is empty).
DetectionQuality ComputeDetectionQuality(std::span<const int> flagged_ids,
                                         std::span<const int> malicious_ids,
                                         std::span<const int> all_ids);

}  // namespace fedshield

#endif  // FEDSHIELD_METRICS_H_
