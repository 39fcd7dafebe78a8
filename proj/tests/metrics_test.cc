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

#include <gtest/gtest.h>

#include "fedshield/error.h"

namespace fedshield {
namespace {

TEST(ConfusionMatrix, CountsAndTotals) {
  const std::vector<int> truth = {0, 0, 1, 1, 2};
  const std::vector<int> pred = {0, 1, 1, 1, 0};
  const ConfusionMatrix cm(truth, pred, 3);
  EXPECT_EQ(cm(0, 0), 1);
  EXPECT_EQ(cm(0, 1), 1);
  EXPECT_EQ(cm(1, 1), 2);
  EXPECT_EQ(cm(2, 0), 1);
  EXPECT_EQ(cm.total(), 5);
  EXPECT_EQ(cm.row_total(1), 2);
  EXPECT_EQ(cm.column_total(0), 2);
  EXPECT_DOUBLE_EQ(cm.recall(0), 0.5);
  EXPECT_DOUBLE_EQ(cm.precision(1), 2.0 / 3.0);
  EXPECT_EQ(cm.recall(2), 0.0);
  EXPECT_EQ(cm.precision(2), 0.0);
}

TEST(SourceRecall, Percent) {
  EXPECT_DOUBLE_EQ(SourceRecall(std::vector<int>{0, 0, 0, 0, 1},
                                std::vector<int>{0, 1, 0, 0, 1}, 0),
                   75.0);
  try {
    SourceRecall(std::vector<int>{1, 1}, std::vector<int>{1, 1}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSourceClassAbsent);
  }
}

TEST(MacroF1, PerfectAndHandComputed) {
  const std::vector<int> t = {0, 1, 2, 0};
  EXPECT_DOUBLE_EQ(MacroF1(t, t, 3), 1.0);
  // Class 0: P=1, R=0.5, F1=2/3. Class 1: P=0.5, R=1, F1=2/3. Class 2: 1.
  const std::vector<int> p = {0, 1, 2, 1};
  EXPECT_NEAR(MacroF1(t, p, 3), (2.0 / 3 + 2.0 / 3 + 1.0) / 3, 1e-15);
}

TEST(MacroF1, AbsentClassCountsAsZero) {
  const std::vector<int> t = {0, 0};
  EXPECT_DOUBLE_EQ(MacroF1(t, t, 2), 0.5);
}

TEST(DetectionQuality, Cases) {
  const std::vector<int> all = {1, 2, 3, 4};
  const DetectionQuality q =
      ComputeDetectionQuality(std::vector<int>{1, 2}, std::vector<int>{2, 3}, all);
  EXPECT_DOUBLE_EQ(q.precision, 0.5);
  EXPECT_DOUBLE_EQ(q.recall, 0.5);
  const DetectionQuality none =
      ComputeDetectionQuality(std::vector<int>{}, std::vector<int>{}, all);
  EXPECT_DOUBLE_EQ(none.precision, 1.0);
  EXPECT_DOUBLE_EQ(none.recall, 1.0);
  const DetectionQuality false_alarm =
      ComputeDetectionQuality(std::vector<int>{4}, std::vector<int>{}, all);
  EXPECT_DOUBLE_EQ(false_alarm.precision, 0.0);
  EXPECT_DOUBLE_EQ(false_alarm.recall, 1.0);
  const DetectionQuality missed =
      ComputeDetectionQuality(std::vector<int>{}, std::vector<int>{3}, all);
  EXPECT_DOUBLE_EQ(missed.precision, 1.0);
  EXPECT_DOUBLE_EQ(missed.recall, 0.0);
}

}  // namespace
}  // namespace fedshield
