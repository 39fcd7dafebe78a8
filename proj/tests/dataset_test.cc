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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "fedshield/error.h"
#include "fedshield/model.h"

namespace fedshield {
namespace {

namespace fs = std::filesystem;

fs::path WriteTemp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "fedshield_dataset_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidSpec;
}

TEST(GenerateSynthetic, CountsAreExact) {
  const Dataset d = GenerateSynthetic(2, 10, 2, 10.0, 7);
  EXPECT_EQ(d.size(), 20u);
  EXPECT_EQ(d.ClassCounts(), (std::vector<size_t>{10, 10}));
  const Dataset e = GenerateSynthetic(5, 13, 3, 4.0, 1);  // more classes than dims
  EXPECT_EQ(e.ClassCounts(), std::vector<size_t>(5, 13));
}

TEST(GenerateSynthetic, Deterministic) {
  const Dataset a = GenerateSynthetic(4, 50, 8, 6.0, 9);
  const Dataset b = GenerateSynthetic(4, 50, 8, 6.0, 9);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
}

// Frozen values guard against silent changes to the generator or seeding.
TEST(GenerateSynthetic, FrozenFirstRow) {
  const Dataset d = GenerateSynthetic(4, 250, 8, 6.0, 1);
  ASSERT_EQ(d.labels[0], 0);
  const auto row = d.row(0);
  const std::vector<double> got(row.begin(), row.begin() + 2);
  EXPECT_EQ(got, (std::vector<double>{3.8558089255024877, -0.039399956754155308}));
}

TEST(GenerateSynthetic, CentralLinearModelSeparatesBlobs) {
  const Dataset d = GenerateSynthetic(4, 250, 8, 6.0, 1);
  const ModelLayout layout(8, 0, 4);
  const LocalTrainResult r = LocalTrain(InitWeights(layout, 1), d, {10, 32, 0.1, 3});
  const std::vector<int> pred = Predict(r.final_weights, d.features);
  size_t correct = 0;
  for (size_t i = 0; i < d.size(); ++i) correct += pred[i] == d.labels[i];
  EXPECT_GE(static_cast<double>(correct) / d.size(), 0.95);
}

TEST(GenerateSynthetic, RejectsBadParameters) {
  EXPECT_EQ(CodeOf([] { GenerateSynthetic(1, 10, 2, 1.0, 1); }), ErrorCode::kInvalidSpec);
  EXPECT_EQ(CodeOf([] { GenerateSynthetic(2, 10, 2, 0.0, 1); }), ErrorCode::kInvalidSpec);
}

TEST(StratifiedSplit, PerClassFractions) {
  const Dataset d = GenerateSynthetic(4, 250, 8, 6.0, 1);
  const TrainTestSplit s = StratifiedSplit(d, 0.2, 5);
  EXPECT_EQ(s.test.ClassCounts(), std::vector<size_t>(4, 50));
  EXPECT_EQ(s.train.ClassCounts(), std::vector<size_t>(4, 200));
}

TEST(LoadCsv, HeaderAndStringLabels) {
  const auto p = WriteTemp("abc.csv", "x,y,label\n1,2,a\n3,4,b\n5,6,a\n");
  const Dataset d = LoadCsv(p, std::string("label"));
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.num_classes, 2);
  EXPECT_EQ(d.class_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.dim, 2u);
}

TEST(LoadCsv, ConstantColumnBecomesZero) {
  const auto p = WriteTemp("const.csv", "7,1,0\n7,2,1\n7,3,0\n");
  const Dataset d = LoadCsv(p, -1);
  for (size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.row(i)[0], 0.0);
  // Second column is z-scored: mean 0, population std 1.
  double m = 0, v = 0;
  for (size_t i = 0; i < d.size(); ++i) m += d.row(i)[1];
  m /= 3;
  for (size_t i = 0; i < d.size(); ++i) v += (d.row(i)[1] - m) * (d.row(i)[1] - m);
  EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(v / 3, 1.0, 1e-12);
}

TEST(LoadCsv, NumericLabelsSortNumerically) {
  const auto p = WriteTemp("num.csv", "1,10\n2,9\n3,2\n");
  const Dataset d = LoadCsv(p, 1);
  EXPECT_EQ(d.class_names, (std::vector<std::string>{"2", "9", "10"}));
  EXPECT_EQ(d.labels, (std::vector<int>{2, 1, 0}));
}

TEST(LoadCsv, NonNumericFeatureNamesRowAndColumn) {
  const auto p = WriteTemp("bad.csv", "x,y,label\n1,2,a\n3,oops,b\n");
  try {
    LoadCsv(p, std::string("label"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonNumericFeature);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos);
  }
}

TEST(LoadCsv, ErrorCodes) {
  const auto ragged = WriteTemp("ragged.csv", "1,2,0\n1,0\n");
  EXPECT_EQ(CodeOf([&] { LoadCsv(ragged, -1); }), ErrorCode::kParseError);
  const auto ok = WriteTemp("ok.csv", "x,y,label\n1,2,a\n");
  EXPECT_EQ(CodeOf([&] { LoadCsv(ok, std::string("target")); }),
            ErrorCode::kMissingLabelColumn);
  EXPECT_EQ(CodeOf([&] { LoadCsv(ok, 7); }), ErrorCode::kMissingLabelColumn);
}

TEST(LoadCsv, ReserializeIsIdempotent) {
  const auto p = WriteTemp("round.csv", "a,b,c,label\n1,5,2,x\n2,7,3,y\n9,1,1,x\n4,4,8,z\n");
  const Dataset once = LoadCsv(p, std::string("label"));
  const fs::path out = p.parent_path() / "round_out.csv";
  WriteCsv(once, out);
  const Dataset twice = LoadCsv(out, std::string("label"));
  EXPECT_EQ(once.labels, twice.labels);
  ASSERT_EQ(once.features.size(), twice.features.size());
  for (size_t i = 0; i < once.features.size(); ++i) {
    EXPECT_NEAR(once.features[i], twice.features[i], 1e-12);
  }
}

void ExpectExactCover(const PartitionPlan& plan, size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& idx : plan.client_indices) {
    EXPECT_FALSE(idx.empty());
    for (size_t i : idx) ++seen[i];
  }
  for (size_t i = 0; i < n; ++i) ASSERT_EQ(seen[i], 1) << "row " << i;
}

TEST(DirichletPartition, DisjointCoverOnRandomConfigs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> log_alpha(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = GenerateSynthetic(2 + trial % 4, 20 + trial % 30, 4, 3.0, trial);
    const int clients = 2 + trial % 15;
    const PartitionPlan plan =
        DirichletPartition(d, clients, std::pow(10.0, log_alpha(rng)), trial);
    ASSERT_EQ(plan.client_indices.size(), static_cast<size_t>(clients));
    ExpectExactCover(plan, d.size());
  }
}

TEST(DirichletPartition, LargeAlphaIsNearUniform) {
  const Dataset d = GenerateSynthetic(2, 2000, 2, 3.0, 1);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const PartitionPlan plan = DirichletPartition(d, 4, 1e6, seed);
    for (const auto& idx : plan.client_indices) {
      size_t c0 = 0;
      for (size_t i : idx) c0 += d.labels[i] == 0;
      const double share = static_cast<double>(c0) / idx.size();
      EXPECT_NEAR(share, 0.5, 0.05);
      EXPECT_NEAR(static_cast<double>(idx.size()), 1000.0, 100.0);
    }
  }
}

TEST(DirichletPartition, SmallAlphaIsSkewed) {
  const Dataset d = GenerateSynthetic(2, 200, 2, 3.0, 1);
  int skewed_seeds = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const PartitionPlan plan = DirichletPartition(d, 4, 0.05, seed);
    bool any = false;
    for (const auto& idx : plan.client_indices) {
      size_t c0 = 0;
      for (size_t i : idx) c0 += d.labels[i] == 0;
      const double share = static_cast<double>(c0) / idx.size();
      any |= share >= 0.8 || share <= 0.2;
    }
    skewed_seeds += any;
  }
  EXPECT_GE(skewed_seeds, 10);
}

TEST(DirichletPartition, RejectsBadAlpha) {
  const Dataset d = GenerateSynthetic(2, 10, 2, 3.0, 1);
  EXPECT_EQ(CodeOf([&] { DirichletPartition(d, 4, 0.0, 1); }), ErrorCode::kInvalidAlpha);
  EXPECT_EQ(CodeOf([&] { DirichletPartition(d, 4, -1.0, 1); }), ErrorCode::kInvalidAlpha);
}

Dataset Tiny(std::vector<int> labels) {
  Dataset d;
  d.dim = 1;
  d.num_classes = 3;
  d.labels = std::move(labels);
  for (size_t i = 0; i < d.labels.size(); ++i) d.features.push_back(0.5 * i);
  return d;
}

TEST(FlipLabels, FullFlip) {
  const FlipResult r = FlipLabels(Tiny({0, 0, 1}), {0, 1, 1.0}, 3);
  EXPECT_EQ(r.data.labels, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(r.flipped, 2u);
}

TEST(FlipLabels, HalfOfTenIsFive) {
  const Dataset d = Tiny({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2});
  const FlipResult r = FlipLabels(d, {0, 1, 0.5}, 3);
  EXPECT_EQ(r.flipped, 5u);
  EXPECT_EQ(std::count(r.data.labels.begin(), r.data.labels.end(), 1), 5);
  EXPECT_EQ(r.data.features, d.features);
  EXPECT_EQ(r.data.labels[10], 2);
  EXPECT_EQ(r.data.labels[11], 2);
}

TEST(FlipLabels, MinimumOneWhenSourcePresent) {
  const FlipResult r = FlipLabels(Tiny({0, 2, 2}), {0, 1, 0.1}, 3);
  EXPECT_EQ(r.flipped, 1u);
}

TEST(FlipLabels, NoSourceSamplesIsFlaggedNotThrown) {
  const Dataset d = Tiny({1, 2, 2});
  const FlipResult r = FlipLabels(d, {0, 1, 1.0}, 3);
  EXPECT_TRUE(r.no_source_samples);
  EXPECT_EQ(r.data.labels, d.labels);
}

TEST(FlipLabels, NeverTouchesOtherRows) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> lab(0, 2);
  std::uniform_real_distribution<double> frac(0.01, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> labels(30);
    for (int& l : labels) l = lab(rng);
    const Dataset d = Tiny(labels);
    const FlipResult r = FlipLabels(d, {0, 2, frac(rng)}, t);
    EXPECT_EQ(r.data.features, d.features);
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != 0) EXPECT_EQ(r.data.labels[i], labels[i]);
      else EXPECT_TRUE(r.data.labels[i] == 0 || r.data.labels[i] == 2);
    }
  }
}

TEST(AttackSpec, Validation) {
  EXPECT_THROW((AttackSpec{0, 0, 1.0}).Validate(4), Error);
  EXPECT_THROW((AttackSpec{0, 4, 1.0}).Validate(4), Error);
  EXPECT_THROW((AttackSpec{0, 1, 0.0}).Validate(4), Error);
  EXPECT_NO_THROW((AttackSpec{0, 1, 0.5}).Validate(4));
}

}  // namespace
}  // namespace fedshield
