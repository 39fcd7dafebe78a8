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

#ifndef FEDSHIELD_DATASET_H_
#define FEDSHIELD_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fedshield {

// N x D row-major feature matrix with integer labels in [0, num_classes).
struct Dataset {
  std::vector<double> features;
  std::vector<int> labels;
  size_t dim = 0;
  int num_classes = 0;
  // Original label spellings, indexed by encoded label. Empty for synthetic
  // data.
  std::vector<std::string> class_names;

  size_t size() const { return labels.size(); }
  std::span<const double> row(size_t i) const {
    return {features.data() + i * dim, dim};
  }

  // Copy of the given rows, in the given order.
  Dataset Subset(std::span<const size_t> indices) const;
  std::vector<size_t> ClassCounts() const;

  // Throws Error(kInvalidSpec) if any structural invariant is broken.
  void Validate() const;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Per class, round(test_fraction * count) rows go to the test split.
TrainTestSplit StratifiedSplit(const Dataset& data, double test_fraction,
                               uint64_t seed);

// Unit-variance isotropic Gaussian blobs, class-major row order. Class centres
// are pairwise at least `class_separation` apart.
Dataset GenerateSynthetic(int num_classes, int samples_per_class, int dim,
                          double class_separation, uint64_t seed);

using LabelColumn = std::variant<std::string, int>;

// Comma-separated numeric table with an optional header row. The first row is
// treated as a header when any of its feature cells is not a number; a label
// column given by name requires a header. Features are z-score normalised per
// column (constant columns become zero). Labels are densely re-encoded in
// sorted order (numeric order if every label is an integer).
Dataset LoadCsv(const std::filesystem::path& path, const LabelColumn& label);

// Writes features then a trailing `label` column, with a header and 17
// significant digits.
void WriteCsv(const Dataset& data, const std::filesystem::path& path);

struct PartitionPlan {
  std::vector<std::vector<size_t>> client_indices;
  double alpha = 0.0;
  uint64_t seed = 0;
};

// Label-skewed non-IID split: per class, client proportions are drawn from
// Dirichlet(alpha) and samples are assigned by categorical draws from them.
// If a client ends up empty the whole draw is repeated (bounded), after
// which empty clients are topped up round-robin from the largest client.
PartitionPlan DirichletPartition(const Dataset& data, int num_clients,
                                 double alpha, uint64_t seed);

struct AttackSpec {
  int source_class = 0;
  int target_class = 1;
  double flip_fraction = 1.0;

  void Validate(int num_classes) const;
};

struct FlipResult {
  Dataset data;
  size_t flipped = 0;
  // Set when the dataset holds no source-class rows; `data` is then an
  // unchanged copy.
  bool no_source_samples = false;
};

// Relabels floor(flip_fraction * n_source) uniformly chosen source-class rows
// (at least one when any exist) as the target class. Features are untouched.
FlipResult FlipLabels(const Dataset& data, const AttackSpec& spec,
                      uint64_t seed);

}  // namespace fedshield

#endif  // FEDSHIELD_DATASET_H_
