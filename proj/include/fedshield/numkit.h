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

#ifndef FEDSHIELD_NUMKIT_H_
#define FEDSHIELD_NUMKIT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fedshield {

using Vec64 = std::vector<double>;

// Dense symmetric K x K similarity matrix, row-major.
class SimMatrix {
 public:
  SimMatrix() = default;
  explicit SimMatrix(size_t k) : k_(k), entries_(k * k, 0.0) {}

  size_t size() const { return k_; }
  double operator()(size_t i, size_t j) const { return entries_[i * k_ + j]; }
  double& operator()(size_t i, size_t j) { return entries_[i * k_ + j]; }
  std::span<const double> row(size_t i) const {
    return {entries_.data() + i * k_, k_};
  }
  const std::vector<double>& entries() const { return entries_; }

 private:
  size_t k_ = 0;
  std::vector<double> entries_;
};

struct GaussianStats {
  double mean = 0.0;
  double std = 0.0;  // population (divide by n)
  size_t count = 0;
};

struct KMeansResult {
  std::vector<int> assignments;      // 0 or 1 per point
  std::array<Vec64, 2> centroids;
  double sse = 0.0;                  // within-cluster sum of squared distances
  int iterations = 0;
  std::vector<double> sse_history;   // SSE after each Lloyd assignment step
};

inline constexpr double kZeroNormTolerance = 1e-12;

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> a);
double SquaredDistance(std::span<const double> a, std::span<const double> b);

// (a.b) / (|a||b|) clamped to [-1, 1]. Throws ZeroNormError (index -1) when
// either norm is below kZeroNormTolerance and Error(kDimMismatch) on length
// mismatch.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Upper triangle computed, lower triangle mirrored, so the result is bitwise
// symmetric. ZeroNormError carries the offending row index.
SimMatrix PairwiseCosine(const std::vector<Vec64>& rows);

// Two-cluster Lloyd's algorithm with k-means++ seeding.
//
// Deterministic for a given seed. `restarts` independent k-means++ starts are
// run from seeds derived from `seed`, and the lowest-SSE solution is kept
// (first one wins on ties). A cluster that empties during an iteration is
// re-seeded with the point farthest from the surviving centroid. All points
// identical yields all-zero assignments with two equal centroids.
KMeansResult KMeans2(const std::vector<Vec64>& points, int max_iters,
                     uint64_t seed, int restarts = 4);

// Arithmetic mean and population standard deviation (two-pass).
GaussianStats GaussianFit(std::span<const double> values);

// |x - mean| / std. For std < 1e-12 returns 0 when x is within 1e-12 of the
// mean and +infinity otherwise.
double ZScore(double x, const GaussianStats& g);

}  // namespace fedshield

#endif  // FEDSHIELD_NUMKIT_H_
