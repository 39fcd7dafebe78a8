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

#include "fedshield/numkit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fedshield/error.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

void CheckSameLength(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "vector lengths differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

// Mean of the points assigned to `cluster`; returns false if none are.
bool ClusterMean(const std::vector<Vec64>& points,
                 const std::vector<int>& assignments, int cluster, Vec64& out) {
  std::fill(out.begin(), out.end(), 0.0);
  size_t count = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (assignments[i] != cluster) continue;
    for (size_t j = 0; j < out.size(); ++j) out[j] += points[i][j];
    ++count;
  }
  if (count == 0) return false;
  for (double& v : out) v /= static_cast<double>(count);
  return true;
}

double PartitionSse(const std::vector<Vec64>& points,
                    const std::vector<int>& assignments) {
  const size_t dim = points.front().size();
  double sse = 0.0;
  for (int c = 0; c < 2; ++c) {
    Vec64 mean(dim);
    if (!ClusterMean(points, assignments, c, mean)) continue;
    for (size_t i = 0; i < points.size(); ++i) {
      if (assignments[i] == c) sse += SquaredDistance(points[i], mean);
    }
  }
  return sse;
}

KMeansResult KMeansOnce(const std::vector<Vec64>& points, int max_iters,
                        uint64_t seed) {
  const size_t n = points.size();
  const size_t dim = points.front().size();
  Rng rng(seed);
  KMeansResult result;
  result.assignments.assign(n, 0);

  // k-means++: first centre uniform, second proportional to D^2.
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  const size_t first = pick(rng);
  std::vector<double> d2(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    d2[i] = SquaredDistance(points[i], points[first]);
    total += d2[i];
  }
  if (total <= 0.0) {
    result.centroids = {points[first], points[first]};
    result.sse = 0.0;
    return result;
  }
  const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  size_t second = n - 1;
  double running = 0.0;
  for (size_t i = 0; i < n; ++i) {
    running += d2[i];
    if (d2[i] > 0.0 && running >= target) {
      second = i;
      break;
    }
  }
  std::array<Vec64, 2> centroids = {points[first], points[second]};

  std::vector<int> assignments(n, -1);
  for (int iter = 1; iter <= max_iters; ++iter) {
    bool changed = false;
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d0 = SquaredDistance(points[i], centroids[0]);
      const double d1 = SquaredDistance(points[i], centroids[1]);
      const int c = d1 < d0 ? 1 : 0;
      sse += c == 0 ? d0 : d1;
      if (assignments[i] != c) {
        assignments[i] = c;
        changed = true;
      }
    }
    result.sse_history.push_back(sse);
    result.iterations = iter;
    if (!changed) break;

    for (int c = 0; c < 2; ++c) {
      if (ClusterMean(points, assignments, c, centroids[c])) continue;
      // Empty cluster: re-seed with the point farthest from the survivor.
      const Vec64& survivor = centroids[1 - c];
      size_t far = 0;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        const double d = SquaredDistance(points[i], survivor);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids[c] = points[far];
    }
  }

  result.assignments = std::move(assignments);
  for (int c = 0; c < 2; ++c) {
    Vec64 mean(dim);
    result.centroids[c] =
        ClusterMean(points, result.assignments, c, mean) ? mean : centroids[c];
  }
  result.sse = PartitionSse(points, result.assignments);
  return result;
}

}  // namespace

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSameLength(a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double L2Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  CheckSameLength(a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

// dot / sqrt(aa * bb) rather than dot / (|a| |b|): sqrt(x * x) == x in IEEE
// arithmetic, so identical vectors score exactly 1. Falls back to separate
// roots if the product leaves the normal range.
double CosineFromParts(double dot, double aa, double bb) {
  const double prod = aa * bb;
  const double denom = std::isnormal(prod) ? std::sqrt(prod) : std::sqrt(aa) * std::sqrt(bb);
  return std::clamp(dot / denom, -1.0, 1.0);
}

}  // namespace

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  CheckSameLength(a, b);
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "empty vectors");
  const double aa = Dot(a, a);
  const double bb = Dot(b, b);
  if (std::sqrt(aa) < kZeroNormTolerance || std::sqrt(bb) < kZeroNormTolerance) {
    throw ZeroNormError(-1, "vector norm below tolerance");
  }
  return CosineFromParts(Dot(a, b), aa, bb);
}

SimMatrix PairwiseCosine(const std::vector<Vec64>& rows) {
  if (rows.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "pairwise cosine needs >= 2 rows");
  }
  const size_t k = rows.size();
  std::vector<double> sq_norms(k);
  for (size_t i = 0; i < k; ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw Error(ErrorCode::kDimMismatch,
                  "row " + std::to_string(i) + " has length " +
                      std::to_string(rows[i].size()));
    }
    sq_norms[i] = Dot(rows[i], rows[i]);
    if (std::sqrt(sq_norms[i]) < kZeroNormTolerance) {
      throw ZeroNormError(static_cast<int>(i),
                          "row " + std::to_string(i) + " has zero norm");
    }
  }
  SimMatrix m(k);
  for (size_t i = 0; i < k; ++i) {
    m(i, i) = 1.0;
    for (size_t j = i + 1; j < k; ++j) {
      const double c = CosineFromParts(Dot(rows[i], rows[j]), sq_norms[i], sq_norms[j]);
      m(i, j) = c;
      m(j, i) = c;
    }
  }
  return m;
}

KMeansResult KMeans2(const std::vector<Vec64>& points, int max_iters,
                     uint64_t seed, int restarts) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "kmeans2 needs >= 2 points");
  }
  if (max_iters < 1 || restarts < 1) {
    throw Error(ErrorCode::kInvalidSpec, "max_iters and restarts must be >= 1");
  }
  const size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorCode::kEmptyInput, "zero-dimensional points");
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw Error(ErrorCode::kDimMismatch,
                  "point " + std::to_string(i) + " has dimension " +
                      std::to_string(points[i].size()));
    }
  }
  KMeansResult best;
  for (int r = 0; r < restarts; ++r) {
    KMeansResult run =
        KMeansOnce(points, max_iters, DeriveSeed(seed, {static_cast<uint64_t>(r)}));
    if (r == 0 || run.sse < best.sse) best = std::move(run);
  }
  return best;
}

GaussianStats GaussianFit(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values to fit");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n), values.size()};
}

double ZScore(double x, const GaussianStats& g) {
  const double diff = std::abs(x - g.mean);
  if (g.std < kZeroNormTolerance) {
    return diff < kZeroNormTolerance ? 0.0
                                     : std::numeric_limits<double>::infinity();
  }
  return diff / g.std;
}

}  // namespace fedshield
