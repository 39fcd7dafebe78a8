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

// Independent reference implementations used as test oracles. They are
// written naively on purpose and share no code with the library.

#ifndef FEDSHIELD_TESTS_ORACLES_H_
#define FEDSHIELD_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace fedshield::oracle {

inline double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

inline double Sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Per-coordinate median by full sort.
inline std::vector<double> SortMedian(const std::vector<std::vector<double>>& xs) {
  const size_t k = xs.size();
  std::vector<double> out(xs[0].size());
  for (size_t j = 0; j < out.size(); ++j) {
    std::vector<double> col;
    for (const auto& x : xs) col.push_back(x[j]);
    std::sort(col.begin(), col.end());
    out[j] = k % 2 ? col[k / 2] : (col[k / 2 - 1] + col[k / 2]) / 2.0;
  }
  return out;
}

// Per-coordinate mean after sorting and dropping floor(beta * K) per side.
inline std::vector<double> SortTrimmedMean(const std::vector<std::vector<double>>& xs,
                                           double beta) {
  const size_t k = xs.size();
  const size_t drop = static_cast<size_t>(std::floor(beta * static_cast<double>(k)));
  std::vector<double> out(xs[0].size());
  for (size_t j = 0; j < out.size(); ++j) {
    std::vector<double> col;
    for (const auto& x : xs) col.push_back(x[j]);
    std::sort(col.begin(), col.end());
    double s = 0;
    for (size_t i = drop; i < k - drop; ++i) s += col[i];
    out[j] = s / static_cast<double>(k - 2 * drop);
  }
  return out;
}

// Index of the Krum winner by scoring every client against all others.
inline size_t BruteKrum(const std::vector<std::vector<double>>& xs, int f) {
  const size_t k = xs.size();
  const size_t m = k - static_cast<size_t>(f) - 2;
  size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < k; ++i) {
    std::vector<double> d;
    for (size_t j = 0; j < k; ++j) {
      if (j != i) d.push_back(Sq(xs[i], xs[j]));
    }
    std::sort(d.begin(), d.end());
    double score = 0;
    for (size_t t = 0; t < m; ++t) score += d[t];
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

struct Partition {
  std::vector<int> labels;
  double sse = std::numeric_limits<double>::infinity();
};

inline double PartitionSse(const std::vector<std::vector<double>>& pts,
                           const std::vector<int>& labels) {
  double sse = 0;
  for (int c = 0; c < 2; ++c) {
    std::vector<double> mean(pts[0].size(), 0.0);
    int n = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] != c) continue;
      ++n;
      for (size_t j = 0; j < mean.size(); ++j) mean[j] += pts[i][j];
    }
    if (n == 0) continue;
    for (double& v : mean) v /= n;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] == c) sse += Sq(pts[i], mean);
    }
  }
  return sse;
}

// Optimal 2-partition by enumerating every labelling with point 0 in cluster 0.
inline Partition ExhaustiveTwoPartition(const std::vector<std::vector<double>>& pts) {
  const size_t n = pts.size();
  Partition best;
  for (uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> labels(n, 0);
    for (size_t i = 1; i < n; ++i) labels[i] = (mask >> (i - 1)) & 1u;
    const double sse = PartitionSse(pts, labels);
    if (sse < best.sse) best = {labels, sse};
  }
  return best;
}

// True if two labellings describe the same partition up to relabelling.
inline bool SamePartition(const std::vector<int>& a, const std::vector<int>& b) {
  bool same = true, flipped = true;
  for (size_t i = 0; i < a.size(); ++i) {
    same &= a[i] == b[i];
    flipped &= a[i] != b[i];
  }
  return same || flipped;
}

// n points drawn around two centres at distance `gap`, with a random split.
inline std::vector<std::vector<double>> SeparatedInstance(std::mt19937_64& rng, size_t n,
                                                          size_t dim, double gap) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<size_t> left_count(1, n - 1);
  const size_t left = left_count(rng);
  std::vector<double> direction(dim);
  double norm = 0;
  for (double& v : direction) {
    v = noise(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  std::vector<std::vector<double>> pts;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    const double shift = i < left ? 0.0 : gap;
    for (size_t j = 0; j < dim; ++j) p[j] = shift * direction[j] / norm + noise(rng);
    pts.push_back(std::move(p));
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  return pts;
}

}  // namespace fedshield::oracle

#endif  // FEDSHIELD_TESTS_ORACLES_H_
