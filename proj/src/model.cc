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

#include "fedshield/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedshield/error.h"
#include "fedshield/rng.h"

namespace fedshield {
namespace {

void AffineForward(std::span<const double> params, const AffineSpan& layer,
                   std::span<const double> in, std::span<double> out) {
  const double* w = params.data() + layer.offset;
  const double* b = params.data() + layer.bias_offset();
  for (size_t o = 0; o < layer.out; ++o) {
    double s = b[o];
    const double* row = w + o * layer.in;
    for (size_t i = 0; i < layer.in; ++i) s += row[i] * in[i];
    out[o] = s;
  }
}

void CheckBatch(const ModelLayout& layout, std::span<const double> features,
                size_t rows) {
  if (features.size() != rows * layout.input_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "feature block of size " + std::to_string(features.size()) +
                    " does not hold " + std::to_string(rows) + " rows of dim " +
                    std::to_string(layout.input_dim()));
  }
}

// Forward pass for one row: fills hidden (post-ReLU, if any) and logits.
void ForwardRow(const WeightVector& w, std::span<const double> x,
                std::vector<double>& hidden, std::vector<double>& logits) {
  const auto& layers = w.layout.layers();
  if (layers.size() == 1) {
    AffineForward(w.values, layers[0], x, logits);
    return;
  }
  AffineForward(w.values, layers[0], x, hidden);
  for (double& h : hidden) h = std::max(h, 0.0);
  AffineForward(w.values, layers[1], hidden, logits);
}

// Converts logits to probabilities in place and returns log-sum-exp.
double SoftmaxInPlace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return m + std::log(sum);
}

}  // namespace

ModelLayout::ModelLayout(size_t input_dim, size_t hidden_dim, int num_classes)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), num_classes_(num_classes) {
  if (input_dim == 0 || num_classes < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "model needs input_dim >= 1 and num_classes >= 1");
  }
  const auto classes = static_cast<size_t>(num_classes);
  if (hidden_dim == 0) {
    layers_.push_back({0, input_dim, classes});
  } else {
    layers_.push_back({0, input_dim, hidden_dim});
    layers_.push_back({layers_[0].length(), hidden_dim, classes});
  }
  total_ = layers_.back().offset + layers_.back().length();
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidSpec, "epochs must be >= 1");
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidSpec, "batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidSpec, "learning_rate must be > 0");
  }
}

WeightVector InitWeights(const ModelLayout& layout, uint64_t seed) {
  WeightVector w{Vec64(layout.total_size(), 0.0), layout};
  Rng rng(seed);
  for (const auto& layer : layout.layers()) {
    const double s =
        std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    std::uniform_real_distribution<double> uniform(-s, s);
    for (size_t k = 0; k < layer.in * layer.out; ++k) {
      w.values[layer.offset + k] = uniform(rng);
    }
  }
  return w;
}

LossAndGradient LossAndGrad(const WeightVector& w,
                            std::span<const double> features,
                            std::span<const int> labels) {
  const ModelLayout& layout = w.layout;
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
  if (w.values.size() != layout.total_size()) {
    throw Error(ErrorCode::kDimMismatch, "weight vector does not match layout");
  }
  CheckBatch(layout, features, labels.size());

  const size_t d = layout.input_dim();
  const size_t h = layout.hidden_dim();
  const auto c = static_cast<size_t>(layout.num_classes());
  const auto& layers = layout.layers();
  const AffineSpan& out_layer = layout.last_layer();

  LossAndGradient result{0.0, Vec64(layout.total_size(), 0.0)};
  std::vector<double> hidden(h);
  std::vector<double> probs(c);
  std::vector<double> dhidden(h);
  const double inv_b = 1.0 / static_cast<double>(labels.size());

  for (size_t r = 0; r < labels.size(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<size_t>(y) >= c) {
      throw Error(ErrorCode::kDimMismatch,
                  "label " + std::to_string(y) + " outside model classes");
    }
    std::span<const double> x = features.subspan(r * d, d);
    ForwardRow(w, x, hidden, probs);
    const double logit_y = probs[y];
    result.loss += SoftmaxInPlace(probs) - logit_y;
    probs[y] -= 1.0;  // dL/dlogits for this row (before 1/B)

    std::span<const double> out_in =
        layers.size() == 1 ? x : std::span<const double>(hidden);
    double* gw = result.grad.data() + out_layer.offset;
    double* gb = result.grad.data() + out_layer.bias_offset();
    for (size_t o = 0; o < c; ++o) {
      const double g = probs[o] * inv_b;
      gb[o] += g;
      double* grow = gw + o * out_layer.in;
      for (size_t i = 0; i < out_layer.in; ++i) grow[i] += g * out_in[i];
    }
    if (layers.size() == 1) continue;

    const double* w2 = w.values.data() + out_layer.offset;
    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (size_t o = 0; o < c; ++o) {
      const double g = probs[o] * inv_b;
      const double* w2row = w2 + o * h;
      for (size_t j = 0; j < h; ++j) dhidden[j] += g * w2row[j];
    }
    const AffineSpan& in_layer = layers[0];
    double* g1 = result.grad.data() + in_layer.offset;
    double* gb1 = result.grad.data() + in_layer.bias_offset();
    for (size_t j = 0; j < h; ++j) {
      if (hidden[j] <= 0.0) continue;  // ReLU gate
      gb1[j] += dhidden[j];
      double* grow = g1 + j * d;
      for (size_t i = 0; i < d; ++i) grow[i] += dhidden[j] * x[i];
    }
  }
  result.loss *= inv_b;
  return result;
}

double MeanLoss(const WeightVector& w, const Dataset& data) {
  return LossAndGrad(w, data.features, data.labels).loss;
}

LocalTrainResult LocalTrain(const WeightVector& w0, const Dataset& data,
                            const TrainConfig& cfg) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyInput, "no local data");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.learning_rate < 0.0) {
    throw Error(ErrorCode::kInvalidSpec, "invalid train config");
  }
  CheckBatch(w0.layout, data.features, data.size());

  LocalTrainResult result{w0, Vec64(w0.values.size(), 0.0)};
  if (cfg.learning_rate == 0.0) return result;

  Rng rng(cfg.seed);
  const size_t n = data.size();
  const auto batch = static_cast<size_t>(cfg.batch_size);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> xb;
  std::vector<int> yb;
  Vec64& w = result.final_weights.values;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < n; start += batch) {
      const size_t end = std::min(n, start + batch);
      xb.clear();
      yb.clear();
      for (size_t k = start; k < end; ++k) {
        auto row = data.row(order[k]);
        xb.insert(xb.end(), row.begin(), row.end());
        yb.push_back(data.labels[order[k]]);
      }
      const LossAndGradient lg = LossAndGrad(result.final_weights, xb, yb);
      for (size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * lg.grad[j];
    }
  }
  for (size_t j = 0; j < w.size(); ++j) {
    result.cumulative_gradient[j] = (w0.values[j] - w[j]) / cfg.learning_rate;
  }
  return result;
}

std::vector<int> Predict(const WeightVector& w, std::span<const double> features) {
  const size_t d = w.layout.input_dim();
  if (d == 0 || features.size() % d != 0) {
    throw Error(ErrorCode::kDimMismatch, "feature block not a multiple of dim");
  }
  const size_t rows = features.size() / d;
  std::vector<double> hidden(w.layout.hidden_dim());
  std::vector<double> logits(static_cast<size_t>(w.layout.num_classes()));
  std::vector<int> out(rows);
  for (size_t r = 0; r < rows; ++r) {
    ForwardRow(w, features.subspan(r * d, d), hidden, logits);
    size_t best = 0;
    for (size_t k = 1; k < logits.size(); ++k) {
      if (logits[k] > logits[best]) best = k;
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

std::span<const double> LastLayerSlice(std::span<const double> flat,
                                       const ModelLayout& layout) {
  if (flat.size() != layout.total_size()) {
    throw Error(ErrorCode::kDimMismatch, "vector does not match layout");
  }
  const AffineSpan& last = layout.last_layer();
  return flat.subspan(last.offset, last.length());
}

std::vector<Vec64> SplitByLayer(std::span<const double> flat,
                                const ModelLayout& layout) {
  if (flat.size() != layout.total_size()) {
    throw Error(ErrorCode::kDimMismatch, "vector does not match layout");
  }
  std::vector<Vec64> parts;
  for (const auto& layer : layout.layers()) {
    auto s = flat.subspan(layer.offset, layer.length());
    parts.emplace_back(s.begin(), s.end());
  }
  return parts;
}

Vec64 ConcatLayers(const std::vector<Vec64>& parts) {
  Vec64 out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace fedshield
