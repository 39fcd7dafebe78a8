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

#ifndef FEDSHIELD_MODEL_H_
#define FEDSHIELD_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedshield/dataset.h"
#include "fedshield/numkit.h"

namespace fedshield {

// One affine map out = W in + b. W is stored row-major (out x in) at
// `offset`, followed immediately by the `out` biases.
struct AffineSpan {
  size_t offset = 0;
  size_t in = 0;
  size_t out = 0;

  size_t length() const { return in * out + out; }
  size_t bias_offset() const { return offset + in * out; }
};

// Flat parameter layout of a softmax classifier with at most one ReLU hidden
// layer. hidden_dim == 0 gives multinomial logistic regression.
class ModelLayout {
 public:
  ModelLayout() = default;
  ModelLayout(size_t input_dim, size_t hidden_dim, int num_classes);

  size_t input_dim() const { return input_dim_; }
  size_t hidden_dim() const { return hidden_dim_; }
  int num_classes() const { return num_classes_; }
  size_t total_size() const { return total_; }

  const std::vector<AffineSpan>& layers() const { return layers_; }
  // The final affine map (weights and biases): the slice GShield inspects.
  const AffineSpan& last_layer() const { return layers_.back(); }

  bool operator==(const ModelLayout&) const = default;

 private:
  size_t input_dim_ = 0;
  size_t hidden_dim_ = 0;
  int num_classes_ = 0;
  size_t total_ = 0;
  std::vector<AffineSpan> layers_;
};

struct WeightVector {
  Vec64 values;
  ModelLayout layout;
};

struct TrainConfig {
  int epochs = 2;
  int batch_size = 16;
  double learning_rate = 0.05;
  uint64_t seed = 0;

  void Validate() const;
};

struct LossAndGradient {
  double loss = 0.0;
  Vec64 grad;
};

struct LocalTrainResult {
  WeightVector final_weights;
  // (w0 - w_final) / learning_rate: the summed mini-batch gradients.
  Vec64 cumulative_gradient;
};

// Glorot-uniform weights per layer, zero biases.
WeightVector InitWeights(const ModelLayout& layout, uint64_t seed);

// Mean softmax cross-entropy over the batch and its exact gradient.
// `features` is row-major with layout.input_dim() columns.
LossAndGradient LossAndGrad(const WeightVector& w,
                            std::span<const double> features,
                            std::span<const int> labels);

double MeanLoss(const WeightVector& w, const Dataset& data);

// E epochs of mini-batch SGD, reshuffling every epoch from cfg.seed. The
// last batch of an epoch may be short. learning_rate == 0 is accepted and
// leaves the weights (and the cumulative gradient, zero) untouched.
LocalTrainResult LocalTrain(const WeightVector& w0, const Dataset& data,
                            const TrainConfig& cfg);

// Row-wise argmax of the logits; ties go to the lowest class index.
std::vector<int> Predict(const WeightVector& w, std::span<const double> features);

std::span<const double> LastLayerSlice(std::span<const double> flat,
                                       const ModelLayout& layout);
std::vector<Vec64> SplitByLayer(std::span<const double> flat,
                                const ModelLayout& layout);
Vec64 ConcatLayers(const std::vector<Vec64>& parts);

}  // namespace fedshield

#endif  // FEDSHIELD_MODEL_H_
