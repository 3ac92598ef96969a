// core/include/biasaudit/mlp.hpp

// Copyright 2026  The biasaudit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Two fully-connected layers (input -> 256 ReLU -> 2 softmax) trained with
// Adam on cross-entropy. Training is a pure function of (data, options,
// seed): weight init and per-epoch shuffles come from one deterministic
// stream, so the same seed reproduces parameters bit-exactly.

#ifndef BIASAUDIT_MLP_HPP_
#define BIASAUDIT_MLP_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace biasaudit {

struct MlpModel {
  size_t input_dim = 0;
  size_t hidden_dim = 256;
  std::vector<double> w1;  // row-major [input_dim x hidden_dim]
  std::vector<double> b1;  // [hidden_dim]
  std::vector<double> w2;  // row-major [hidden_dim x 2]
  std::vector<double> b2;  // [2]
};

struct MlpTrainOptions {
  uint64_t seed = 0;
  int epochs = 50;
  int batch = 128;
  double lr = 1e-3;
  int scheduler_patience = 5;  // epochs of stagnant validation loss before halving
  size_t hidden_dim = 256;
};

struct MlpPrediction {
  int label = 1;  // argmax; exactly equal logits map to class 1 (target group)
  std::array<double, 2> probabilities{0.5, 0.5};
};

struct MlpGradients {
  std::vector<double> w1, b1, w2, b2;
};

// Glorot-uniform init from the seed; labels are 0/1.
MlpModel mlp_init(size_t input_dim, uint64_t seed, size_t hidden_dim = 256);

// Returns the parameters with the best validation accuracy seen across
// epochs. Throws SingleClassError when the training labels are single-class.
MlpModel mlp_train(const std::vector<std::vector<double>> &x_train,
                   const std::vector<int> &y_train,
                   const std::vector<std::vector<double>> &x_val,
                   const std::vector<int> &y_val, const MlpTrainOptions &opts = {});

MlpPrediction mlp_predict(const MlpModel &model, std::span<const double> x);

// Mean cross-entropy over the set.
double mlp_loss(const MlpModel &model, const std::vector<std::vector<double>> &x,
                const std::vector<int> &y);

// Loss plus analytic gradients (for the finite-difference oracle).
double mlp_loss_and_gradients(const MlpModel &model,
                              const std::vector<std::vector<double>> &x,
                              const std::vector<int> &y, MlpGradients *grads);

// Versioned JSON container; reloaded models predict bit-identically.
void save_mlp(const std::filesystem::path &path, const MlpModel &model);
MlpModel load_mlp(const std::filesystem::path &path);

}  // namespace biasaudit

#endif  // BIASAUDIT_MLP_HPP_
