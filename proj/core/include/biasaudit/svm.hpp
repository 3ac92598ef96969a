// core/include/biasaudit/svm.hpp

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

// Soft-margin SVM with RBF kernel K(x,z) = exp(-gamma*||x-z||^2), trained by
// sequential minimal optimization (working set of two, second choice by
// max |E_i - E_j|). Training is deterministic: no randomized heuristics.

#ifndef BIASAUDIT_SVM_HPP_
#define BIASAUDIT_SVM_HPP_

#include <filesystem>
#include <span>
#include <vector>

namespace biasaudit {

struct SvmTrainOptions {
  double c = 10.0;
  double gamma = 0.1;
  double tol = 1e-3;       // KKT tolerance
  int max_passes = 1000;   // outer-loop cap
};

struct SvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coeffs;      // alpha_i * y_i
  std::vector<double> alphas;      // alpha_i (same order)
  std::vector<size_t> sv_indices;  // positions in the training set
  double bias = 0.0;
  double gamma = 0.1;
  double c = 10.0;

  size_t dim() const { return support_vectors.empty() ? 0 : support_vectors.front().size(); }
};

struct SvmPrediction {
  int label = 1;          // +1 / -1; a decision value of exactly 0 maps to +1
  double decision = 0.0;  // sum alpha_i y_i K(x_i, x) + b
};

// Labels are +1/-1; both classes must be present.
// Throws SingleClassError / InvalidArgumentError (non-finite features).
SvmModel svm_train(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                   const SvmTrainOptions &opts);

SvmPrediction svm_predict(const SvmModel &model, std::span<const double> x);

// KKT bookkeeping over the training set (0 at convergence for tol-satisfied
// solutions): alpha=0 needs y*f >= 1-tol, 0<alpha<C needs |y*f - 1| <= tol,
// alpha=C needs y*f <= 1+tol.
size_t svm_count_kkt_violations(const SvmModel &model,
                                const std::vector<std::vector<double>> &x,
                                const std::vector<int> &y, double tol);

struct SvmGrid {
  std::vector<double> c_values{10.0, 1e4};
  std::vector<double> gamma_values{1e-4, 1e-1};
};

struct GridCell {
  double c = 0.0;
  double gamma = 0.0;
  double val_accuracy = 0.0;
};

struct GridSearchResult {
  double best_c = 0.0;
  double best_gamma = 0.0;
  std::vector<GridCell> cells;  // ordered by (C asc, gamma asc)
  SvmModel best_model;          // trained on the training split only
};

// Trains every (C, gamma) combination on the training split and picks the
// best validation accuracy; ties break to smaller C, then smaller gamma.
GridSearchResult grid_search_svm(const std::vector<std::vector<double>> &x_train,
                                 const std::vector<int> &y_train,
                                 const std::vector<std::vector<double>> &x_val,
                                 const std::vector<int> &y_val,
                                 const SvmGrid &grid = {}, double tol = 1e-3,
                                 int max_passes = 200);

// Versioned JSON container; reloaded models predict bit-identically.
void save_svm(const std::filesystem::path &path, const SvmModel &model);
SvmModel load_svm(const std::filesystem::path &path);

}  // namespace biasaudit

#endif  // BIASAUDIT_SVM_HPP_
