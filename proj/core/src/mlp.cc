// core/src/mlp.cc

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

#include "biasaudit/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "biasaudit/error.hpp"
#include "biasaudit/rng.hpp"

namespace biasaudit {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

RowMat to_matrix(const std::vector<std::vector<double>> &x, size_t dim) {
  RowMat m(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(dim));
  for (size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != dim) throw DimensionMismatchError("inconsistent feature dimensions");
    for (size_t c = 0; c < dim; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[r][c];
  }
  return m;
}

// Forward pass; returns softmax probabilities [n x 2] and fills z1/a1 when
// given (needed by backprop).
RowMat forward(const MlpModel &model, const RowMat &x, RowMat *z1_out, RowMat *a1_out) {
  ConstMapMat w1(model.w1.data(), static_cast<Eigen::Index>(model.input_dim),
                 static_cast<Eigen::Index>(model.hidden_dim));
  ConstMapMat w2(model.w2.data(), static_cast<Eigen::Index>(model.hidden_dim), 2);
  Eigen::Map<const Eigen::RowVectorXd> b1(model.b1.data(), static_cast<Eigen::Index>(model.hidden_dim));
  Eigen::Map<const Eigen::RowVectorXd> b2(model.b2.data(), 2);

  RowMat z1 = (x * w1).rowwise() + b1;
  RowMat a1 = z1.cwiseMax(0.0);
  RowMat logits = (a1 * w2).rowwise() + b2;

  RowMat probs(logits.rows(), 2);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = std::max(logits(r, 0), logits(r, 1));
    const double e0 = std::exp(logits(r, 0) - m);
    const double e1 = std::exp(logits(r, 1) - m);
    const double z = e0 + e1;
    probs(r, 0) = e0 / z;
    probs(r, 1) = e1 / z;
  }
  if (z1_out) *z1_out = std::move(z1);
  if (a1_out) *a1_out = std::move(a1);
  return probs;
}

struct Adam {
  explicit Adam(size_t n) : m(n, 0.0), v(n, 0.0) {}
  std::vector<double> m, v;

  void step(std::vector<double> &param, const std::vector<double> &grad, double lr, int t) {
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double bc1 = 1.0 - std::pow(b1, t);
    const double bc2 = 1.0 - std::pow(b2, t);
    for (size_t i = 0; i < param.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
      v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
      param[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }
};

void check_labels(const std::vector<int> &y) {
  bool c0 = false, c1 = false;
  for (int v : y) {
    if (v == 0) c0 = true;
    else if (v == 1) c1 = true;
    else throw InvalidArgumentError("mlp labels must be 0/1");
  }
  if (!c0 || !c1) throw SingleClassError("mlp_train needs both classes");
}

double accuracy(const MlpModel &model, const RowMat &x, const std::vector<int> &y) {
  RowMat probs = forward(model, x, nullptr, nullptr);
  size_t correct = 0;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    const int label = probs(r, 1) >= probs(r, 0) ? 1 : 0;
    if (label == y[static_cast<size_t>(r)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(probs.rows());
}

}  // namespace

MlpModel mlp_init(size_t input_dim, uint64_t seed, size_t hidden_dim) {
  MlpModel model;
  model.input_dim = input_dim;
  model.hidden_dim = hidden_dim;
  model.w1.resize(input_dim * hidden_dim);
  model.b1.assign(hidden_dim, 0.0);
  model.w2.resize(hidden_dim * 2);
  model.b2.assign(2, 0.0);

  Rng rng(mix_seed(seed, 0x6d6c70ULL));
  const double l1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
  for (double &w : model.w1) w = rng.uniform(-l1, l1);
  const double l2 = std::sqrt(6.0 / static_cast<double>(hidden_dim + 2));
  for (double &w : model.w2) w = rng.uniform(-l2, l2);
  return model;
}

double mlp_loss_and_gradients(const MlpModel &model,
                              const std::vector<std::vector<double>> &x,
                              const std::vector<int> &y, MlpGradients *grads) {
  const RowMat xm = to_matrix(x, model.input_dim);
  RowMat z1, a1;
  RowMat probs = forward(model, xm, &z1, &a1);

  double loss = 0.0;
  RowMat dlogits = probs;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    loss -= std::log(std::max(probs(r, y[static_cast<size_t>(r)]), 1e-300));
    dlogits(r, y[static_cast<size_t>(r)]) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  loss *= inv_n;
  if (!grads) return loss;
  dlogits *= inv_n;

  ConstMapMat w2(model.w2.data(), static_cast<Eigen::Index>(model.hidden_dim), 2);
  RowMat dw2 = a1.transpose() * dlogits;
  Eigen::RowVectorXd db2 = dlogits.colwise().sum();
  RowMat da1 = dlogits * w2.transpose();
  RowMat dz1 = (z1.array() > 0.0).cast<double>() * da1.array();
  RowMat dw1 = xm.transpose() * dz1;
  Eigen::RowVectorXd db1 = dz1.colwise().sum();

  grads->w1.assign(dw1.data(), dw1.data() + dw1.size());
  grads->b1.assign(db1.data(), db1.data() + db1.size());
  grads->w2.assign(dw2.data(), dw2.data() + dw2.size());
  grads->b2.assign(db2.data(), db2.data() + db2.size());
  return loss;
}

double mlp_loss(const MlpModel &model, const std::vector<std::vector<double>> &x,
                const std::vector<int> &y) {
  return mlp_loss_and_gradients(model, x, y, nullptr);
}

MlpModel mlp_train(const std::vector<std::vector<double>> &x_train,
                   const std::vector<int> &y_train,
                   const std::vector<std::vector<double>> &x_val,
                   const std::vector<int> &y_val, const MlpTrainOptions &opts) {
  if (x_train.empty() || x_train.size() != y_train.size())
    throw InvalidArgumentError("mlp_train needs labelled training data");
  if (x_val.empty() || x_val.size() != y_val.size())
    throw InvalidArgumentError("mlp_train needs a validation set");
  check_labels(y_train);

  const size_t dim = x_train.front().size();
  MlpModel model = mlp_init(dim, opts.seed, opts.hidden_dim);
  Rng shuffle_rng(mix_seed(opts.seed, 0x7368756646ULL));

  const RowMat val_m = to_matrix(x_val, dim);

  Adam adam_w1(model.w1.size()), adam_b1(model.b1.size());
  Adam adam_w2(model.w2.size()), adam_b2(model.b2.size());

  std::vector<size_t> order(x_train.size());
  std::iota(order.begin(), order.end(), 0);

  MlpModel best = model;
  double best_val_acc = -1.0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  double lr = opts.lr;
  int t = 0;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    const size_t batch = std::max(1, opts.batch);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t len = std::min(batch, order.size() - start);
      std::vector<std::vector<double>> bx(len);
      std::vector<int> by(len);
      for (size_t i = 0; i < len; ++i) {
        bx[i] = x_train[order[start + i]];
        by[i] = y_train[order[start + i]];
      }
      MlpGradients g;
      mlp_loss_and_gradients(model, bx, by, &g);
      ++t;
      adam_w1.step(model.w1, g.w1, lr, t);
      adam_b1.step(model.b1, g.b1, lr, t);
      adam_w2.step(model.w2, g.w2, lr, t);
      adam_b2.step(model.b2, g.b2, lr, t);
    }

    const double val_loss = mlp_loss(model, x_val, y_val);
    const double val_acc = accuracy(model, val_m, y_val);
    if (val_acc > best_val_acc) {
      best_val_acc = val_acc;
      best = model;
    }
    if (val_loss < best_val_loss - 1e-12) {
      best_val_loss = val_loss;
      stagnant = 0;
    } else if (++stagnant >= opts.scheduler_patience) {
      lr *= 0.5;
      stagnant = 0;
    }
  }
  return best;
}

MlpPrediction mlp_predict(const MlpModel &model, std::span<const double> x) {
  if (x.size() != model.input_dim) throw DimensionMismatchError("mlp_predict dim mismatch");
  RowMat xm(1, static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) xm(0, static_cast<Eigen::Index>(i)) = x[i];
  const RowMat probs = forward(model, xm, nullptr, nullptr);
  MlpPrediction p;
  p.probabilities = {probs(0, 0), probs(0, 1)};
  p.label = probs(0, 1) >= probs(0, 0) ? 1 : 0;
  return p;
}

void save_mlp(const std::filesystem::path &path, const MlpModel &model) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["type"] = "mlp";
  j["input_dim"] = model.input_dim;
  j["hidden_dim"] = model.hidden_dim;
  j["w1"] = model.w1;
  j["b1"] = model.b1;
  j["w2"] = model.w2;
  j["b2"] = model.b2;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model: " + path.string());
  out << j.dump(2) << '\n';
}

MlpModel load_mlp(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open model: " + path.string());
  nlohmann::json j;
  in >> j;
  if (j.value("type", "") != "mlp" || j.value("format_version", 0) != 1)
    throw Error("unsupported mlp model container: " + path.string());
  MlpModel m;
  m.input_dim = j.at("input_dim").get<size_t>();
  m.hidden_dim = j.at("hidden_dim").get<size_t>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  return m;
}

}  // namespace biasaudit
