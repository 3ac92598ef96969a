// core/src/svm.cc

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

#include "biasaudit/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "biasaudit/error.hpp"

namespace biasaudit {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Pairwise squared distances, row-major n x n.
std::vector<double> distance_matrix(const std::vector<std::vector<double>> &x) {
  const size_t n = x.size();
  std::vector<double> d(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double v = sq_dist(x[i], x[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return d;
}

class Smo {
 public:
  Smo(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
      const std::vector<double> &dist, const SvmTrainOptions &opts)
      : x_(x), y_(y), n_(x.size()), c_(opts.c), tol_(opts.tol),
        step_eps_(opts.tol * 0.1 + 1e-14), kernel_(n_ * n_),
        alpha_(n_, 0.0), error_(n_) {
    for (size_t i = 0; i < n_ * n_; ++i) kernel_[i] = std::exp(-opts.gamma * dist[i]);
    for (size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(y_[i]);  // f=0 initially
  }

  void run(int max_passes) {
    bool examine_all = true;
    int since_full_sweep = 0;
    for (int pass = 0; pass < max_passes; ++pass) {
      // Cap consecutive non-bound passes so bound violators are revisited
      // even when an unbound pair keeps trading small steps.
      if (since_full_sweep >= 5) examine_all = true;

      size_t changed = 0;
      if (examine_all) {
        for (size_t i = 0; i < n_; ++i) changed += examine(i);
        since_full_sweep = 0;
      } else {
        for (size_t i = 0; i < n_; ++i)
          if (alpha_[i] > 0.0 && alpha_[i] < c_) changed += examine(i);
        ++since_full_sweep;
      }
      if (examine_all) {
        if (changed == 0) break;
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
  }

  const std::vector<double> &alphas() const { return alpha_; }
  double bias() const { return b_; }

 private:
  double k(size_t i, size_t j) const { return kernel_[i * n_ + j]; }

  size_t examine(size_t i2) {
    const double y2 = y_[i2];
    const double a2 = alpha_[i2];
    const double r2 = error_[i2] * y2;
    if (!((r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0))) return 0;

    // Second choice heuristic: maximize |E1 - E2| over non-bound points.
    size_t best = n_;
    double best_gap = -1.0;
    for (size_t i = 0; i < n_; ++i) {
      if (i == i2 || alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;

    // Deterministic sweeps: non-bound first, then everything.
    for (size_t off = 1; off <= n_; ++off) {
      const size_t i = (i2 + off) % n_;
      if (i == i2 || alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
      if (take_step(i, i2)) return 1;
    }
    for (size_t off = 1; off <= n_; ++off) {
      const size_t i = (i2 + off) % n_;
      if (i == i2) continue;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(size_t i1, size_t i2) {
    if (i1 == i2) return false;
    const double alph1 = alpha_[i1], alph2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, alph2 - alph1);
      hi = std::min(c_, c_ + alph2 - alph1);
    } else {
      lo = std::max(0.0, alph1 + alph2 - c_);
      hi = std::min(c_, alph1 + alph2);
    }
    if (lo >= hi) return false;

    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2;
    if (eta > 0.0) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // Flat direction (duplicate points): evaluate the objective at the ends.
      const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
      const double f2 = y2 * (e2 + b_) - s * alph1 * k12 - alph2 * k22;
      const double l1 = alph1 + s * (alph2 - lo);
      const double h1 = alph1 + s * (alph2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - step_eps_) a2 = lo;
      else if (obj_lo > obj_hi + step_eps_) a2 = hi;
      else return false;
    }
    if (std::abs(a2 - alph2) < step_eps_ * (a2 + alph2 + step_eps_)) return false;

    const double a1 = alph1 + s * (alph2 - a2);

    const double b_old = b_;
    const double b1 = b_ - e1 - y1 * (a1 - alph1) * k11 - y2 * (a2 - alph2) * k12;
    const double b2 = b_ - e2 - y1 * (a1 - alph1) * k12 - y2 * (a2 - alph2) * k22;
    if (a1 > 0.0 && a1 < c_) b_ = b1;
    else if (a2 > 0.0 && a2 < c_) b_ = b2;
    else b_ = 0.5 * (b1 + b2);

    alpha_[i1] = a1;
    alpha_[i2] = a2;

    const double d1 = y1 * (a1 - alph1), d2 = y2 * (a2 - alph2), db = b_ - b_old;
    for (size_t i = 0; i < n_; ++i)
      error_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    return true;
  }

  const std::vector<std::vector<double>> &x_;
  const std::vector<int> &y_;
  size_t n_;
  double c_, tol_, step_eps_;
  std::vector<double> kernel_;
  std::vector<double> alpha_;
  std::vector<double> error_;  // f(x_i) - y_i
  double b_ = 0.0;
};

SvmModel build_model(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                     const Smo &smo, const SvmTrainOptions &opts) {
  SvmModel model;
  model.gamma = opts.gamma;
  model.c = opts.c;
  model.bias = smo.bias();
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = smo.alphas()[i];
    if (a > 0.0) {
      model.support_vectors.push_back(x[i]);
      model.alphas.push_back(a);
      model.coeffs.push_back(a * y[i]);
      model.sv_indices.push_back(i);
    }
  }
  return model;
}

void check_training_input(const std::vector<std::vector<double>> &x, const std::vector<int> &y) {
  if (x.size() < 2 || x.size() != y.size())
    throw InvalidArgumentError("svm_train needs >= 2 labelled samples");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw InvalidArgumentError("svm labels must be +1/-1");
  }
  if (!pos || !neg) throw SingleClassError("svm_train needs both classes");
  const size_t d = x.front().size();
  for (const auto &row : x) {
    if (row.size() != d) throw DimensionMismatchError("inconsistent feature dimensions");
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidArgumentError("non-finite feature value");
  }
}

SvmModel train_with_dist(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                         const std::vector<double> &dist, const SvmTrainOptions &opts) {
  Smo smo(x, y, dist, opts);
  smo.run(opts.max_passes);
  return build_model(x, y, smo, opts);
}

}  // namespace

SvmModel svm_train(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                   const SvmTrainOptions &opts) {
  check_training_input(x, y);
  return train_with_dist(x, y, distance_matrix(x), opts);
}

SvmPrediction svm_predict(const SvmModel &model, std::span<const double> x) {
  if (!model.support_vectors.empty() && x.size() != model.dim())
    throw DimensionMismatchError("svm_predict dim mismatch");
  double f = model.bias;
  for (size_t i = 0; i < model.support_vectors.size(); ++i)
    f += model.coeffs[i] * std::exp(-model.gamma * sq_dist(model.support_vectors[i], x));
  SvmPrediction p;
  p.decision = f;
  p.label = f < 0.0 ? -1 : 1;
  return p;
}

size_t svm_count_kkt_violations(const SvmModel &model,
                                const std::vector<std::vector<double>> &x,
                                const std::vector<int> &y, double tol) {
  std::vector<double> alpha(x.size(), 0.0);
  for (size_t i = 0; i < model.sv_indices.size(); ++i) alpha[model.sv_indices[i]] = model.alphas[i];
  size_t violations = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double yf = y[i] * svm_predict(model, x[i]).decision;
    const double a = alpha[i];
    bool ok;
    if (a <= 0.0) ok = yf >= 1.0 - tol;
    else if (a >= model.c) ok = yf <= 1.0 + tol;
    else ok = std::abs(yf - 1.0) <= tol;
    if (!ok) ++violations;
  }
  return violations;
}

GridSearchResult grid_search_svm(const std::vector<std::vector<double>> &x_train,
                                 const std::vector<int> &y_train,
                                 const std::vector<std::vector<double>> &x_val,
                                 const std::vector<int> &y_val,
                                 const SvmGrid &grid, double tol, int max_passes) {
  check_training_input(x_train, y_train);
  if (x_val.empty() || x_val.size() != y_val.size())
    throw InvalidArgumentError("grid_search_svm needs a non-empty validation set");

  std::vector<double> c_values(grid.c_values), gamma_values(grid.gamma_values);
  std::sort(c_values.begin(), c_values.end());
  std::sort(gamma_values.begin(), gamma_values.end());

  const std::vector<double> dist = distance_matrix(x_train);

  GridSearchResult result;
  double best_acc = -1.0;
  for (double c : c_values) {
    for (double gamma : gamma_values) {
      SvmTrainOptions opts;
      opts.c = c;
      opts.gamma = gamma;
      opts.tol = tol;
      opts.max_passes = max_passes;
      SvmModel model = train_with_dist(x_train, y_train, dist, opts);

      size_t correct = 0;
      for (size_t i = 0; i < x_val.size(); ++i)
        if (svm_predict(model, x_val[i]).label == y_val[i]) ++correct;
      const double acc = static_cast<double>(correct) / static_cast<double>(x_val.size());

      result.cells.push_back({c, gamma, acc});
      if (acc > best_acc) {  // strict: earlier (smaller C, then gamma) wins ties
        best_acc = acc;
        result.best_c = c;
        result.best_gamma = gamma;
        result.best_model = std::move(model);
      }
    }
  }
  return result;
}

void save_svm(const std::filesystem::path &path, const SvmModel &model) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["type"] = "svm_rbf";
  j["gamma"] = model.gamma;
  j["c"] = model.c;
  j["bias"] = model.bias;
  j["support_vectors"] = model.support_vectors;
  j["coeffs"] = model.coeffs;
  j["alphas"] = model.alphas;
  j["sv_indices"] = model.sv_indices;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model: " + path.string());
  out << j.dump(2) << '\n';
}

SvmModel load_svm(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open model: " + path.string());
  nlohmann::json j;
  in >> j;
  if (j.value("type", "") != "svm_rbf" || j.value("format_version", 0) != 1)
    throw Error("unsupported svm model container: " + path.string());
  SvmModel m;
  m.gamma = j.at("gamma").get<double>();
  m.c = j.at("c").get<double>();
  m.bias = j.at("bias").get<double>();
  m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  m.coeffs = j.at("coeffs").get<std::vector<double>>();
  m.alphas = j.at("alphas").get<std::vector<double>>();
  m.sv_indices = j.at("sv_indices").get<std::vector<size_t>>();
  return m;
}

}  // namespace biasaudit
