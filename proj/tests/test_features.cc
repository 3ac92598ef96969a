// tests/test_features.cc

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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "biasaudit/error.hpp"
#include "biasaudit/features.hpp"
#include "test_util.hpp"

using namespace biasaudit;

TEST_CASE("mfcc_stats: dimension is exactly 48") {
  testutil::Sampler rng(1);
  const auto f = mfcc_stats(rng.normal_vector(16000));
  CHECK(f.kind == FeatureKind::mfcc_stats);
  CHECK(f.values.size() == 48);
  for (double v : f.values) CHECK(std::isfinite(v));
}

TEST_CASE("mfcc_stats: invariant to positive gain (c0 excluded)") {
  testutil::Sampler rng(2);
  std::vector<double> x = rng.normal_vector(16000);
  for (double &v : x) v *= 0.05;
  std::vector<double> x10(x);
  for (double &v : x10) v *= 10.0;
  const auto a = mfcc_stats(x);
  const auto b = mfcc_stats(x10);
  for (size_t i = 0; i < 48; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);
}

TEST_CASE("mfcc_stats: stationary noise has small coefficient variances") {
  testutil::Sampler rng(3);
  const auto f = mfcc_stats(rng.normal_vector(160000));  // 10 s
  double sum_var = 0.0, sum_abs_mean = 0.0;
  for (size_t k = 0; k < 12; ++k) {
    sum_abs_mean += std::abs(f.values[4 * k]);
    sum_var += f.values[4 * k + 1];
  }
  CHECK(sum_var < sum_abs_mean);
}

TEST_CASE("mfcc_stats: too-short input is rejected") {
  CHECK_THROWS_AS(mfcc_stats(std::vector<double>(500, 0.1)), SignalTooShortError);
}

TEST_CASE("gamma_shape_mle: constant input returns the degenerate cap") {
  std::vector<double> p(100, 3.5);
  CHECK(gamma_shape_mle(p) == 10000.0);
}

TEST_CASE("gamma_shape_mle: recovers known shapes within 3%") {
  testutil::Sampler rng(7);
  for (double k_true : {1.0, 2.0, 5.0}) {
    std::vector<double> p(100000);
    for (double &v : p) v = rng.gamma(k_true);
    const double k_hat = gamma_shape_mle(p);
    CHECK(std::abs(k_hat - k_true) / k_true < 0.03);
  }
}

TEST_CASE("gamma_shape_mle: Rayleigh magnitudes give exponential powers, k near 1") {
  testutil::Sampler rng(9);
  std::vector<double> p(100000);
  for (double &v : p) {
    const double re = rng.normal(), im = rng.normal();
    v = re * re + im * im;  // |z|^2 for complex Gaussian z: exponential
  }
  const double k_hat = gamma_shape_mle(p);
  CHECK(k_hat >= 0.97);
  CHECK(k_hat <= 1.03);
}

TEST_CASE("gamma_shape_mle: fewer than 8 values is an error") {
  std::vector<double> p(7, 1.0);
  CHECK_THROWS_AS(gamma_shape_mle(p), SignalTooShortError);
}

TEST_CASE("sparsity_features: 129 dimensions at 16 kHz") {
  testutil::Sampler rng(11);
  const auto f = sparsity_features(rng.normal_vector(16000));
  CHECK(f.kind == FeatureKind::sparsity);
  CHECK(f.values.size() == 129);
}

TEST_CASE("sparsity_features: scale-free under gain") {
  testutil::Sampler rng(12);
  std::vector<double> x = rng.normal_vector(8000);
  for (double &v : x) v *= 0.03;
  std::vector<double> xg(x);
  for (double &v : xg) v *= 37.0;
  const auto a = sparsity_features(x);
  const auto b = sparsity_features(xg);
  for (size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);
}

TEST_CASE("sparsity_features: white noise gives k near 1 in every interior bin") {
  testutil::Sampler rng(13);
  const auto f = sparsity_features(rng.normal_vector(16000 * 20));
  for (size_t b = 1; b + 1 < f.values.size(); ++b) {
    CHECK(f.values[b] >= 0.9);
    CHECK(f.values[b] <= 1.1);
  }
  // DC and Nyquist of a real-input transform have a single degree of
  // freedom: chi^2_1 powers, shape 1/2.
  for (size_t b : {size_t{0}, f.values.size() - 1}) {
    CHECK(f.values[b] >= 0.4);
    CHECK(f.values[b] <= 0.6);
  }
}

TEST_CASE("sparsity_features: too-short input is rejected") {
  CHECK_THROWS_AS(sparsity_features(std::vector<double>(100, 0.1)), SignalTooShortError);
  // >= 16 ms but fewer than 8 frames is still too short for the MLE.
  CHECK_THROWS_AS(sparsity_features(std::vector<double>(600, 0.1)), SignalTooShortError);
}

TEST_CASE("mel_segments: segment counts follow the 500 ms / 250 ms grid") {
  testutil::Sampler rng(14);
  CHECK(mel_segments(rng.normal_vector(8000)).size() == 1);    // exactly 500 ms
  CHECK(mel_segments(rng.normal_vector(16000)).size() == 3);   // 0 / 250 / 500 ms starts
  CHECK(mel_segments(rng.normal_vector(3000)).size() == 1);    // zero-padded
  CHECK_THROWS_AS(mel_segments(std::vector<double>{}), SignalTooShortError);
}

TEST_CASE("mel_segments: 126 bands and a fixed frame count per segment") {
  testutil::Sampler rng(15);
  const auto segs = mel_segments(rng.normal_vector(16000));
  for (const auto &s : segs) {
    CHECK(s.n_mels == 126);
    CHECK(s.n_frames == (8000 - 512) / 64 + 1);
    for (double v : s.log_mel) CHECK(std::isfinite(v));
  }
}

TEST_CASE("mel_pooled: silence pools to log(1e-10) everywhere") {
  const auto f = mel_pooled(std::vector<double>(8000, 0.0));
  CHECK(f.values.size() == 126);
  for (double v : f.values) CHECK(v == doctest::Approx(std::log(1e-10)).epsilon(1e-12));
}

TEST_CASE("mel_pooled: disjoint halves of one stationary realization agree within 0.5") {
  testutil::Sampler rng(16);
  std::vector<double> x = rng.normal_vector(64000);
  const std::vector<double> first(x.begin(), x.begin() + 32000);
  const std::vector<double> second(x.begin() + 32000, x.end());
  const auto a = mel_pooled(first);
  const auto b = mel_pooled(second);
  for (size_t i = 0; i < 126; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 0.5);
}

TEST_CASE("standardizer: training set maps to zero mean, unit std") {
  testutil::Sampler rng(17);
  std::vector<std::vector<double>> train(50);
  for (auto &v : train) {
    v = rng.normal_vector(6);
    v[3] = 2.5;  // constant dimension
    v[0] = v[0] * 9.0 + 100.0;
  }
  const auto st = Standardizer::fit(train);

  std::vector<double> mean(6, 0.0), var(6, 0.0);
  for (const auto &v : train) {
    const auto z = st.apply(v);
    for (size_t i = 0; i < 6; ++i) mean[i] += z[i];
  }
  for (double &m : mean) m /= 50.0;
  for (const auto &v : train) {
    const auto z = st.apply(v);
    for (size_t i = 0; i < 6; ++i) var[i] += (z[i] - mean[i]) * (z[i] - mean[i]);
  }
  for (size_t i = 0; i < 6; ++i) {
    CHECK(std::abs(mean[i]) < 1e-9);
    if (i != 3) CHECK(std::sqrt(var[i] / 50.0) == doctest::Approx(1.0).epsilon(1e-6));
  }

  // Constant dimension floors to zero output.
  for (const auto &v : train) CHECK(st.apply(v)[3] == 0.0);

  // A held-out vector equal to the training mean maps to all zeros.
  CHECK(st.apply(st.mean()) == std::vector<double>(6, 0.0));

  CHECK_THROWS_AS(st.apply(std::vector<double>(5, 0.0)), DimensionMismatchError);
}

TEST_CASE("pca: exact 2-D subspace in 10-D recovers m=2 with tiny reconstruction error") {
  testutil::Sampler rng(18);
  std::vector<double> u(10), w(10);
  for (size_t i = 0; i < 10; ++i) {
    u[i] = std::cos(0.3 * static_cast<double>(i) + 0.1);
    w[i] = std::sin(0.7 * static_cast<double>(i) - 0.4);
  }
  std::vector<std::vector<double>> train;
  for (int r = 0; r < 200; ++r) {
    const double a = rng.normal() * 3.0, b = rng.normal();
    std::vector<double> v(10);
    for (size_t i = 0; i < 10; ++i) v[i] = 5.0 + a * u[i] + b * w[i];
    train.push_back(std::move(v));
  }
  std::vector<double> mean(10, 0.0);
  for (const auto &v : train)
    for (size_t i = 0; i < 10; ++i) mean[i] += v[i] / static_cast<double>(train.size());

  const auto pca = Pca::fit(train);
  REQUIRE(pca.retained_dim() == 2);
  CHECK(pca.cumulative_ratio() >= 0.95);

  for (const auto &v : train) {
    const auto z = pca.apply(v);
    double err2 = 0.0;
    for (size_t i = 0; i < 10; ++i) {
      double rec = mean[i];
      for (size_t c = 0; c < 2; ++c) rec += z[c] * pca.basis_column(c)[i];
      err2 += (rec - v[i]) * (rec - v[i]);
    }
    CHECK(std::sqrt(err2) < 1e-9);
  }
}

TEST_CASE("pca: isotropic data retains ceil(0.95 d) within 1") {
  testutil::Sampler rng(20);
  std::vector<std::vector<double>> train(20000);
  for (auto &v : train) v = rng.normal_vector(10);
  const auto pca = Pca::fit(train);
  const long want = 10;  // ceil(0.95 * 10)
  CHECK(std::llabs(static_cast<long>(pca.retained_dim()) - want) <= 1);
}

TEST_CASE("pca: retained dimension is minimal against a brute-force cumulative scan") {
  testutil::Sampler rng(21);
  std::vector<std::vector<double>> train(400);
  for (auto &v : train) {
    v = rng.normal_vector(8);
    for (size_t i = 0; i < 8; ++i) v[i] *= std::pow(0.6, static_cast<double>(i));
  }
  const auto pca = Pca::fit(train);
  const auto &ev = pca.eigenvalues();
  const double total = std::accumulate(ev.begin(), ev.end(), 0.0);
  double cum = 0.0;
  size_t m_oracle = 0;
  for (size_t i = 0; i < ev.size(); ++i) {
    cum += ev[i] / total;
    ++m_oracle;
    if (cum >= 0.95) break;
  }
  CHECK(pca.retained_dim() == m_oracle);
  // Minimality: one fewer component explains less than 95%.
  double cum_m1 = 0.0;
  for (size_t i = 0; i + 1 < m_oracle; ++i) cum_m1 += ev[i] / total;
  CHECK(cum_m1 < 0.95);
  CHECK(pca.cumulative_ratio() >= 0.95);
}

TEST_CASE("pca: basis columns are orthonormal and signed by the max component") {
  testutil::Sampler rng(22);
  std::vector<std::vector<double>> train(300);
  for (auto &v : train) v = rng.normal_vector(12);
  const auto pca = Pca::fit(train, 0.8);
  for (size_t c = 0; c < pca.retained_dim(); ++c) {
    const auto col = pca.basis_column(c);
    double norm = 0.0, peak = 0.0;
    size_t arg = 0;
    for (size_t i = 0; i < col.size(); ++i) {
      norm += col[i] * col[i];
      if (std::abs(col[i]) > peak) {
        peak = std::abs(col[i]);
        arg = i;
      }
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(col[arg] > 0.0);
    for (size_t c2 = 0; c2 < c; ++c2) {
      const auto other = pca.basis_column(c2);
      double dot = 0.0;
      for (size_t i = 0; i < col.size(); ++i) dot += col[i] * other[i];
      CHECK(std::abs(dot) < 1e-8);
    }
  }
}

TEST_CASE("pca: pairwise distances preserved for data spanned by the basis") {
  testutil::Sampler rng(23);
  std::vector<std::vector<double>> train;
  std::vector<double> u{1, 0, 0, 2, 0, 0}, w{0, 3, 0, 0, 0, 1};
  for (int r = 0; r < 60; ++r) {
    const double a = rng.normal(), b = rng.normal();
    std::vector<double> v(6);
    for (size_t i = 0; i < 6; ++i) v[i] = a * u[i] + b * w[i];
    train.push_back(std::move(v));
  }
  const auto pca = Pca::fit(train);
  REQUIRE(pca.retained_dim() == 2);
  for (size_t i = 0; i < 10; ++i) {
    for (size_t j = i + 1; j < 10; ++j) {
      double d_in = 0.0, d_out = 0.0;
      const auto zi = pca.apply(train[i]);
      const auto zj = pca.apply(train[j]);
      for (size_t k = 0; k < 6; ++k) d_in += (train[i][k] - train[j][k]) * (train[i][k] - train[j][k]);
      for (size_t k = 0; k < zi.size(); ++k) d_out += (zi[k] - zj[k]) * (zi[k] - zj[k]);
      CHECK(std::sqrt(d_in) == doctest::Approx(std::sqrt(d_out)).epsilon(1e-8));
    }
  }
}

TEST_CASE("pca: fewer than 2 vectors is an error") {
  std::vector<std::vector<double>> train{{1.0, 2.0}};
  CHECK_THROWS_AS(Pca::fit(train), InvalidArgumentError);
}

TEST_CASE("extractors are deterministic: identical input, bit-identical output") {
  testutil::Sampler rng(24);
  const std::vector<double> x = rng.normal_vector(16000);
  CHECK(mfcc_stats(x).values == mfcc_stats(x).values);
  CHECK(sparsity_features(x).values == sparsity_features(x).values);
  CHECK(mel_pooled(x).values == mel_pooled(x).values);
  const auto s1 = mel_segments(x);
  const auto s2 = mel_segments(x);
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].log_mel == s2[i].log_mel);
}
