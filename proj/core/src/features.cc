// core/src/features.cc

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

#include "biasaudit/features.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "biasaudit/dsp.hpp"
#include "biasaudit/error.hpp"
#include "biasaudit/special_math.hpp"

namespace biasaudit {

namespace {

constexpr double kLogFloor = 1e-10;
constexpr size_t kMfccFilters = 26;
constexpr size_t kMfccCoeffs = 12;  // c1..c12
constexpr size_t kMelBands = 126;
constexpr double kFullBand = 8000.0;

std::vector<double> log_mel_frames(std::span<const double> signal, const StftConfig &cfg,
                                   size_t n_mels, size_t *n_frames_out) {
  const Spectrogram spec = stft_magnitude(signal, cfg);
  std::vector<double> mel = mel_filterbank(spec, n_mels, 0.0, kFullBand);
  for (double &v : mel) v = std::log(v + kLogFloor);
  *n_frames_out = spec.n_frames;
  return mel;
}

}  // namespace

const char *feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::mfcc_stats: return "mfcc_stats";
    case FeatureKind::sparsity: return "sparsity";
    case FeatureKind::mel_pooled: return "mel_pooled";
  }
  return "?";
}

std::vector<double> MelSegment::mean_pooled() const {
  std::vector<double> out(n_mels, 0.0);
  for (size_t m = 0; m < n_mels; ++m) {
    double acc = 0.0;
    for (size_t f = 0; f < n_frames; ++f) acc += log_mel[m * n_frames + f];
    out[m] = acc / static_cast<double>(n_frames);
  }
  return out;
}

double gamma_shape_mle(std::span<const double> powers) {
  if (powers.size() < 8) throw SignalTooShortError("gamma_shape_mle needs at least 8 values");
  const double n = static_cast<double>(powers.size());
  double mean = 0.0, mean_log = 0.0;
  for (double p : powers) {
    const double v = std::max(p, 1e-12);
    mean += v;
    mean_log += std::log(v);
  }
  mean /= n;
  mean_log /= n;

  const double s = std::log(mean) - mean_log;
  if (s < 1e-10) return 1e4;  // (near-)constant input

  // Greenwood-Durand initialization, then Newton on ln k - psi(k) - s.
  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  k = std::clamp(k, 1e-3, 1e4);
  for (int it = 0; it < 50; ++it) {
    const double f = std::log(k) - digamma(k) - s;
    const double fp = 1.0 / k - trigamma(k);
    const double step = f / fp;
    double next = k - step;
    if (!(next > 0.0)) next = k / 2.0;
    next = std::clamp(next, 1e-3, 1e4);
    const double delta = std::abs(next - k);
    k = next;
    if (delta < 1e-8) break;
  }
  return std::clamp(k, 1e-3, 1e4);
}

FeatureVector mfcc_stats(std::span<const double> signal) {
  if (signal.size() < 1024) throw SignalTooShortError("mfcc_stats needs at least 64 ms");
  size_t n_frames = 0;
  const std::vector<double> mel =
      log_mel_frames(signal, StftConfig{32.0, 16.0}, kMfccFilters, &n_frames);
  if (n_frames < 2) throw SignalTooShortError("mfcc_stats needs at least 2 frames");

  // DCT per frame, keep c1..c12.
  const std::vector<double> dct = dct_ii_matrix(kMfccFilters);
  std::vector<double> coeffs(n_frames * kMfccCoeffs);
  for (size_t f = 0; f < n_frames; ++f) {
    const double *row = &mel[f * kMfccFilters];
    for (size_t k = 1; k <= kMfccCoeffs; ++k) {
      double acc = 0.0;
      const double *d = &dct[k * kMfccFilters];
      for (size_t i = 0; i < kMfccFilters; ++i) acc += d[i] * row[i];
      coeffs[f * kMfccCoeffs + (k - 1)] = acc;
    }
  }

  FeatureVector out;
  out.kind = FeatureKind::mfcc_stats;
  out.values.reserve(4 * kMfccCoeffs);
  std::vector<double> series(n_frames);
  for (size_t k = 0; k < kMfccCoeffs; ++k) {
    for (size_t f = 0; f < n_frames; ++f) series[f] = coeffs[f * kMfccCoeffs + k];
    const MomentStats st = moment_stats(series);
    out.values.push_back(st.mean);
    out.values.push_back(st.variance);
    out.values.push_back(st.skewness);
    out.values.push_back(st.kurtosis);
  }
  return out;
}

FeatureVector sparsity_features(std::span<const double> signal) {
  if (signal.size() < 256) throw SignalTooShortError("sparsity_features needs at least 16 ms");
  const Spectrogram spec = stft_magnitude(signal, StftConfig{16.0, 8.0});
  if (spec.n_frames < 8)
    throw SignalTooShortError("sparsity_features needs at least 8 frames (~72 ms)");

  FeatureVector out;
  out.kind = FeatureKind::sparsity;
  out.values.resize(spec.n_bins);
  std::vector<double> bin_powers(spec.n_frames);
  for (size_t b = 0; b < spec.n_bins; ++b) {
    for (size_t f = 0; f < spec.n_frames; ++f) {
      const double m = spec.at(f, b);
      bin_powers[f] = m * m;
    }
    out.values[b] = gamma_shape_mle(bin_powers);
  }
  return out;
}

std::vector<MelSegment> mel_segments(std::span<const double> signal) {
  if (signal.empty()) throw SignalTooShortError("mel_segments needs a non-empty signal");
  const size_t seg_len = 8000;   // 500 ms
  const size_t shift = 4000;     // 250 ms

  std::vector<double> padded;
  std::span<const double> src = signal;
  if (signal.size() < seg_len) {
    padded.assign(signal.begin(), signal.end());
    padded.resize(seg_len, 0.0);
    src = padded;
  }

  const size_t n_segments = (src.size() - seg_len) / shift + 1;
  std::vector<MelSegment> out;
  out.reserve(n_segments);
  for (size_t s = 0; s < n_segments; ++s) {
    size_t n_frames = 0;
    std::vector<double> mel = log_mel_frames(src.subspan(s * shift, seg_len),
                                             StftConfig{32.0, 4.0}, kMelBands, &n_frames);
    MelSegment seg;
    seg.n_mels = kMelBands;
    seg.n_frames = n_frames;
    seg.segment_index = s;
    // Transpose to [n_mels x n_frames].
    seg.log_mel.resize(kMelBands * n_frames);
    for (size_t f = 0; f < n_frames; ++f)
      for (size_t m = 0; m < kMelBands; ++m) seg.log_mel[m * n_frames + f] = mel[f * kMelBands + m];
    out.push_back(std::move(seg));
  }
  return out;
}

FeatureVector mel_pooled(std::span<const double> signal) {
  if (signal.size() < 512) throw SignalTooShortError("mel_pooled needs at least one 32 ms window");
  size_t n_frames = 0;
  const std::vector<double> mel = log_mel_frames(signal, StftConfig{32.0, 4.0}, kMelBands, &n_frames);
  FeatureVector out;
  out.kind = FeatureKind::mel_pooled;
  out.values.assign(kMelBands, 0.0);
  for (size_t f = 0; f < n_frames; ++f)
    for (size_t m = 0; m < kMelBands; ++m) out.values[m] += mel[f * kMelBands + m];
  for (double &v : out.values) v /= static_cast<double>(n_frames);
  return out;
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>> &train) {
  if (train.empty()) throw InvalidArgumentError("standardizer needs training data");
  const size_t d = train.front().size();
  for (const auto &v : train)
    if (v.size() != d) throw DimensionMismatchError("inconsistent feature dimensions");

  Standardizer st;
  st.mean_.assign(d, 0.0);
  st.std_.assign(d, 0.0);
  const double n = static_cast<double>(train.size());
  for (const auto &v : train)
    for (size_t i = 0; i < d; ++i) st.mean_[i] += v[i];
  for (double &m : st.mean_) m /= n;
  for (const auto &v : train)
    for (size_t i = 0; i < d; ++i) {
      const double diff = v[i] - st.mean_[i];
      st.std_[i] += diff * diff;
    }
  for (double &s : st.std_) s = std::max(std::sqrt(s / n), 1e-8);
  return st;
}

std::vector<double> Standardizer::apply(std::span<const double> v) const {
  if (v.size() != mean_.size()) throw DimensionMismatchError("standardizer dim mismatch");
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean_[i]) / std_[i];
  return out;
}

Pca Pca::fit(const std::vector<std::vector<double>> &train, double ratio) {
  if (train.size() < 2) throw InvalidArgumentError("pca needs at least 2 training vectors");
  const size_t d = train.front().size();
  for (const auto &v : train)
    if (v.size() != d) throw DimensionMismatchError("inconsistent feature dimensions");

  Eigen::MatrixXd x(train.size(), d);
  for (size_t r = 0; r < train.size(); ++r)
    for (size_t c = 0; c < d; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = train[r][c];

  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov =
      (x.transpose() * x) / static_cast<double>(train.size() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("pca eigendecomposition failed");

  // Eigen returns ascending order; flip to descending and clamp tiny
  // negative values caused by rounding.
  const Eigen::Index nd = static_cast<Eigen::Index>(d);
  Eigen::VectorXd evals(nd);
  Eigen::MatrixXd evecs(nd, nd);
  for (Eigen::Index i = 0; i < nd; ++i) {
    evals(i) = std::max(solver.eigenvalues()(nd - 1 - i), 0.0);
    evecs.col(i) = solver.eigenvectors().col(nd - 1 - i);
  }

  const double total = evals.sum();
  size_t m = 0;
  double cum = 0.0;
  if (total <= 0.0) {
    m = 1;
    cum = 1.0;  // degenerate: all training vectors identical
  } else {
    for (Eigen::Index i = 0; i < nd; ++i) {
      cum += evals(i) / total;
      ++m;
      if (cum >= ratio) break;
    }
  }

  // Sign convention: the entry with the largest magnitude is positive.
  for (size_t c = 0; c < m; ++c) {
    Eigen::Index arg = 0;
    evecs.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff(&arg);
    if (evecs(arg, static_cast<Eigen::Index>(c)) < 0.0)
      evecs.col(static_cast<Eigen::Index>(c)) *= -1.0;
  }

  Pca pca;
  pca.mean_.assign(mean.data(), mean.data() + nd);
  pca.retained_ = m;
  pca.cumulative_ratio_ = std::min(cum, 1.0);
  pca.eigenvalues_.assign(evals.data(), evals.data() + nd);
  pca.basis_.resize(d * m);
  for (size_t r = 0; r < d; ++r)
    for (size_t c = 0; c < m; ++c)
      pca.basis_[r * m + c] = evecs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return pca;
}

std::vector<double> Pca::apply(std::span<const double> v) const {
  if (v.size() != mean_.size()) throw DimensionMismatchError("pca dim mismatch");
  std::vector<double> out(retained_, 0.0);
  for (size_t r = 0; r < mean_.size(); ++r) {
    const double centered = v[r] - mean_[r];
    const double *row = &basis_[r * retained_];
    for (size_t c = 0; c < retained_; ++c) out[c] += centered * row[c];
  }
  return out;
}

std::vector<double> Pca::basis_column(size_t c) const {
  std::vector<double> col(mean_.size());
  for (size_t r = 0; r < mean_.size(); ++r) col[r] = basis_[r * retained_ + c];
  return col;
}

}  // namespace biasaudit
