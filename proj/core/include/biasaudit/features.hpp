// core/include/biasaudit/features.hpp

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

// Handcrafted acoustic representations: MFCC functionals (48-dim), spectral
// sparsity via the Gamma/Chi shape parameter per frequency bin (129-dim at
// 16 kHz), log-Mel segment matrices (126 bands), and mean-pooled log-Mel
// vectors; plus z-score standardization and PCA retaining 95% variance.
// Extractors are deterministic; fitted states are immutable after fitting.

#ifndef BIASAUDIT_FEATURES_HPP_
#define BIASAUDIT_FEATURES_HPP_

#include <span>
#include <string>
#include <vector>

namespace biasaudit {

enum class FeatureKind { mfcc_stats, sparsity, mel_pooled };

const char *feature_kind_name(FeatureKind kind);

struct FeatureVector {
  FeatureKind kind = FeatureKind::mfcc_stats;
  std::vector<double> values;
  std::string source_id;   // utterance or segment id
  std::string speaker_id;
};

struct MelSegment {
  size_t n_mels = 0;
  size_t n_frames = 0;
  std::vector<double> log_mel;  // row-major [n_mels x n_frames]
  std::string source_id;
  size_t segment_index = 0;

  // Mean over time frames -> n_mels vector.
  std::vector<double> mean_pooled() const;
};

// Gamma shape MLE on the power domain (equivalent Chi/Nakagami
// parameterization): s = ln(mean p) - mean(ln p); Greenwood-Durand init,
// Newton iterations on ln k - psi(k) - s; clamped to [1e-3, 1e4], with the
// degenerate cap 1e4 for s < 1e-10. Values are floored at 1e-12.
// Throws SignalTooShortError for fewer than 8 values.
double gamma_shape_mle(std::span<const double> powers);

// Per frame (32 ms / 16 ms hop): 26 log Mel energies -> DCT-II -> c1..c12
// (c0 excluded); per coefficient mean/variance/skewness/kurtosis.
// 48 values ordered [c1 stats..., c2 stats..., ...].
FeatureVector mfcc_stats(std::span<const double> signal);

// STFT with 16 ms window / 8 ms hop; per frequency bin the Gamma shape of
// the squared magnitudes across frames. 129-dim at 16 kHz. Needs >= 8 frames.
FeatureVector sparsity_features(std::span<const double> signal);

// 500 ms segments at a 250 ms shift; each is log(mel + 1e-10) of an STFT with
// 32 ms window / 4 ms hop and 126 Mel bands. Signals shorter than 500 ms
// yield one zero-padded segment.
std::vector<MelSegment> mel_segments(std::span<const double> signal);

// Mean over time of the log-Mel matrix of the whole signal; 126-dim.
FeatureVector mel_pooled(std::span<const double> signal);

class Standardizer {
 public:
  // Per-dimension mean and population std (floored at 1e-8), fitted on
  // training data only.
  static Standardizer fit(const std::vector<std::vector<double>> &train);

  std::vector<double> apply(std::span<const double> v) const;

  size_t dim() const { return mean_.size(); }
  const std::vector<double> &mean() const { return mean_; }
  const std::vector<double> &std_dev() const { return std_; }

 private:
  std::vector<double> mean_, std_;
};

class Pca {
 public:
  // Centers by the train mean, eigendecomposes the covariance and keeps the
  // smallest m with cumulative eigenvalue ratio >= ratio (default 0.95).
  // Each eigenvector's max-|component| entry is made positive.
  static Pca fit(const std::vector<std::vector<double>> &train, double ratio = 0.95);

  std::vector<double> apply(std::span<const double> v) const;

  size_t input_dim() const { return mean_.size(); }
  size_t retained_dim() const { return retained_; }
  double cumulative_ratio() const { return cumulative_ratio_; }
  const std::vector<double> &eigenvalues() const { return eigenvalues_; }  // descending, all
  // Column c of the projection basis (input_dim entries).
  std::vector<double> basis_column(size_t c) const;

 private:
  std::vector<double> mean_;
  std::vector<double> basis_;  // row-major [input_dim x retained]
  std::vector<double> eigenvalues_;
  size_t retained_ = 0;
  double cumulative_ratio_ = 0.0;
};

}  // namespace biasaudit

#endif  // BIASAUDIT_FEATURES_HPP_
