// core/include/biasaudit/dsp.hpp

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

// Shared signal-processing kernels: framing, Hamming windowing, STFT
// magnitudes, Mel filterbank, orthonormal DCT-II, and statistical moments.
// All functions are pure and thread-safe.

#ifndef BIASAUDIT_DSP_HPP_
#define BIASAUDIT_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace biasaudit {

inline constexpr int kSampleRate = 16000;

struct StftConfig {
  double window_len_ms = 32.0;
  double hop_ms = 16.0;
  // Window is always Hamming: 0.54 - 0.46*cos(2*pi*n/(N-1)).
};

struct Spectrogram {
  size_t n_frames = 0;
  size_t n_bins = 0;
  double bin_hz = 0.0;                 // Hz per FFT bin
  std::vector<double> frame_times_s;   // frame start times
  std::vector<double> magnitudes;      // row-major [n_frames x n_bins]

  double at(size_t frame, size_t bin) const { return magnitudes[frame * n_bins + bin]; }
};

struct MomentStats {
  double mean = 0.0;
  double variance = 0.0;  // population
  double skewness = 0.0;  // m3 / m2^1.5
  double kurtosis = 0.0;  // m4 / m2^2, non-excess
};

std::vector<double> hamming_window(size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>> &buf);

size_t next_pow2(size_t n);

// Magnitudes of the one-sided FFT of Hamming-windowed frames.
// frames = floor((len - win) / hop) + 1; FFT size = next power of two >= win;
// n_bins = fft/2 + 1. Throws SignalTooShortError if input < one window.
Spectrogram stft_magnitude(std::span<const double> samples, const StftConfig &cfg);

// Triangular filters with centers uniform on mel(f) = 2595*log10(1 + f/700).
// Row-major [n_mels x n_bins]; weights evaluated at bin center frequencies.
std::vector<double> mel_filter_weights(size_t n_bins, double bin_hz, size_t n_mels,
                                       double fmin_hz, double fmax_hz);

// Filter-weighted sums of spectrogram magnitudes, row-major [n_frames x n_mels].
std::vector<double> mel_filterbank(const Spectrogram &spec, size_t n_mels,
                                   double fmin_hz, double fmax_hz);

// First n_out coefficients of the orthonormal DCT-II of x.
std::vector<double> dct_ii_orthonormal(std::span<const double> x, size_t n_out);

// Full orthonormal DCT-II matrix, row-major [n x n].
std::vector<double> dct_ii_matrix(size_t n);

// Population moments; for variance < 1e-12 skewness and kurtosis are 0.
// Throws SignalTooShortError for fewer than 2 values.
MomentStats moment_stats(std::span<const double> series);

}  // namespace biasaudit

#endif  // BIASAUDIT_DSP_HPP_
