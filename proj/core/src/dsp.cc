// core/src/dsp.cc

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

#include "biasaudit/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biasaudit/error.hpp"

namespace biasaudit {

namespace {

size_t samples_from_ms(double ms) {
  return static_cast<size_t>(std::llround(ms * kSampleRate / 1000.0));
}

double mel_of_hz(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }

double hz_of_mel(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

std::vector<double> hamming_window(size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_radix2(std::vector<std::complex<double>> &buf) {
  const size_t n = buf.size();
  if (n < 2) return;
  if ((n & (n - 1)) != 0) throw InvalidArgumentError("fft size must be a power of two");

  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(buf[i], buf[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = buf[i + k];
        const std::complex<double> v = buf[i + k + len / 2] * w;
        buf[i + k] = u + v;
        buf[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

Spectrogram stft_magnitude(std::span<const double> samples, const StftConfig &cfg) {
  const size_t win = samples_from_ms(cfg.window_len_ms);
  const size_t hop = samples_from_ms(cfg.hop_ms);
  if (win < 2 || hop < 1 || hop > win) throw InvalidArgumentError("invalid stft config");
  if (samples.size() < win) throw SignalTooShortError("input shorter than one stft window");

  const size_t fft_size = next_pow2(win);
  const size_t n_bins = fft_size / 2 + 1;
  const size_t n_frames = (samples.size() - win) / hop + 1;
  const std::vector<double> window = hamming_window(win);

  Spectrogram out;
  out.n_frames = n_frames;
  out.n_bins = n_bins;
  out.bin_hz = static_cast<double>(kSampleRate) / static_cast<double>(fft_size);
  out.frame_times_s.resize(n_frames);
  out.magnitudes.assign(n_frames * n_bins, 0.0);

  std::vector<std::complex<double>> buf(fft_size);
  for (size_t f = 0; f < n_frames; ++f) {
    const size_t start = f * hop;
    out.frame_times_s[f] = static_cast<double>(start) / kSampleRate;
    for (size_t i = 0; i < win; ++i) buf[i] = samples[start + i] * window[i];
    std::fill(buf.begin() + static_cast<ptrdiff_t>(win), buf.end(), std::complex<double>(0.0, 0.0));
    fft_radix2(buf);
    double *row = &out.magnitudes[f * n_bins];
    for (size_t b = 0; b < n_bins; ++b) row[b] = std::abs(buf[b]);
  }
  return out;
}

std::vector<double> mel_filter_weights(size_t n_bins, double bin_hz, size_t n_mels,
                                       double fmin_hz, double fmax_hz) {
  if (n_mels < 1 || fmin_hz < 0.0 || fmin_hz >= fmax_hz || fmax_hz > kSampleRate / 2.0)
    throw InvalidArgumentError("invalid mel filterbank frequency range");

  const double mel_lo = mel_of_hz(fmin_hz);
  const double mel_hi = mel_of_hz(fmax_hz);
  std::vector<double> edges(n_mels + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = hz_of_mel(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }

  std::vector<double> weights(n_mels * n_bins, 0.0);
  for (size_t m = 0; m < n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (size_t b = 0; b < n_bins; ++b) {
      const double f = static_cast<double>(b) * bin_hz;
      double w = 0.0;
      if (f > left && f < right) {
        w = (f <= center) ? (f - left) / (center - left) : (right - f) / (right - center);
      }
      weights[m * n_bins + b] = w;
    }
  }
  return weights;
}

std::vector<double> mel_filterbank(const Spectrogram &spec, size_t n_mels,
                                   double fmin_hz, double fmax_hz) {
  const std::vector<double> w = mel_filter_weights(spec.n_bins, spec.bin_hz, n_mels, fmin_hz, fmax_hz);
  std::vector<double> out(spec.n_frames * n_mels, 0.0);
  for (size_t f = 0; f < spec.n_frames; ++f) {
    const double *row = &spec.magnitudes[f * spec.n_bins];
    for (size_t m = 0; m < n_mels; ++m) {
      const double *wm = &w[m * spec.n_bins];
      double acc = 0.0;
      for (size_t b = 0; b < spec.n_bins; ++b) acc += wm[b] * row[b];
      out[f * n_mels + m] = acc;
    }
  }
  return out;
}

std::vector<double> dct_ii_matrix(size_t n) {
  std::vector<double> d(n * n);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      const double c = std::cos(std::numbers::pi * static_cast<double>(k) *
                                (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
      d[k * n + i] = (k == 0 ? norm0 : norm) * c;
    }
  }
  return d;
}

std::vector<double> dct_ii_orthonormal(std::span<const double> x, size_t n_out) {
  const size_t n = x.size();
  if (n_out > n) throw InvalidArgumentError("dct output count exceeds input length");
  std::vector<double> out(n_out, 0.0);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                             (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
    }
    out[k] = (k == 0 ? norm0 : norm) * acc;
  }
  return out;
}

MomentStats moment_stats(std::span<const double> series) {
  if (series.size() < 2) throw SignalTooShortError("moment_stats needs at least 2 values");
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : series) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  MomentStats s;
  s.mean = mean;
  s.variance = m2;
  if (m2 < 1e-12) {
    s.skewness = 0.0;
    s.kurtosis = 0.0;
  } else {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
  }
  return s;
}

}  // namespace biasaudit
