// tests/test_dsp.cc

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biasaudit/dsp.hpp"
#include "biasaudit/error.hpp"
#include "biasaudit/special_math.hpp"
#include "test_util.hpp"

using namespace biasaudit;

namespace {

std::vector<double> sine(double freq_hz, double seconds, double amp = 0.5) {
  const size_t n = static_cast<size_t>(seconds * kSampleRate);
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / kSampleRate);
  return x;
}

}  // namespace

TEST_CASE("stft: 16 ms window at 16 kHz yields 129 bins") {
  const auto spec = stft_magnitude(sine(440.0, 0.5), StftConfig{16.0, 8.0});
  CHECK(spec.n_bins == 129);
  CHECK(spec.bin_hz == doctest::Approx(62.5));
}

TEST_CASE("stft: all-zero input gives all-zero magnitudes") {
  std::vector<double> zeros(kSampleRate, 0.0);
  const auto spec = stft_magnitude(zeros, StftConfig{32.0, 16.0});
  CHECK(spec.n_frames == (zeros.size() - 512) / 256 + 1);
  for (double m : spec.magnitudes) CHECK(m == 0.0);
}

TEST_CASE("stft: pure 1 kHz sine peaks at the closed-form bin in every frame") {
  const auto spec = stft_magnitude(sine(1000.0, 0.3), StftConfig{32.0, 16.0});
  const size_t expected = static_cast<size_t>(std::lround(1000.0 / spec.bin_hz));
  for (size_t f = 0; f < spec.n_frames; ++f) {
    const double *row = &spec.magnitudes[f * spec.n_bins];
    const size_t argmax = static_cast<size_t>(
        std::max_element(row, row + spec.n_bins) - row);
    CHECK(argmax == expected);
  }
}

TEST_CASE("stft: input shorter than one window is an error") {
  std::vector<double> x(100, 0.1);
  CHECK_THROWS_AS(stft_magnitude(x, StftConfig{32.0, 16.0}), SignalTooShortError);
}

TEST_CASE("stft: delaying by one hop shifts frames by one index") {
  testutil::Sampler rng(7);
  std::vector<double> x = rng.normal_vector(4096);
  std::vector<double> delayed(256, 0.0);
  delayed.insert(delayed.end(), x.begin(), x.end());

  const auto a = stft_magnitude(x, StftConfig{32.0, 16.0});
  const auto b = stft_magnitude(delayed, StftConfig{32.0, 16.0});
  REQUIRE(b.n_frames >= a.n_frames);
  for (size_t f = 0; f + 1 < a.n_frames; ++f)
    for (size_t k = 0; k < a.n_bins; ++k)
      CHECK(std::abs(a.at(f, k) - b.at(f + 1, k)) < 1e-9);
}

TEST_CASE("mel: zero spectrogram maps to zero mel matrix") {
  std::vector<double> zeros(kSampleRate / 2, 0.0);
  const auto spec = stft_magnitude(zeros, StftConfig{32.0, 16.0});
  const auto mel = mel_filterbank(spec, 40, 0.0, 8000.0);
  for (double v : mel) CHECK(v == 0.0);
}

TEST_CASE("mel: 126 bands produce 126 columns") {
  const auto spec = stft_magnitude(sine(500.0, 0.2), StftConfig{32.0, 4.0});
  const auto mel = mel_filterbank(spec, 126, 0.0, 8000.0);
  CHECK(mel.size() == spec.n_frames * 126);
}

TEST_CASE("mel: flat magnitude frame reproduces independently computed filter weight sums") {
  Spectrogram spec;
  spec.n_frames = 1;
  spec.n_bins = 257;
  spec.bin_hz = 16000.0 / 512.0;
  spec.frame_times_s = {0.0};
  spec.magnitudes.assign(spec.n_bins, 1.0);

  const size_t n_mels = 26;
  const auto out = mel_filterbank(spec, n_mels, 0.0, 8000.0);

  // Oracle: rebuild triangle weights directly from the mel-scale definition.
  auto mel_of = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto hz_of = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  std::vector<double> edges(n_mels + 2);
  for (size_t i = 0; i < edges.size(); ++i)
    edges[i] = hz_of(mel_of(8000.0) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  for (size_t m = 0; m < n_mels; ++m) {
    double want = 0.0;
    for (size_t b = 0; b < spec.n_bins; ++b) {
      const double f = static_cast<double>(b) * spec.bin_hz;
      if (f > edges[m] && f < edges[m + 2]) {
        want += f <= edges[m + 1] ? (f - edges[m]) / (edges[m + 1] - edges[m])
                                  : (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1]);
      }
    }
    CHECK(out[m] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("mel: weights nonnegative and every interior bin is covered") {
  const size_t n_bins = 257;
  const double bin_hz = 16000.0 / 512.0;
  for (size_t n_mels : {10UL, 26UL, 126UL}) {
    const auto w = mel_filter_weights(n_bins, bin_hz, n_mels, 0.0, 8000.0);
    for (double v : w) CHECK(v >= 0.0);
    for (size_t b = 0; b < n_bins; ++b) {
      const double f = static_cast<double>(b) * bin_hz;
      if (f <= 0.0 || f >= 8000.0) continue;
      double total = 0.0;
      for (size_t m = 0; m < n_mels; ++m) total += w[m * n_bins + b];
      CHECK(total > 0.0);
    }
  }
}

TEST_CASE("mel: invalid frequency range is an error") {
  CHECK_THROWS_AS(mel_filter_weights(129, 62.5, 26, 4000.0, 1000.0), InvalidArgumentError);
  CHECK_THROWS_AS(mel_filter_weights(129, 62.5, 26, 0.0, 9000.0), InvalidArgumentError);
}

TEST_CASE("dct: constant vector concentrates in coefficient 0") {
  const double c = 1.7;
  std::vector<double> x(32, c);
  const auto out = dct_ii_orthonormal(x, 32);
  CHECK(out[0] == doctest::Approx(c * std::sqrt(32.0)).epsilon(1e-12));
  for (size_t k = 1; k < out.size(); ++k) CHECK(std::abs(out[k]) < 1e-12);
}

TEST_CASE("dct: inverse transform reproduces the input within 1e-9") {
  testutil::Sampler rng(11);
  std::vector<double> x = rng.normal_vector(64);
  const auto coeffs = dct_ii_orthonormal(x, 64);
  const auto d = dct_ii_matrix(64);
  // Orthonormal: inverse = transpose.
  for (size_t i = 0; i < 64; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < 64; ++k) acc += d[k * 64 + i] * coeffs[k];
    CHECK(std::abs(acc - x[i]) < 1e-9);
  }
}

TEST_CASE("dct: Parseval holds within 1e-9 on a random 64-vector") {
  testutil::Sampler rng(13);
  std::vector<double> x = rng.normal_vector(64);
  const auto coeffs = dct_ii_orthonormal(x, 64);
  const double nx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  const double nc = std::sqrt(std::inner_product(coeffs.begin(), coeffs.end(), coeffs.begin(), 0.0));
  CHECK(std::abs(nx - nc) < 1e-9);
}

TEST_CASE("dct: matrix is orthonormal, max |D^T D - I| < 1e-9") {
  const size_t n = 26;
  const auto d = dct_ii_matrix(n);
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (size_t k = 0; k < n; ++k) acc += d[k * n + i] * d[k * n + j];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("dct: asking more outputs than inputs is an error") {
  std::vector<double> x(8, 1.0);
  CHECK_THROWS_AS(dct_ii_orthonormal(x, 9), InvalidArgumentError);
}

TEST_CASE("moments: constant input hits the degenerate rule") {
  std::vector<double> x{1.0, 1.0, 1.0, 1.0};
  const auto s = moment_stats(x);
  CHECK(s.mean == doctest::Approx(1.0));
  CHECK(s.variance == doctest::Approx(0.0));
  CHECK(s.skewness == 0.0);
  CHECK(s.kurtosis == 0.0);
}

TEST_CASE("moments: symmetric input has zero skewness") {
  std::vector<double> x;
  for (int i = 0; i < 50; ++i) {
    x.push_back(-1.0);
    x.push_back(1.0);
  }
  const auto s = moment_stats(x);
  CHECK(std::abs(s.skewness) < 1e-12);
  CHECK(s.variance == doctest::Approx(1.0));
}

TEST_CASE("moments: standard normal sample has kurtosis near 3") {
  testutil::Sampler rng(99);
  std::vector<double> x = rng.normal_vector(100000);
  const auto s = moment_stats(x);
  CHECK(s.kurtosis == doctest::Approx(3.0).epsilon(0.05));
  CHECK(std::abs(s.kurtosis - 3.0) < 0.15);
}

TEST_CASE("moments: permutation invariance") {
  testutil::Sampler rng(5);
  std::vector<double> x = rng.normal_vector(501);
  std::vector<double> y(x.rbegin(), x.rend());
  std::rotate(y.begin(), y.begin() + 17, y.end());
  const auto a = moment_stats(x);
  const auto b = moment_stats(y);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-12));
  CHECK(a.skewness == doctest::Approx(b.skewness).epsilon(1e-9));
  CHECK(a.kurtosis == doctest::Approx(b.kurtosis).epsilon(1e-9));
}

TEST_CASE("moments: fewer than 2 values is an error") {
  std::vector<double> x{1.0};
  CHECK_THROWS_AS(moment_stats(x), SignalTooShortError);
}

TEST_CASE("digamma and trigamma match high-precision references") {
  struct Ref { double x, psi, psi1; };
  // Reference values computed with 30-digit arithmetic.
  const Ref refs[] = {
      {0.001, -1000.5755719318102797, 1000001.6425331958273},
      {0.01, -100.56088545786867242, 10001.621213528312804},
      {0.1, -10.423754940411076232, 101.4332991507927477},
      {0.5, -1.9635100260214234794, 4.9348022005446793094},
      {1.0, -0.57721566490153286061, 1.6449340668482264365},
      {1.5, 0.036489973978576520559, 0.93480220054467930942},
      {2.0, 0.42278433509846713939, 0.64493406684822643647},
      {3.7, 1.1671535393615114409, 0.31003785767003830216},
      {6.0, 1.7061176684318004727, 0.18132295573711532536},
      {10.0, 2.2517525890667211076, 0.10516633568168574612},
      {123.456, 4.8118293238289854123, 0.0081329458342781978071},
      {10000.0, 9.2102903711428494036, 0.00010000500016666666633},
  };
  for (const Ref &r : refs) {
    CHECK(digamma(r.x) == doctest::Approx(r.psi).epsilon(1e-10));
    CHECK(trigamma(r.x) == doctest::Approx(r.psi1).epsilon(1e-10));
  }
}
