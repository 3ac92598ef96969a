// core/src/segmentation.cc

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

#include "biasaudit/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biasaudit/dsp.hpp"
#include "biasaudit/error.hpp"

namespace biasaudit {

namespace {

constexpr size_t kWin = 512;  // 32 ms at 16 kHz
constexpr size_t kHop = 256;  // 16 ms
constexpr double kPowerFloor = 1e-30;
constexpr double kSnrClampLo = -20.0;
constexpr double kSnrClampHi = 60.0;
// Active-frame threshold for the SNR estimator: 1 dB over the noise floor.
const double kActiveOverFloor = std::pow(10.0, 0.1);

std::vector<double> frame_powers(const std::vector<double> &x) {
  const size_t n_frames = x.size() < kWin ? 0 : (x.size() - kWin) / kHop + 1;
  std::vector<double> p(n_frames);
  for (size_t f = 0; f < n_frames; ++f) {
    double acc = 0.0;
    const double *s = &x[f * kHop];
    for (size_t i = 0; i < kWin; ++i) acc += s[i] * s[i];
    p[f] = acc / static_cast<double>(kWin);
  }
  return p;
}

size_t to_sample(double seconds) {
  return static_cast<size_t>(std::llround(seconds * kSampleRate));
}

}  // namespace

std::vector<SegmentSpan> detect_segments(const Utterance &utt, const VadOptions &opts) {
  const size_t n = utt.samples.size();
  if (n < 2 * kWin) throw SignalTooShortError("utterance shorter than 64 ms");

  const std::vector<double> powers = frame_powers(utt.samples);
  const size_t n_frames = powers.size();

  std::vector<double> db(n_frames);
  for (size_t i = 0; i < n_frames; ++i)
    db[i] = 10.0 * std::log10(std::max(powers[i], kPowerFloor));

  // Noise floor: mean dB of the lowest decile of frames.
  std::vector<double> sorted_db(db);
  std::sort(sorted_db.begin(), sorted_db.end());
  const size_t decile = std::max<size_t>(1, n_frames / 10);
  const double floor_db =
      std::accumulate(sorted_db.begin(), sorted_db.begin() + static_cast<ptrdiff_t>(decile), 0.0) /
      static_cast<double>(decile);

  std::vector<char> active(n_frames);
  for (size_t i = 0; i < n_frames; ++i)
    active[i] = db[i] > floor_db + opts.threshold_db_over_floor ? 1 : 0;

  // Median smoothing over 5 frames, edges replicated.
  std::vector<char> smooth(n_frames);
  for (size_t i = 0; i < n_frames; ++i) {
    int votes = 0;
    for (int d = -2; d <= 2; ++d) {
      ptrdiff_t j = static_cast<ptrdiff_t>(i) + d;
      j = std::clamp<ptrdiff_t>(j, 0, static_cast<ptrdiff_t>(n_frames) - 1);
      votes += active[static_cast<size_t>(j)];
    }
    smooth[i] = votes >= 3 ? 1 : 0;
  }
  active.swap(smooth);

  // Hangover: extend every active run's tail.
  if (opts.hangover_frames > 0) {
    std::vector<char> extended(active);
    for (size_t i = 0; i < n_frames; ++i) {
      if (active[i] && (i + 1 == n_frames || !active[i + 1])) {
        for (int d = 1; d <= opts.hangover_frames && i + static_cast<size_t>(d) < n_frames; ++d)
          extended[i + static_cast<size_t>(d)] = 1;
      }
    }
    active.swap(extended);
  }

  // Drop short active runs, then merge short gaps.
  const double hop_ms = 1000.0 * kHop / kSampleRate;
  {
    size_t i = 0;
    while (i < n_frames) {
      if (!active[i]) { ++i; continue; }
      size_t j = i;
      while (j < n_frames && active[j]) ++j;
      if (static_cast<double>(j - i) * hop_ms < opts.min_speech_ms)
        std::fill(active.begin() + static_cast<ptrdiff_t>(i), active.begin() + static_cast<ptrdiff_t>(j), 0);
      i = j;
    }
  }
  {
    size_t i = 0;
    while (i < n_frames) {
      if (active[i]) { ++i; continue; }
      size_t j = i;
      while (j < n_frames && !active[j]) ++j;
      const bool interior = i > 0 && j < n_frames;
      if (interior && static_cast<double>(j - i) * hop_ms < opts.max_gap_ms)
        std::fill(active.begin() + static_cast<ptrdiff_t>(i), active.begin() + static_cast<ptrdiff_t>(j), 1);
      i = j;
    }
  }

  // Frame i owns [i*hop, (i+1)*hop); the last frame owns through the end.
  std::vector<SegmentSpan> spans;
  size_t i = 0;
  while (i < n_frames) {
    size_t j = i;
    while (j < n_frames && active[j] == active[i]) ++j;
    SegmentSpan span;
    span.label = active[i] ? SegmentLabel::speech : SegmentLabel::nonspeech;
    span.start_s = static_cast<double>(i * kHop) / kSampleRate;
    span.end_s = j == n_frames ? static_cast<double>(n) / kSampleRate
                               : static_cast<double>(j * kHop) / kSampleRate;
    spans.push_back(span);
    i = j;
  }
  if (spans.empty()) {
    spans.push_back({SegmentLabel::nonspeech, 0.0, static_cast<double>(n) / kSampleRate});
  }
  return spans;
}

std::pair<std::vector<double>, std::vector<double>> split_utterance(
    const Utterance &utt, const std::vector<SegmentSpan> &spans) {
  const size_t n = utt.samples.size();
  std::vector<double> speech, nonspeech;
  size_t prev_end = 0;
  for (const SegmentSpan &span : spans) {
    const size_t a = to_sample(span.start_s);
    const size_t b = to_sample(span.end_s);
    if (a >= b || b > n) throw InvalidArgumentError("segment span outside utterance bounds");
    if (a < prev_end) throw InvalidArgumentError("segment spans overlap or are unordered");
    prev_end = b;
    auto &dst = span.label == SegmentLabel::speech ? speech : nonspeech;
    dst.insert(dst.end(), utt.samples.begin() + static_cast<ptrdiff_t>(a),
               utt.samples.begin() + static_cast<ptrdiff_t>(b));
  }
  return {std::move(speech), std::move(nonspeech)};
}

SnrEstimate estimate_utterance_snr(const Utterance &utt) {
  const size_t n = utt.samples.size();
  if (n < 2 * kWin) throw SignalTooShortError("utterance shorter than 64 ms");

  std::vector<double> powers = frame_powers(utt.samples);
  const size_t n_frames = powers.size();

  std::vector<double> sorted(powers);
  std::sort(sorted.begin(), sorted.end());
  const size_t quintile = std::max<size_t>(1, n_frames / 5);
  const double p_noise =
      std::accumulate(sorted.begin(), sorted.begin() + static_cast<ptrdiff_t>(quintile), 0.0) /
      static_cast<double>(quintile);

  const double active_threshold = p_noise > 0.0 ? p_noise * kActiveOverFloor : 0.0;
  double p_active = 0.0;
  size_t n_active = 0;
  for (double p : powers) {
    if (p > active_threshold) {
      p_active += p;
      ++n_active;
    }
  }

  SnrEstimate est;
  est.n_noise_frames = quintile;
  est.n_active_frames = n_active;
  if (n_active == 0) {
    est.snr_db = kSnrClampLo;
    return est;
  }
  p_active /= static_cast<double>(n_active);

  double snr_db;
  if (p_noise <= 0.0) {
    snr_db = kSnrClampHi;  // active material over a digital-silence floor
  } else {
    snr_db = 10.0 * std::log10(std::max(p_active - p_noise, 1e-12) / p_noise);
  }
  est.snr_db = std::clamp(snr_db, kSnrClampLo, kSnrClampHi);
  return est;
}

}  // namespace biasaudit
