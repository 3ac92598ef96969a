// core/include/biasaudit/segmentation.hpp

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

// Energy-based speech/non-speech segmentation and utterance-level SNR
// estimation. Both work on 32 ms frames with a 16 ms hop; partial frames at
// the utterance edge are dropped, not zero-padded.

#ifndef BIASAUDIT_SEGMENTATION_HPP_
#define BIASAUDIT_SEGMENTATION_HPP_

#include <utility>
#include <vector>

#include "biasaudit/wav.hpp"

namespace biasaudit {

enum class SegmentLabel { speech, nonspeech };

struct SegmentSpan {
  SegmentLabel label = SegmentLabel::nonspeech;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct VadOptions {
  double threshold_db_over_floor = 6.0;
  double min_speech_ms = 100.0;
  double max_gap_ms = 50.0;
  int hangover_frames = 1;
};

struct SnrEstimate {
  double snr_db = 0.0;  // clamped to [-20, 60]
  size_t n_noise_frames = 0;
  size_t n_active_frames = 0;
};

// Frame powers in dB; noise floor = mean dB of the lowest decile of frames;
// frames above floor + threshold are active, median-smoothed over 5 frames;
// hangover extends active runs; runs shorter than min_speech_ms are dropped,
// then gaps shorter than max_gap_ms merged. The returned spans tile
// [0, duration] with alternating labels. Throws SignalTooShortError for
// utterances under 64 ms.
std::vector<SegmentSpan> detect_segments(const Utterance &utt, const VadOptions &opts = {});

// Concatenates span samples per label, in time order. The two outputs'
// lengths sum to the utterance length for tiling spans.
std::pair<std::vector<double>, std::vector<double>> split_utterance(
    const Utterance &utt, const std::vector<SegmentSpan> &spans);

// Percentile noise-floor estimator: P_n = mean power of the lowest-quintile
// frames, active frames are those more than 1 dB above P_n,
// snr = 10*log10(max(P_a - P_n, 1e-12) / P_n), clamped to [-20, 60].
// All-zero input returns the clamp minimum with n_active_frames = 0.
SnrEstimate estimate_utterance_snr(const Utterance &utt);

}  // namespace biasaudit

#endif  // BIASAUDIT_SEGMENTATION_HPP_
