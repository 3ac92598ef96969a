// core/include/biasaudit/synth.hpp

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

// Synthetic two-group corpora with planted, ground-truth bias. Each utterance
// is leading silence + an amplitude-modulated harmonic "vowel" + trailing
// silence, with group-colored noise mixed over the whole file at the group's
// SNR (defined over the speech region). Group B's harmonics can additionally
// be tilted in dB/octave as an in-speech cue. Generation is a pure function
// of (spec, out_dir): same seed, same bytes.

#ifndef BIASAUDIT_SYNTH_HPP_
#define BIASAUDIT_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "biasaudit/manifest.hpp"

namespace biasaudit {

enum class NoiseColor { white, pink };

struct SynthSpec {
  int speakers_per_group = 10;
  int utterances_per_speaker = 40;
  double snr_db_group_a = 30.0;
  double snr_db_group_b = 0.0;
  double tilt_db_per_octave_group_b = 0.0;  // 0 = no in-speech cue
  double speech_duration_s = 1.4;
  double leading_silence_s = 0.4;
  double trailing_silence_s = 0.4;
  NoiseColor noise_color = NoiseColor::white;
  uint64_t seed = 1;
};

struct TruthRecord {
  std::string utterance_id;
  std::string speaker_id;
  Group group = Group::A;
  double true_snr_db = 0.0;
  double speech_start_s = 0.0;
  double speech_end_s = 0.0;
};

struct SynthResult {
  std::filesystem::path manifest_path;
  std::filesystem::path sidecar_path;
};

// Pre-mix components of one utterance, exposed so tests can check the
// planted power ratio directly.
struct UtteranceComponents {
  std::vector<double> clean;  // silence + scaled harmonic signal + silence
  std::vector<double> noise;  // scaled to the group SNR, whole file
  std::vector<double> mixed;  // clean + noise, safety-rescaled if near full scale
  size_t speech_start = 0;    // samples
  size_t speech_len = 0;      // samples
  double f0_hz = 0.0;
};

// Speaker fundamental: hash of (seed, speaker index) mapped into [90, 250) Hz.
double speaker_f0_hz(uint64_t seed, int speaker_index);

UtteranceComponents render_utterance(const SynthSpec &spec, int speaker_index,
                                     Group group, int utterance_index);

// Writes audio/*.wav, manifest.tsv and truth.json under out_dir.
// Throws InvalidArgumentError on spec violations and IoError on write failure.
SynthResult generate_synthetic_corpus(const SynthSpec &spec,
                                      const std::filesystem::path &out_dir);

std::vector<TruthRecord> load_truth_sidecar(const std::filesystem::path &path);

}  // namespace biasaudit

#endif  // BIASAUDIT_SYNTH_HPP_
