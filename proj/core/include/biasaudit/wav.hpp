// core/include/biasaudit/wav.hpp

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

#ifndef BIASAUDIT_WAV_HPP_
#define BIASAUDIT_WAV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace biasaudit {

// One mono recording. Only 16 kHz / PCM16 / mono input is accepted; there is
// deliberately no resampling path.
struct Utterance {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<double> samples;  // in [-1, 1], scaled by 1/32768
  int sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF WAV file (PCM 16-bit little-endian, mono, 16000 Hz).
// Throws WrongSampleRateError / WrongChannelCountError / WrongBitDepthError /
// TruncatedWavError / WavFormatError / FileNotFoundError.
Utterance read_wav(const std::filesystem::path &path);

// Writes samples as PCM16 mono 16 kHz; values are quantized with
// llround(x * 32768) and clamped to [-32768, 32767]. Output bytes are a pure
// function of the sample payload.
void write_wav(const std::filesystem::path &path, const std::vector<double> &samples);

}  // namespace biasaudit

#endif  // BIASAUDIT_WAV_HPP_
