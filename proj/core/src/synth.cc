// core/src/synth.cc

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

#include "biasaudit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "biasaudit/dsp.hpp"
#include "biasaudit/error.hpp"
#include "biasaudit/rng.hpp"
#include "biasaudit/wav.hpp"

namespace biasaudit {

namespace {

using json = nlohmann::ordered_json;

// Target mean speech power over the speech region (rms 0.05). Leaves
// headroom for noise down to 0 dB SNR without clipping; a final safety
// rescale (common gain, SNR-preserving) covers more extreme settings.
constexpr double kSpeechPower = 0.0025;

// Syllabic amplitude envelope, one 700 ms cycle:
// plateau (strong), mid (near the speech mean), floor (weak), with 20 ms
// cosine blends. At high SNR the whole cycle is VAD-active; at low SNR only
// the plateau crosses the threshold, so mid/floor material stays in the
// non-speech segments and carries the harmonic residue.
constexpr double kCycleS = 0.700;
constexpr double kAmpPlateau = 2.3;
constexpr double kAmpMid = 0.8366600265340756;   // sqrt(0.7)
constexpr double kAmpFloor = 0.27928480087537886;  // sqrt(0.078)

double blend(double a, double b, double x) {
  return a + (b - a) * 0.5 * (1.0 - std::cos(std::numbers::pi * x));
}

double envelope(double t) {
  double tau = std::fmod(t, kCycleS);
  if (tau < 0) tau += kCycleS;
  if (tau < 0.130) return kAmpPlateau;
  if (tau < 0.150) return blend(kAmpPlateau, kAmpMid, (tau - 0.130) / 0.020);
  if (tau < 0.380) return kAmpMid;
  if (tau < 0.400) return blend(kAmpMid, kAmpFloor, (tau - 0.380) / 0.020);
  if (tau < 0.680) return kAmpFloor;
  return blend(kAmpFloor, kAmpPlateau, (tau - 0.680) / 0.020);
}

size_t to_samples(double seconds) {
  return static_cast<size_t>(std::llround(seconds * kSampleRate));
}

std::vector<double> make_white_noise(Rng &rng, size_t n) {
  std::vector<double> out(n);
  for (auto &v : out) v = rng.gaussian();
  return out;
}

// -3 dB/octave power shaping of white noise via frequency-domain filtering.
std::vector<double> make_pink_noise(Rng &rng, size_t n) {
  const size_t m = next_pow2(std::max<size_t>(n, 2));
  std::vector<std::complex<double>> buf(m);
  for (auto &v : buf) v = std::complex<double>(rng.gaussian(), 0.0);
  fft_radix2(buf);
  buf[0] = 0.0;  // no DC
  for (size_t k = 1; k <= m / 2; ++k) {
    const double f = static_cast<double>(k) * kSampleRate / static_cast<double>(m);
    const double g = 1.0 / std::sqrt(f);
    buf[k] *= g;
    if (k != m - k) buf[m - k] *= g;  // keep conjugate symmetry
  }
  // Inverse transform via conjugation.
  for (auto &v : buf) v = std::conj(v);
  fft_radix2(buf);
  std::vector<double> out(n);
  const double inv = 1.0 / static_cast<double>(m);
  for (size_t i = 0; i < n; ++i) out[i] = buf[i].real() * inv;
  return out;
}

double mean_power(const std::vector<double> &x, size_t begin, size_t len) {
  double acc = 0.0;
  for (size_t i = begin; i < begin + len; ++i) acc += x[i] * x[i];
  return acc / static_cast<double>(len);
}

void validate(const SynthSpec &spec) {
  if (spec.speakers_per_group < 1 || spec.utterances_per_speaker < 1)
    throw InvalidArgumentError("synth spec: counts must be >= 1");
  if (!(spec.speech_duration_s > 0.0) || !(spec.leading_silence_s > 0.0) ||
      !(spec.trailing_silence_s > 0.0))
    throw InvalidArgumentError("synth spec: durations must be > 0");
  if (!std::isfinite(spec.snr_db_group_a) || !std::isfinite(spec.snr_db_group_b) ||
      !std::isfinite(spec.tilt_db_per_octave_group_b))
    throw InvalidArgumentError("synth spec: SNR/tilt must be finite");
}

std::string speaker_name(Group g, int idx) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%02d", g == Group::A ? "A" : "B", idx);
  return buf;
}

std::string utterance_name(const std::string &speaker, int utt) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_u%03d", utt);
  return speaker + buf;
}

}  // namespace

double speaker_f0_hz(uint64_t seed, int speaker_index) {
  const uint64_t h = mix_seed(seed, 0x5eedf00dULL, static_cast<uint64_t>(speaker_index));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 90.0 + u * (250.0 - 90.0);
}

UtteranceComponents render_utterance(const SynthSpec &spec, int speaker_index,
                                     Group group, int utterance_index) {
  validate(spec);
  const size_t lead = to_samples(spec.leading_silence_s);
  const size_t speech = to_samples(spec.speech_duration_s);
  const size_t trail = to_samples(spec.trailing_silence_s);
  const size_t total = lead + speech + trail;
  const double snr_db = group == Group::A ? spec.snr_db_group_a : spec.snr_db_group_b;
  const double tilt = group == Group::B ? spec.tilt_db_per_octave_group_b : 0.0;

  UtteranceComponents out;
  out.speech_start = lead;
  out.speech_len = speech;
  out.f0_hz = speaker_f0_hz(spec.seed, speaker_index);

  Rng rng(mix_seed(spec.seed, static_cast<uint64_t>(speaker_index),
                   static_cast<uint64_t>(utterance_index)));

  // Harmonic stack spanning [f0, 6 kHz] for every speaker (fixed top so the
  // spectral extent does not vary with f0), -6 dB/octave rolloff plus the
  // group tilt.
  const int n_harm = std::max(1, static_cast<int>(6000.0 / out.f0_hz));
  std::vector<double> amp(static_cast<size_t>(n_harm));
  std::vector<double> phase(static_cast<size_t>(n_harm));
  for (int h = 1; h <= n_harm; ++h) {
    const double octaves = std::log2(static_cast<double>(h));
    amp[h - 1] = (1.0 / h) * std::pow(10.0, tilt * octaves / 20.0);
    phase[h - 1] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  out.clean.assign(total, 0.0);
  for (size_t i = 0; i < speech; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    double s = 0.0;
    for (int h = 1; h <= n_harm; ++h) {
      s += amp[h - 1] * std::sin(2.0 * std::numbers::pi * out.f0_hz * h * t + phase[h - 1]);
    }
    out.clean[lead + i] = envelope(t) * s;
  }
  const double p_raw = mean_power(out.clean, lead, speech);
  const double speech_gain = std::sqrt(kSpeechPower / std::max(p_raw, 1e-30));
  for (size_t i = lead; i < lead + speech; ++i) out.clean[i] *= speech_gain;

  out.noise = spec.noise_color == NoiseColor::white ? make_white_noise(rng, total)
                                                    : make_pink_noise(rng, total);
  const double p_noise_raw = mean_power(out.noise, lead, speech);
  const double noise_gain =
      std::sqrt(kSpeechPower / (std::max(p_noise_raw, 1e-30) * std::pow(10.0, snr_db / 10.0)));
  for (auto &v : out.noise) v *= noise_gain;

  out.mixed.resize(total);
  double peak = 0.0;
  for (size_t i = 0; i < total; ++i) {
    out.mixed[i] = out.clean[i] + out.noise[i];
    peak = std::max(peak, std::abs(out.mixed[i]));
  }
  if (peak > 0.99) {
    // Common gain preserves the planted SNR.
    const double g = 0.99 / peak;
    for (size_t i = 0; i < total; ++i) {
      out.mixed[i] *= g;
      out.clean[i] *= g;
      out.noise[i] *= g;
    }
  }
  return out;
}

SynthResult generate_synthetic_corpus(const SynthSpec &spec,
                                      const std::filesystem::path &out_dir) {
  validate(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "audio", ec);
  if (ec) throw IoError("cannot create output directory: " + (out_dir / "audio").string());

  std::string manifest_text;
  json sidecar = json::array();

  const int per_group = spec.speakers_per_group;
  for (int s = 0; s < 2 * per_group; ++s) {
    const Group group = s < per_group ? Group::A : Group::B;
    const int within = s < per_group ? s : s - per_group;
    const std::string speaker = speaker_name(group, within);
    const double snr_db = group == Group::A ? spec.snr_db_group_a : spec.snr_db_group_b;

    for (int u = 0; u < spec.utterances_per_speaker; ++u) {
      const std::string utt_id = utterance_name(speaker, u);
      const std::string rel = "audio/" + utt_id + ".wav";
      UtteranceComponents comp = render_utterance(spec, s, group, u);
      write_wav(out_dir / rel, comp.mixed);

      manifest_text += speaker;
      manifest_text += '\t';
      manifest_text += group_token(group);
      manifest_text += '\t';
      manifest_text += rel;
      manifest_text += '\n';

      sidecar.push_back({
          {"utterance_id", utt_id},
          {"speaker_id", speaker},
          {"group", group_token(group)},
          {"true_snr_db", snr_db},
          {"speech_start_s", static_cast<double>(comp.speech_start) / kSampleRate},
          {"speech_end_s",
           static_cast<double>(comp.speech_start + comp.speech_len) / kSampleRate},
      });
    }
  }

  SynthResult result;
  result.manifest_path = out_dir / "manifest.tsv";
  result.sidecar_path = out_dir / "truth.json";

  {
    std::ofstream mf(result.manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) throw IoError("cannot write manifest: " + result.manifest_path.string());
    mf << "# speaker_id\tgroup\tpath\n" << manifest_text;
  }
  {
    std::ofstream sf(result.sidecar_path, std::ios::binary | std::ios::trunc);
    if (!sf) throw IoError("cannot write sidecar: " + result.sidecar_path.string());
    sf << sidecar.dump(2) << '\n';
  }
  return result;
}

std::vector<TruthRecord> load_truth_sidecar(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open sidecar: " + path.string());
  json j;
  in >> j;
  std::vector<TruthRecord> out;
  for (const auto &e : j) {
    TruthRecord r;
    r.utterance_id = e.at("utterance_id").get<std::string>();
    r.speaker_id = e.at("speaker_id").get<std::string>();
    r.group = e.at("group").get<std::string>() == "A" ? Group::A : Group::B;
    r.true_snr_db = e.at("true_snr_db").get<double>();
    r.speech_start_s = e.at("speech_start_s").get<double>();
    r.speech_end_s = e.at("speech_end_s").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace biasaudit
