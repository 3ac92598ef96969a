// core/src/wav.cc

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

#include "biasaudit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "biasaudit/error.hpp"

namespace biasaudit {

namespace {

constexpr int kRate = 16000;

uint32_t read_u32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string &s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string &s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Utterance read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("cannot open wav file: " + path.string());

  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavFormatError("not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char *id = reinterpret_cast<const char *>(&bytes[pos]);
    const uint32_t size = read_u32(&bytes[pos + 4]);
    const size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (body + 16 > bytes.size()) throw WavFormatError("truncated fmt chunk: " + path.string());
      format = read_u16(&bytes[body]);
      channels = read_u16(&bytes[body + 2]);
      rate = read_u32(&bytes[body + 4]);
      bits = read_u16(&bytes[body + 14]);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_size = size;
      break;  // fmt precedes data in every writer we accept
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) throw WavFormatError("missing fmt/data chunk: " + path.string());
  if (format != 1) throw WavFormatError("not PCM data: " + path.string());
  if (channels != 1) throw WrongChannelCountError("expected mono, got " + std::to_string(channels) + " channels: " + path.string());
  if (rate != kRate) throw WrongSampleRateError("expected 16000 Hz, got " + std::to_string(rate) + " Hz: " + path.string());
  if (bits != 16) throw WrongBitDepthError("expected 16-bit PCM, got " + std::to_string(bits) + " bits: " + path.string());
  if (data_off + data_size > bytes.size())
    throw TruncatedWavError("data chunk shorter than declared: " + path.string());
  if (data_size % 2 != 0) throw TruncatedWavError("odd PCM16 payload size: " + path.string());
  if (data_size == 0) throw WavFormatError("empty sample payload: " + path.string());

  const size_t n = data_size / 2;
  Utterance utt;
  utt.utterance_id = path.stem().string();
  utt.sample_rate = kRate;
  utt.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int16_t s = static_cast<int16_t>(bytes[data_off + 2 * i] |
                                           (bytes[data_off + 2 * i + 1] << 8));
    utt.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return utt;
}

void write_wav(const std::filesystem::path &path, const std::vector<double> &samples) {
  const uint32_t data_size = static_cast<uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  put_u32(out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, kRate);
  put_u32(out, kRate * 2);  // byte rate
  put_u16(out, 2);          // block align
  put_u16(out, 16);         // bits
  out.append("data");
  put_u32(out, data_size);
  for (double x : samples) {
    long v = std::lround(x * 32768.0);
    v = std::clamp(v, -32768L, 32767L);
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write: " + path.string());
}

}  // namespace biasaudit
