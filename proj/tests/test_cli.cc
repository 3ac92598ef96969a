// tests/test_cli.cc

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

// End-to-end checks of the installed command surface. The binary path comes
// from the BIASAUDIT_BIN environment variable (set by CTest).

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "test_util.hpp"

namespace {

std::string binary() {
  const char *bin = std::getenv("BIASAUDIT_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

int run(const std::string &args, const std::filesystem::path &stdout_file = {}) {
  std::string cmd = binary() + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
  cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: synth writes a manifest and sidecar, reruns are byte-identical") {
  testutil::ScratchDir dir("cli_synth");
  const std::string base = "synth --speakers 2 --utts 2 --snr-a 30 --snr-b 0 --seed 7 --out ";
  CHECK(run(base + (dir.path() / "c1").string()) == 0);
  CHECK(run(base + (dir.path() / "c2").string()) == 0);
  CHECK(std::filesystem::exists(dir.path() / "c1/manifest.tsv"));
  CHECK(std::filesystem::exists(dir.path() / "c1/truth.json"));
  CHECK(testutil::read_bytes(dir.path() / "c1/manifest.tsv") ==
        testutil::read_bytes(dir.path() / "c2/manifest.tsv"));
  CHECK(testutil::read_bytes(dir.path() / "c1/truth.json") ==
        testutil::read_bytes(dir.path() / "c2/truth.json"));
  CHECK(testutil::read_bytes(dir.path() / "c1/audio/B01_u001.wav") ==
        testutil::read_bytes(dir.path() / "c2/audio/B01_u001.wav"));
}

TEST_CASE("cli: vad dump is a JSON array with per-span records") {
  testutil::ScratchDir dir("cli_vad");
  run("synth --speakers 1 --utts 2 --seed 3 --out " + (dir.path() / "c").string());
  const auto out = dir.path() / "vad.json";
  CHECK(run("vad --manifest " + (dir.path() / "c/manifest.tsv").string() + " --out " + out.string()) == 0);

  const auto dump = nlohmann::json::parse(slurp(out));
  REQUIRE(dump.is_array());
  REQUIRE(!dump.empty());
  for (const auto &e : dump) {
    CHECK(e.contains("utterance_id"));
    CHECK((e.at("label") == "speech" || e.at("label") == "nonspeech"));
    CHECK(e.at("start_s").get<double>() < e.at("end_s").get<double>());
  }
}

TEST_CASE("cli: snr CSV has one row per utterance") {
  testutil::ScratchDir dir("cli_snr");
  run("synth --speakers 2 --utts 3 --seed 5 --out " + (dir.path() / "c").string());
  const auto out = dir.path() / "snr.csv";
  CHECK(run("snr --manifest " + (dir.path() / "c/manifest.tsv").string() + " --out " + out.string(),
            dir.path() / "summary.txt") == 0);

  std::ifstream csv(out);
  std::string line;
  size_t rows = 0;
  std::getline(csv, line);
  CHECK(line == "utterance_id,speaker_id,group,snr_db,n_noise_frames,n_active_frames");
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);  // 4 speakers x 3 utterances

  const std::string summary = slurp(dir.path() / "summary.txt");
  CHECK(summary.find("group A") != std::string::npos);
  CHECK(summary.find("group B") != std::string::npos);
}

TEST_CASE("cli: silence-only corpus reports the -20 dB clamp everywhere") {
  testutil::ScratchDir dir("cli_silence");
  // Hand-built corpus of digital-silence files.
  std::string manifest;
  for (const char *spk : {"a", "b"}) {
    for (int u = 0; u < 2; ++u) {
      const std::string name = std::string(spk) + "_u" + std::to_string(u) + ".wav";
      std::string bytes;
      auto u32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
      };
      auto u16 = [&](uint16_t v) {
        bytes.push_back(static_cast<char>(v & 0xff));
        bytes.push_back(static_cast<char>((v >> 8) & 0xff));
      };
      const uint32_t data = 32000 * 2;
      bytes.append("RIFF"); u32(36 + data); bytes.append("WAVEfmt ");
      u32(16); u16(1); u16(1); u32(16000); u32(32000); u16(2); u16(16);
      bytes.append("data"); u32(data);
      bytes.append(data, '\0');
      std::ofstream(dir.path() / name, std::ios::binary) << bytes;
      manifest += std::string(spk) + "\t" + (spk[0] == 'a' ? "A" : "B") + "\t" + name + "\n";
    }
  }
  std::ofstream(dir.path() / "m.tsv") << manifest;

  const auto out = dir.path() / "snr.csv";
  CHECK(run("snr --manifest " + (dir.path() / "m.tsv").string() + " --out " + out.string()) == 0);
  std::ifstream csv(out);
  std::string line;
  std::getline(csv, line);  // header
  size_t rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.find(",-20,") != std::string::npos);
  }
  CHECK(rows == 4);
}

TEST_CASE("cli: features CSV carries the documented header") {
  testutil::ScratchDir dir("cli_feat");
  run("synth --speakers 1 --utts 2 --seed 9 --out " + (dir.path() / "c").string());
  const auto out = dir.path() / "features.csv";
  CHECK(run("features --manifest " + (dir.path() / "c/manifest.tsv").string() +
            " --kind mfcc_stats --condition combined --out " + out.string()) == 0);

  std::ifstream csv(out);
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("source_id,speaker_id,kind,v0,v1,", 0) == 0);
  CHECK(header.find(",v47") != std::string::npos);
  size_t rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("cli: audit exits 2 on planted bias and 0 on the in-speech-cue control") {
  testutil::ScratchDir dir("cli_audit");
  run("synth --speakers 6 --utts 10 --snr-a 30 --snr-b 0 --seed 11 --out " +
      (dir.path() / "biased").string());
  run("synth --speakers 6 --utts 10 --snr-a 30 --snr-b 30 --tilt-b 3 --seed 11 --out " +
      (dir.path() / "cue").string());

  const std::string common = " --approaches svm_mfcc --conditions speech,nonspeech --out-dir ";
  CHECK(run("audit --manifest " + (dir.path() / "biased/manifest.tsv").string() + common +
            (dir.path() / "out_biased").string() + " --name biased") == 2);
  CHECK(run("audit --manifest " + (dir.path() / "cue/manifest.tsv").string() + common +
            (dir.path() / "out_cue").string() + " --name cue") == 0);

  CHECK(std::filesystem::exists(dir.path() / "out_biased/biased.audit.json"));
  CHECK(std::filesystem::exists(dir.path() / "out_biased/biased.audit.txt"));

  const auto report = nlohmann::json::parse(slurp(dir.path() / "out_biased/biased.audit.json"));
  CHECK(report.at("flags").at("environment_bias").get<bool>());
  const auto control = nlohmann::json::parse(slurp(dir.path() / "out_cue/cue.audit.json"));
  CHECK(!control.at("flags").at("environment_bias").get<bool>());
  CHECK(!control.at("flags").at("snr_gap").get<bool>());

  // Idempotence: rerunning the audit reproduces the report bytes, including
  // under a different AUDIT_THREADS cap.
  const auto first = testutil::read_bytes(dir.path() / "out_biased/biased.audit.json");
  const int rerun = std::system(("AUDIT_THREADS=3 " + binary() + " audit --manifest " +
                                 (dir.path() / "biased/manifest.tsv").string() + common +
                                 (dir.path() / "out_biased").string() +
                                 " --name biased > /dev/null 2>&1")
                                    .c_str());
  CHECK(WEXITSTATUS(rerun) == 2);
  CHECK(testutil::read_bytes(dir.path() / "out_biased/biased.audit.json") == first);
}

TEST_CASE("cli: audit honors a config file with --set overrides") {
  testutil::ScratchDir dir("cli_config");
  run("synth --speakers 2 --utts 3 --snr-a 30 --snr-b 0 --seed 13 --out " +
      (dir.path() / "c").string());
  std::ofstream(dir.path() / "audit.conf")
      << "manifest = " << (dir.path() / "c/manifest.tsv").string() << "\n"
      << "out_dir = " << (dir.path() / "out").string() << "\n"
      << "name = cfg\n"
      << "approaches = svm_mfcc\n"
      << "conditions = speech,nonspeech\n";
  CHECK(run("audit --config " + (dir.path() / "audit.conf").string() + " --set seeds=17") == 2);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "out/cfg.audit.json"));
  CHECK(report.at("config").at("seeds").size() == 1);

  // Unknown keys fail loudly.
  CHECK(run("audit --config " + (dir.path() / "audit.conf").string() + " --set nope=1") == 1);
}

TEST_CASE("cli: --help lists every flag with its default") {
  testutil::ScratchDir dir("cli_help");
  const auto out = dir.path() / "help.txt";
  CHECK(run("synth --help", out) == 0);
  const std::string help = slurp(out);
  for (const char *flag : {"--speakers", "--utts", "--snr-a", "--snr-b", "--tilt-b",
                           "--speech-dur", "--lead", "--trail", "--color", "--seed", "--out"})
    CHECK(help.find(flag) != std::string::npos);
  CHECK(help.find("30") != std::string::npos);   // snr-a default
  CHECK(help.find("1.4") != std::string::npos);  // speech duration default

  CHECK(run("vad --help", out) == 0);
  const std::string vad_help = slurp(out);
  CHECK(vad_help.find("--vad-threshold-db") != std::string::npos);
  CHECK(vad_help.find("6") != std::string::npos);
}
