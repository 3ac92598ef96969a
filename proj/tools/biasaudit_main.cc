// tools/biasaudit_main.cc

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

// Command-line entry point: `synth`, `vad`, `snr`, `features`, `audit`.
// `audit` exits 0 on success, 2 when the environment_bias flag is raised
// (scriptable), 1 on error. AUDIT_THREADS caps parallelism (0 = auto).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biasaudit/audit.hpp"
#include "biasaudit/error.hpp"
#include "biasaudit/features.hpp"
#include "biasaudit/synth.hpp"

namespace {

using biasaudit::AuditConfig;
using biasaudit::Condition;
using biasaudit::EvalCorpus;
using biasaudit::Group;
using biasaudit::SegmentLabel;
using biasaudit::Utterance;
using biasaudit::VadOptions;

int resolve_threads(int configured) {
  int effective = configured > 0
                      ? configured
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *env = std::getenv("AUDIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) effective = std::min(effective, cap);
  }
  return effective;
}

void add_vad_flags(CLI::App *cmd, VadOptions *vad) {
  cmd->add_option("--vad-threshold-db", vad->threshold_db_over_floor,
                  "VAD activity threshold in dB over the noise floor")
      ->capture_default_str();
  cmd->add_option("--vad-min-speech-ms", vad->min_speech_ms, "Drop speech runs shorter than this")
      ->capture_default_str();
  cmd->add_option("--vad-max-gap-ms", vad->max_gap_ms, "Merge non-speech gaps shorter than this")
      ->capture_default_str();
  cmd->add_option("--vad-hangover-frames", vad->hangover_frames,
                  "Frames appended to each detected speech run")
      ->capture_default_str();
}

std::ostream *open_or_stdout(const std::string &path, std::ofstream *file) {
  if (path.empty()) return &std::cout;
  file->open(path, std::ios::binary | std::ios::trunc);
  if (!*file) throw biasaudit::IoError("cannot open output file: " + path);
  return file;
}

int cmd_synth(const biasaudit::SynthSpec &spec, const std::string &out_dir) {
  const auto result = biasaudit::generate_synthetic_corpus(spec, out_dir);
  std::cout << "manifest: " << result.manifest_path.string() << "\n";
  std::cout << "sidecar:  " << result.sidecar_path.string() << "\n";
  return 0;
}

int cmd_vad(const std::string &manifest, const VadOptions &vad, const std::string &out_path) {
  const EvalCorpus corpus = biasaudit::load_eval_corpus(manifest);
  nlohmann::ordered_json dump = nlohmann::ordered_json::array();
  for (const auto &item : corpus.items) {
    const Utterance utt = biasaudit::read_wav(item.path);
    for (const auto &span : biasaudit::detect_segments(utt, vad)) {
      dump.push_back({{"utterance_id", item.utterance_id},
                      {"label", span.label == SegmentLabel::speech ? "speech" : "nonspeech"},
                      {"start_s", span.start_s},
                      {"end_s", span.end_s}});
    }
  }
  std::ofstream file;
  *open_or_stdout(out_path, &file) << dump.dump(2) << "\n";
  return 0;
}

int cmd_snr(const std::string &manifest, const std::string &out_path) {
  const EvalCorpus corpus = biasaudit::load_eval_corpus(manifest);
  std::ofstream file;
  std::ostream &csv = *open_or_stdout(out_path, &file);
  csv << "utterance_id,speaker_id,group,snr_db,n_noise_frames,n_active_frames\n";
  for (const auto &item : corpus.items) {
    const Utterance utt = biasaudit::read_wav(item.path);
    const auto est = biasaudit::estimate_utterance_snr(utt);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", est.snr_db);
    csv << item.utterance_id << ',' << item.speaker_id << ','
        << biasaudit::group_token(item.group) << ',' << buf << ',' << est.n_noise_frames << ','
        << est.n_active_frames << "\n";
  }
  const auto [a, b] = biasaudit::group_snr_stats(corpus);
  std::printf("group A (control): %.1f ± %.1f dB  (n=%zu)\n", a.mean_db, a.std_db, a.n);
  std::printf("group B (target):  %.1f ± %.1f dB  (n=%zu)\n", b.mean_db, b.std_db, b.n);
  return 0;
}

int cmd_features(const std::string &manifest, const std::string &kind_name,
                 const std::string &condition_name_arg, const VadOptions &vad,
                 const std::string &out_path) {
  const EvalCorpus corpus = biasaudit::load_eval_corpus(manifest);
  const auto condition = biasaudit::parse_condition(condition_name_arg);
  if (!condition) throw biasaudit::InvalidArgumentError("unknown condition: " + condition_name_arg);

  biasaudit::FeaturePlan plan;
  if (kind_name == "mfcc_stats") plan.mfcc = true;
  else if (kind_name == "sparsity") plan.sparsity = true;
  else if (kind_name == "mel_pooled") plan.mel_pooled = true;
  else throw biasaudit::InvalidArgumentError("unknown feature kind: " + kind_name);

  const auto features =
      biasaudit::extract_condition_features(corpus, {*condition}, plan, vad, &std::cerr);
  const auto &table = features.at(*condition);

  std::ofstream file;
  std::ostream &csv = *open_or_stdout(out_path, &file);
  csv << "source_id,speaker_id,kind";
  size_t dim = 0;
  for (const auto &f : table.per_item) {
    const auto &v = plan.mfcc ? f.mfcc : plan.sparsity ? f.sparsity : f.mel_pooled;
    if (!v.empty()) { dim = v.size(); break; }
  }
  for (size_t i = 0; i < dim; ++i) csv << ",v" << i;
  csv << "\n";
  for (size_t i = 0; i < corpus.items.size(); ++i) {
    const auto &f = table.per_item[i];
    const auto &v = plan.mfcc ? f.mfcc : plan.sparsity ? f.sparsity : f.mel_pooled;
    if (v.empty()) continue;
    csv << corpus.items[i].utterance_id << ',' << corpus.items[i].speaker_id << ',' << kind_name;
    char buf[64];
    for (double x : v) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      csv << ',' << buf;
    }
    csv << "\n";
  }
  return 0;
}

int cmd_audit(AuditConfig config) {
  config.protocol.threads = resolve_threads(config.protocol.threads);
  const biasaudit::AuditReport report = biasaudit::run_audit(config, &std::cerr);
  const auto paths = biasaudit::write_report(report);
  std::cout << biasaudit::render_report_text(report);
  std::cout << "\nreport: " << paths.json_path.string() << "\n";
  std::cout << "report: " << paths.text_path.string() << "\n";
  return report.flags.environment_bias ? 2 : 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Two-group speech corpus bias auditor"};
  app.require_subcommand(1);

  // synth
  auto *synth = app.add_subcommand("synth", "Generate a synthetic two-group corpus");
  biasaudit::SynthSpec spec;
  std::string synth_out = "synth_corpus";
  std::string color = "white";
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth->add_option("--speakers", spec.speakers_per_group, "Speakers per group")->capture_default_str();
  synth->add_option("--utts", spec.utterances_per_speaker, "Utterances per speaker")->capture_default_str();
  synth->add_option("--snr-a", spec.snr_db_group_a, "Group A SNR in dB")->capture_default_str();
  synth->add_option("--snr-b", spec.snr_db_group_b, "Group B SNR in dB")->capture_default_str();
  synth->add_option("--tilt-b", spec.tilt_db_per_octave_group_b,
                    "Group B in-speech spectral tilt, dB/octave")->capture_default_str();
  synth->add_option("--speech-dur", spec.speech_duration_s, "Speech duration in seconds")->capture_default_str();
  synth->add_option("--lead", spec.leading_silence_s, "Leading silence in seconds")->capture_default_str();
  synth->add_option("--trail", spec.trailing_silence_s, "Trailing silence in seconds")->capture_default_str();
  synth->add_option("--color", color, "Noise color: white|pink")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();

  // vad
  auto *vad_cmd = app.add_subcommand("vad", "Dump speech/non-speech segments as JSON");
  std::string vad_manifest, vad_out;
  VadOptions vad_opts;
  vad_cmd->add_option("--manifest", vad_manifest, "Corpus manifest")->required();
  vad_cmd->add_option("--out", vad_out, "Output JSON file (default: stdout)");
  add_vad_flags(vad_cmd, &vad_opts);

  // snr
  auto *snr_cmd = app.add_subcommand("snr", "Per-utterance SNR CSV plus per-group summary");
  std::string snr_manifest, snr_out;
  snr_cmd->add_option("--manifest", snr_manifest, "Corpus manifest")->required();
  snr_cmd->add_option("--out", snr_out, "Output CSV file (default: stdout)");

  // features
  auto *feat_cmd = app.add_subcommand("features", "Dump feature vectors as CSV");
  std::string feat_manifest, feat_out, feat_kind = "mfcc_stats", feat_condition = "combined";
  VadOptions feat_vad;
  feat_cmd->add_option("--manifest", feat_manifest, "Corpus manifest")->required();
  feat_cmd->add_option("--kind", feat_kind, "mfcc_stats|sparsity|mel_pooled")->capture_default_str();
  feat_cmd->add_option("--condition", feat_condition, "speech|nonspeech|combined")->capture_default_str();
  feat_cmd->add_option("--out", feat_out, "Output CSV file (default: stdout)");
  add_vad_flags(feat_cmd, &feat_vad);

  // audit
  auto *audit_cmd = app.add_subcommand("audit", "Run the full bias audit");
  std::string audit_config_path, audit_manifest, audit_out_dir, audit_name;
  std::string audit_approaches, audit_conditions, audit_seeds;
  std::vector<std::string> audit_sets;
  audit_cmd->add_option("--config", audit_config_path, "Flat key=value config file");
  audit_cmd->add_option("--manifest", audit_manifest, "Corpus manifest (overrides config)");
  audit_cmd->add_option("--out-dir", audit_out_dir, "Report output directory");
  audit_cmd->add_option("--name", audit_name, "Report name");
  audit_cmd->add_option("--approaches", audit_approaches,
                        "Comma list: svm_mfcc,svm_sparsity,svm_pca_stack,mlp_mel");
  audit_cmd->add_option("--conditions", audit_conditions, "Comma list: speech,nonspeech,combined");
  audit_cmd->add_option("--seeds", audit_seeds, "Comma list of seeds (default 17,42,1337)");
  audit_cmd->add_option("--set", audit_sets, "Extra key=value overrides (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      if (color == "white") spec.noise_color = biasaudit::NoiseColor::white;
      else if (color == "pink") spec.noise_color = biasaudit::NoiseColor::pink;
      else throw biasaudit::InvalidArgumentError("unknown noise color: " + color);
      return cmd_synth(spec, synth_out);
    }
    if (vad_cmd->parsed()) return cmd_vad(vad_manifest, vad_opts, vad_out);
    if (snr_cmd->parsed()) return cmd_snr(snr_manifest, snr_out);
    if (feat_cmd->parsed())
      return cmd_features(feat_manifest, feat_kind, feat_condition, feat_vad, feat_out);
    if (audit_cmd->parsed()) {
      AuditConfig config;
      if (!audit_config_path.empty()) config = biasaudit::load_audit_config(audit_config_path);
      if (!audit_manifest.empty()) biasaudit::apply_config_line(&config, "manifest", audit_manifest);
      if (!audit_out_dir.empty()) biasaudit::apply_config_line(&config, "out_dir", audit_out_dir);
      if (!audit_name.empty()) biasaudit::apply_config_line(&config, "name", audit_name);
      if (!audit_approaches.empty())
        biasaudit::apply_config_line(&config, "approaches", audit_approaches);
      if (!audit_conditions.empty())
        biasaudit::apply_config_line(&config, "conditions", audit_conditions);
      if (!audit_seeds.empty()) biasaudit::apply_config_line(&config, "seeds", audit_seeds);
      for (const std::string &kv : audit_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw biasaudit::InvalidArgumentError("--set expects key=value, got: " + kv);
        biasaudit::apply_config_line(&config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (config.manifest.empty())
        throw biasaudit::InvalidArgumentError("audit needs --manifest or a config file");
      return cmd_audit(config);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
