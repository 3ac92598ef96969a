// core/include/biasaudit/audit.hpp

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

// Full corpus audit: SNR group statistics, every (approach x condition) cell
// of the evaluation protocol, bias flags, and deterministic report rendering
// (<name>.audit.json with full precision, <name>.audit.txt with the
// percent-formatted table).

#ifndef BIASAUDIT_AUDIT_HPP_
#define BIASAUDIT_AUDIT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "biasaudit/evaluation.hpp"

namespace biasaudit {

struct AuditConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir = ".";
  std::string name = "audit";
  std::vector<Approach> approaches{Approach::svm_mfcc, Approach::svm_sparsity,
                                   Approach::svm_pca_stack, Approach::mlp_mel};
  std::vector<Condition> conditions{Condition::speech, Condition::nonspeech,
                                    Condition::combined};
  ProtocolOptions protocol;
};

// Flat key=value file (lines `key = value`, '#' comments). Unknown keys are
// an error; unset keys keep their defaults.
AuditConfig load_audit_config(const std::filesystem::path &path);
void apply_config_line(AuditConfig *config, const std::string &key, const std::string &value);

struct AuditReport {
  std::string corpus_name;
  GroupSnrStats snr_group_a, snr_group_b;
  std::vector<ConditionResult> results;  // approach-major, condition-minor
  AuditFlags flags;
  AuditConfig config;  // snapshot
};

// Runs VAD, SNR stats and every (approach x condition x seed x fold) cell.
// Warnings about skipped utterances go to `log` when non-null.
AuditReport run_audit(const AuditConfig &config, std::ostream *log = nullptr);

std::string render_report_json(const AuditReport &report);  // full precision
std::string render_report_text(const AuditReport &report);  // percent, 1 decimal

struct ReportPaths {
  std::filesystem::path json_path;
  std::filesystem::path text_path;
};

ReportPaths write_report(const AuditReport &report);

}  // namespace biasaudit

#endif  // BIASAUDIT_AUDIT_HPP_
