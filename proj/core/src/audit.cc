// core/src/audit.cc

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

#include "biasaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "biasaudit/error.hpp"

namespace biasaudit {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double parse_double(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw InvalidArgumentError("config key '" + key + "': bad number '" + value + "'");
  }
}

int parse_int(const std::string &key, const std::string &value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw InvalidArgumentError("config key '" + key + "': expected integer");
  return static_cast<int>(v);
}

std::string fmt_pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * fraction);
  return buf;
}

std::string fmt_db(double db) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", db);
  return buf;
}

json config_json(const AuditConfig &c) {
  json j;
  j["manifest"] = c.manifest.string();
  j["out_dir"] = c.out_dir.string();
  j["name"] = c.name;
  json approaches = json::array();
  for (Approach a : c.approaches) approaches.push_back(approach_name(a));
  j["approaches"] = approaches;
  json conditions = json::array();
  for (Condition cond : c.conditions) conditions.push_back(condition_name(cond));
  j["conditions"] = conditions;
  j["seeds"] = c.protocol.seeds;
  j["val_fraction"] = c.protocol.val_fraction;
  j["vad"] = {{"threshold_db", c.protocol.vad.threshold_db_over_floor},
              {"min_speech_ms", c.protocol.vad.min_speech_ms},
              {"max_gap_ms", c.protocol.vad.max_gap_ms},
              {"hangover_frames", c.protocol.vad.hangover_frames}};
  j["svm"] = {{"c_grid", c.protocol.grid.c_values},
              {"gamma_grid", c.protocol.grid.gamma_values},
              {"tol", c.protocol.svm_tol},
              {"max_passes", c.protocol.svm_max_passes}};
  j["mlp"] = {{"epochs", c.protocol.mlp.epochs},
              {"batch", c.protocol.mlp.batch},
              {"lr", c.protocol.mlp.lr},
              {"patience", c.protocol.mlp.scheduler_patience},
              {"hidden", c.protocol.mlp.hidden_dim}};
  j["threads"] = c.protocol.threads;
  return j;
}

}  // namespace

void apply_config_line(AuditConfig *config, const std::string &raw_key, const std::string &raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "manifest") config->manifest = value;
  else if (key == "out_dir") config->out_dir = value;
  else if (key == "name") config->name = value;
  else if (key == "approaches") {
    config->approaches.clear();
    for (const std::string &tok : split_list(value)) {
      const auto a = parse_approach(tok);
      if (!a) throw InvalidArgumentError("unknown approach: " + tok);
      config->approaches.push_back(*a);
    }
  } else if (key == "conditions") {
    config->conditions.clear();
    for (const std::string &tok : split_list(value)) {
      const auto c = parse_condition(tok);
      if (!c) throw InvalidArgumentError("unknown condition: " + tok);
      config->conditions.push_back(*c);
    }
  } else if (key == "seeds") {
    config->protocol.seeds.clear();
    for (const std::string &tok : split_list(value))
      config->protocol.seeds.push_back(static_cast<uint64_t>(std::stoull(tok)));
    if (config->protocol.seeds.empty()) throw InvalidArgumentError("seeds must be non-empty");
  } else if (key == "val_fraction") config->protocol.val_fraction = parse_double(key, value);
  else if (key == "vad.threshold_db") config->protocol.vad.threshold_db_over_floor = parse_double(key, value);
  else if (key == "vad.min_speech_ms") config->protocol.vad.min_speech_ms = parse_double(key, value);
  else if (key == "vad.max_gap_ms") config->protocol.vad.max_gap_ms = parse_double(key, value);
  else if (key == "vad.hangover_frames") config->protocol.vad.hangover_frames = parse_int(key, value);
  else if (key == "svm.c_grid") {
    config->protocol.grid.c_values.clear();
    for (const std::string &tok : split_list(value))
      config->protocol.grid.c_values.push_back(parse_double(key, tok));
  } else if (key == "svm.gamma_grid") {
    config->protocol.grid.gamma_values.clear();
    for (const std::string &tok : split_list(value))
      config->protocol.grid.gamma_values.push_back(parse_double(key, tok));
  } else if (key == "svm.tol") config->protocol.svm_tol = parse_double(key, value);
  else if (key == "svm.max_passes") config->protocol.svm_max_passes = parse_int(key, value);
  else if (key == "mlp.epochs") config->protocol.mlp.epochs = parse_int(key, value);
  else if (key == "mlp.batch") config->protocol.mlp.batch = parse_int(key, value);
  else if (key == "mlp.lr") config->protocol.mlp.lr = parse_double(key, value);
  else if (key == "mlp.patience") config->protocol.mlp.scheduler_patience = parse_int(key, value);
  else if (key == "mlp.hidden") config->protocol.mlp.hidden_dim = static_cast<size_t>(parse_int(key, value));
  else if (key == "threads") config->protocol.threads = parse_int(key, value);
  else throw InvalidArgumentError("unknown config key: " + key);
}

AuditConfig load_audit_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open config: " + path.string());
  AuditConfig config;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgumentError("config line " + std::to_string(line_no) + ": expected key = value");
    apply_config_line(&config, t.substr(0, eq), t.substr(eq + 1));
  }
  return config;
}

AuditReport run_audit(const AuditConfig &config, std::ostream *log) {
  if (config.approaches.empty() || config.conditions.empty())
    throw InvalidArgumentError("audit needs at least one approach and one condition");

  AuditReport report;
  report.config = config;
  report.corpus_name = config.name;

  const EvalCorpus corpus = load_eval_corpus(config.manifest);
  auto snr = group_snr_stats(corpus);
  report.snr_group_a = snr.first;
  report.snr_group_b = snr.second;

  const FeaturePlan plan = plan_for_approaches(config.approaches);
  const auto features = extract_condition_features(corpus, config.conditions, plan,
                                                   config.protocol.vad, log);

  for (Approach approach : config.approaches)
    for (Condition condition : config.conditions)
      report.results.push_back(
          run_condition(corpus, features.at(condition), approach, config.protocol));

  const bool comparable =
      std::count_if(report.results.begin(), report.results.end(),
                    [](const ConditionResult &r) { return r.condition == Condition::speech; }) > 0 &&
      std::count_if(report.results.begin(), report.results.end(),
                    [](const ConditionResult &r) { return r.condition == Condition::nonspeech; }) > 0;
  if (comparable) {
    report.flags = compare_conditions(report.results, report.snr_group_a, report.snr_group_b);
  } else {
    report.flags.environment_bias = false;
    report.flags.snr_gap =
        std::abs(report.snr_group_a.mean_db - report.snr_group_b.mean_db) > 3.0;
  }
  return report;
}

std::string render_report_json(const AuditReport &report) {
  json j;
  j["corpus"] = report.corpus_name;
  j["flags"] = {{"environment_bias", report.flags.environment_bias},
                {"snr_gap", report.flags.snr_gap}};
  j["snr_db"] = {{"group_a", {{"mean", report.snr_group_a.mean_db},
                              {"std", report.snr_group_a.std_db},
                              {"n", report.snr_group_a.n}}},
                 {"group_b", {{"mean", report.snr_group_b.mean_db},
                              {"std", report.snr_group_b.std_db},
                              {"n", report.snr_group_b.n}}},
                 {"gap", report.snr_group_a.mean_db - report.snr_group_b.mean_db}};
  json results = json::array();
  for (const ConditionResult &r : report.results) {
    results.push_back({{"approach", approach_name(r.approach)},
                       {"condition", condition_name(r.condition)},
                       {"per_seed_accuracy", r.per_seed_accuracy},
                       {"mean", r.mean},
                       {"std", r.std_dev}});
  }
  j["results"] = results;
  j["config"] = config_json(report.config);
  return j.dump(2) + "\n";
}

std::string render_report_text(const AuditReport &report) {
  std::ostringstream out;
  out << "corpus bias audit: " << report.corpus_name << "\n";
  out << "manifest: " << report.config.manifest.string() << "\n\n";

  out << "utterance SNR [dB] per group (mean \xC2\xB1 std)\n";
  out << "  group A (control): " << fmt_db(report.snr_group_a.mean_db) << " \xC2\xB1 "
      << fmt_db(report.snr_group_a.std_db) << "  (n=" << report.snr_group_a.n << ")\n";
  out << "  group B (target):  " << fmt_db(report.snr_group_b.mean_db) << " \xC2\xB1 "
      << fmt_db(report.snr_group_b.std_db) << "  (n=" << report.snr_group_b.n << ")\n";
  out << "  gap: " << fmt_db(report.snr_group_a.mean_db - report.snr_group_b.mean_db)
      << " dB -> snr_gap: " << (report.flags.snr_gap ? "yes" : "no") << "\n\n";

  // Condition columns in canonical order, restricted to configured ones.
  std::vector<Condition> columns;
  for (Condition c : {Condition::speech, Condition::nonspeech, Condition::combined})
    if (std::find(report.config.conditions.begin(), report.config.conditions.end(), c) !=
        report.config.conditions.end())
      columns.push_back(c);

  out << "speaker accuracy [%] (mean \xC2\xB1 std over seeds";
  for (size_t i = 0; i < report.config.protocol.seeds.size(); ++i)
    out << (i == 0 ? " " : ",") << report.config.protocol.seeds[i];
  out << ")\n";

  out << "  " << std::string("approach") + std::string(16 - 8, ' ');
  for (Condition c : columns) {
    std::string h = condition_name(c);
    h.resize(16, ' ');
    out << h;
  }
  out << "\n";

  for (Approach a : report.config.approaches) {
    std::string row = approach_name(a);
    row.resize(16, ' ');
    out << "  " << row;
    for (Condition c : columns) {
      std::string cell = "-";
      for (const ConditionResult &r : report.results) {
        if (r.approach == a && r.condition == c) {
          cell = fmt_pct(r.mean) + " \xC2\xB1 " + fmt_pct(r.std_dev);
          break;
        }
      }
      // The +/- glyph is 2 bytes; keep visual width 16.
      const size_t width = cell.find('\xC2') == std::string::npos ? 16 : 17;
      cell.resize(std::max(cell.size(), width), ' ');
      out << cell;
    }
    out << "\n";
  }

  out << "\nenvironment_bias: " << (report.flags.environment_bias ? "yes" : "no") << "\n";
  return out.str();
}

ReportPaths write_report(const AuditReport &report) {
  std::error_code ec;
  std::filesystem::create_directories(report.config.out_dir, ec);

  ReportPaths paths;
  paths.json_path = report.config.out_dir / (report.corpus_name + ".audit.json");
  paths.text_path = report.config.out_dir / (report.corpus_name + ".audit.txt");

  std::ofstream jf(paths.json_path, std::ios::binary | std::ios::trunc);
  if (!jf) throw IoError("cannot write report: " + paths.json_path.string());
  jf << render_report_json(report);

  std::ofstream tf(paths.text_path, std::ios::binary | std::ios::trunc);
  if (!tf) throw IoError("cannot write report: " + paths.text_path.string());
  tf << render_report_text(report);
  return paths;
}

}  // namespace biasaudit
