// core/include/biasaudit/evaluation.hpp

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

// Leave-one-speaker-out evaluation: per fold a 90/10 group-stratified
// train/validation split of the remaining speakers' utterances,
// standardizer/PCA/classifier fitted on fold-train(+val) only, test-speaker
// item predictions majority-voted to one speaker label, repeated over 3
// seeds. Folds, seeds and grid cells are independent work units; results are
// keyed so completion order never changes the outcome.

#ifndef BIASAUDIT_EVALUATION_HPP_
#define BIASAUDIT_EVALUATION_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biasaudit/manifest.hpp"
#include "biasaudit/mlp.hpp"
#include "biasaudit/segmentation.hpp"
#include "biasaudit/svm.hpp"

namespace biasaudit {

enum class Condition { speech, nonspeech, combined };
enum class Approach { svm_mfcc, svm_sparsity, svm_pca_stack, mlp_mel };

const char *condition_name(Condition c);
const char *approach_name(Approach a);
std::optional<Condition> parse_condition(const std::string &name);
std::optional<Approach> parse_approach(const std::string &name);

struct EvalItem {
  std::string utterance_id;
  std::string speaker_id;
  Group group = Group::A;
  std::filesystem::path path;
};

struct EvalCorpus {
  std::vector<SpeakerRecord> speakers;
  std::vector<EvalItem> items;

  size_t speaker_index(const std::string &speaker_id) const;
};

// Loads the manifest and flattens it to evaluation items; utterance ids are
// the file stems and must be unique across the corpus.
EvalCorpus load_eval_corpus(const std::filesystem::path &manifest_path);

struct Fold {
  std::string test_speaker_id;
  std::vector<size_t> train_items;  // indices into EvalCorpus::items
  std::vector<size_t> val_items;
};

// One fold per speaker; the remaining speakers' utterances are shuffled by
// the seed and split 90/10, stratified by group. Throws ProtocolError for
// fewer than 3 speakers.
std::vector<Fold> make_loso_folds(const EvalCorpus &corpus, uint64_t seed,
                                  double val_fraction = 0.10);

// Most frequent 0/1 label; an exact tie goes to the target group (1).
// Throws InvalidArgumentError when empty.
int majority_vote(const std::vector<int> &predictions);

struct GroupSnrStats {
  double mean_db = 0.0;
  double std_db = 0.0;
  size_t n = 0;
};

// Reads every utterance and reports per-group mean/std of the utterance-level
// SNR estimate. Throws ProtocolError if a group has no utterances.
std::pair<GroupSnrStats, GroupSnrStats> group_snr_stats(const EvalCorpus &corpus);

// Per-utterance features for one condition; an empty vector means the
// condition signal was empty or too short for that extractor and the
// utterance is skipped for approaches that need it.
struct UtteranceFeatures {
  std::vector<double> mfcc;                          // 48
  std::vector<double> sparsity;                      // 129
  std::vector<double> mel_pooled;                    // 126
  std::vector<std::vector<double>> segment_pooled;   // per 500 ms segment, 126
};

struct ConditionFeatures {
  Condition condition = Condition::combined;
  std::vector<UtteranceFeatures> per_item;  // parallel to EvalCorpus::items
};

struct FeaturePlan {
  bool mfcc = false;
  bool sparsity = false;
  bool mel_pooled = false;
  bool segments = false;
};

FeaturePlan plan_for_approaches(const std::vector<Approach> &approaches);

// One streaming pass over the corpus: per utterance VAD + condition signals +
// all planned feature kinds. Warnings about skipped utterances go to `log`
// when non-null.
std::map<Condition, ConditionFeatures> extract_condition_features(
    const EvalCorpus &corpus, const std::vector<Condition> &conditions,
    const FeaturePlan &plan, const VadOptions &vad, std::ostream *log);

struct ProtocolOptions {
  std::vector<uint64_t> seeds{17, 42, 1337};
  double val_fraction = 0.10;
  VadOptions vad{};
  SvmGrid grid{};
  double svm_tol = 1e-3;
  int svm_max_passes = 1000;
  MlpTrainOptions mlp{};
  int threads = 1;
};

struct ConditionResult {
  Approach approach = Approach::svm_mfcc;
  Condition condition = Condition::combined;
  std::vector<double> per_seed_accuracy;
  double mean = 0.0;
  double std_dev = 0.0;  // population, over seeds
};

ConditionResult run_condition(const EvalCorpus &corpus, const ConditionFeatures &features,
                              Approach approach, const ProtocolOptions &opts);

// Convenience: extracts the features itself.
ConditionResult run_condition(const EvalCorpus &corpus, Condition condition,
                              Approach approach, const ProtocolOptions &opts,
                              std::ostream *log = nullptr);

struct AuditFlags {
  bool environment_bias = false;
  bool snr_gap = false;
};

// environment_bias: a majority of approaches have mean(nonspeech) >=
// mean(speech) - 0.05. snr_gap: |group SNR means| differ by more than 3 dB.
// Throws ProtocolError unless speech and nonspeech results are present for
// at least one approach.
AuditFlags compare_conditions(const std::vector<ConditionResult> &results,
                              const GroupSnrStats &snr_a, const GroupSnrStats &snr_b);

}  // namespace biasaudit

#endif  // BIASAUDIT_EVALUATION_HPP_
