// core/src/evaluation.cc

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

#include "biasaudit/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "biasaudit/dsp.hpp"
#include "biasaudit/error.hpp"
#include "biasaudit/features.hpp"
#include "biasaudit/rng.hpp"
#include "biasaudit/wav.hpp"

namespace biasaudit {

namespace {

// Minimum sample counts per extractor (32 ms / 16 ms frames need two frames
// for functionals; the sparsity MLE needs 8 frames of the 16 ms / 8 ms grid).
constexpr size_t kMinMfccSamples = 512 + 4 * 256;
constexpr size_t kMinSparsitySamples = 256 + 7 * 128;
constexpr size_t kMinMelPooledSamples = 512;

int svm_label_of(Group g) { return g == Group::B ? 1 : -1; }
int mlp_label_of(Group g) { return g == Group::B ? 1 : 0; }

struct LabelledSet {
  std::vector<std::vector<double>> x;
  std::vector<int> y_svm;   // +1/-1
  std::vector<int> y_mlp;   // 0/1
};

double population_std(const std::vector<double> &v, double mean) {
  double acc = 0.0;
  for (double a : v) acc += (a - mean) * (a - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

void parallel_for(size_t count, int threads, const std::function<void(size_t)> &fn) {
  if (threads <= 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(threads, static_cast<int>(count));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

const char *condition_name(Condition c) {
  switch (c) {
    case Condition::speech: return "speech";
    case Condition::nonspeech: return "nonspeech";
    case Condition::combined: return "combined";
  }
  return "?";
}

const char *approach_name(Approach a) {
  switch (a) {
    case Approach::svm_mfcc: return "svm_mfcc";
    case Approach::svm_sparsity: return "svm_sparsity";
    case Approach::svm_pca_stack: return "svm_pca_stack";
    case Approach::mlp_mel: return "mlp_mel";
  }
  return "?";
}

std::optional<Condition> parse_condition(const std::string &name) {
  if (name == "speech") return Condition::speech;
  if (name == "nonspeech") return Condition::nonspeech;
  if (name == "combined") return Condition::combined;
  return std::nullopt;
}

std::optional<Approach> parse_approach(const std::string &name) {
  if (name == "svm_mfcc") return Approach::svm_mfcc;
  if (name == "svm_sparsity") return Approach::svm_sparsity;
  if (name == "svm_pca_stack") return Approach::svm_pca_stack;
  if (name == "mlp_mel") return Approach::mlp_mel;
  return std::nullopt;
}

size_t EvalCorpus::speaker_index(const std::string &speaker_id) const {
  for (size_t i = 0; i < speakers.size(); ++i)
    if (speakers[i].speaker_id == speaker_id) return i;
  throw ProtocolError("unknown speaker id: " + speaker_id);
}

EvalCorpus load_eval_corpus(const std::filesystem::path &manifest_path) {
  EvalCorpus corpus;
  corpus.speakers = load_manifest(manifest_path);
  std::set<std::string> ids;
  for (const SpeakerRecord &sp : corpus.speakers) {
    for (const auto &path : sp.utterance_paths) {
      EvalItem item;
      item.utterance_id = path.stem().string();
      item.speaker_id = sp.speaker_id;
      item.group = sp.group;
      item.path = path;
      if (!ids.insert(item.utterance_id).second)
        throw ManifestParseError("duplicate utterance id (file stem): " + item.utterance_id);
      corpus.items.push_back(std::move(item));
    }
  }
  return corpus;
}

std::vector<Fold> make_loso_folds(const EvalCorpus &corpus, uint64_t seed, double val_fraction) {
  if (corpus.speakers.size() < 3) throw ProtocolError("LOSO needs at least 3 speakers");
  bool have_a = false, have_b = false;
  for (const auto &sp : corpus.speakers) (sp.group == Group::A ? have_a : have_b) = true;
  if (!have_a || !have_b) throw ProtocolError("LOSO needs both groups");

  std::vector<Fold> folds;
  folds.reserve(corpus.speakers.size());
  for (size_t f = 0; f < corpus.speakers.size(); ++f) {
    const std::string &test_speaker = corpus.speakers[f].speaker_id;
    Fold fold;
    fold.test_speaker_id = test_speaker;

    // Pool the remaining speakers' utterances per group.
    std::vector<size_t> pool_a, pool_b;
    for (size_t i = 0; i < corpus.items.size(); ++i) {
      if (corpus.items[i].speaker_id == test_speaker) continue;
      (corpus.items[i].group == Group::A ? pool_a : pool_b).push_back(i);
    }

    for (int g = 0; g < 2; ++g) {
      std::vector<size_t> &pool = g == 0 ? pool_a : pool_b;
      Rng rng(mix_seed(seed, f, static_cast<uint64_t>(g)));
      rng.shuffle(pool);
      size_t n_val = 0;
      if (pool.size() >= 2) {
        n_val = static_cast<size_t>(std::llround(val_fraction * static_cast<double>(pool.size())));
        n_val = std::clamp<size_t>(n_val, 1, pool.size() - 1);
      }
      fold.val_items.insert(fold.val_items.end(), pool.begin(), pool.begin() + static_cast<ptrdiff_t>(n_val));
      fold.train_items.insert(fold.train_items.end(), pool.begin() + static_cast<ptrdiff_t>(n_val), pool.end());
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

int majority_vote(const std::vector<int> &predictions) {
  if (predictions.empty()) throw InvalidArgumentError("majority_vote needs predictions");
  ptrdiff_t ones = 0;
  for (int p : predictions) ones += p == 1 ? 1 : -1;
  return ones >= 0 ? 1 : 0;  // tie -> target group
}

std::pair<GroupSnrStats, GroupSnrStats> group_snr_stats(const EvalCorpus &corpus) {
  std::vector<double> snr_a, snr_b;
  for (const EvalItem &item : corpus.items) {
    Utterance utt = read_wav(item.path);
    const double snr = estimate_utterance_snr(utt).snr_db;
    (item.group == Group::A ? snr_a : snr_b).push_back(snr);
  }
  if (snr_a.empty() || snr_b.empty()) throw ProtocolError("group without utterances");

  auto stats = [](const std::vector<double> &v) {
    GroupSnrStats s;
    s.n = v.size();
    s.mean_db = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.std_db = population_std(v, s.mean_db);
    return s;
  };
  return {stats(snr_a), stats(snr_b)};
}

FeaturePlan plan_for_approaches(const std::vector<Approach> &approaches) {
  FeaturePlan plan;
  for (Approach a : approaches) {
    switch (a) {
      case Approach::svm_mfcc: plan.mfcc = true; break;
      case Approach::svm_sparsity: plan.sparsity = true; break;
      case Approach::svm_pca_stack:
        plan.mfcc = plan.sparsity = plan.mel_pooled = true;
        break;
      case Approach::mlp_mel: plan.segments = true; break;
    }
  }
  return plan;
}

std::map<Condition, ConditionFeatures> extract_condition_features(
    const EvalCorpus &corpus, const std::vector<Condition> &conditions,
    const FeaturePlan &plan, const VadOptions &vad, std::ostream *log) {
  std::map<Condition, ConditionFeatures> out;
  for (Condition c : conditions) {
    out[c].condition = c;
    out[c].per_item.resize(corpus.items.size());
  }
  const bool needs_vad =
      out.count(Condition::speech) != 0 || out.count(Condition::nonspeech) != 0;

  for (size_t i = 0; i < corpus.items.size(); ++i) {
    const EvalItem &item = corpus.items[i];
    const Utterance utt = read_wav(item.path);

    std::vector<double> speech_sig, nonspeech_sig;
    if (needs_vad) {
      const std::vector<SegmentSpan> spans = detect_segments(utt, vad);
      auto split = split_utterance(utt, spans);
      speech_sig = std::move(split.first);
      nonspeech_sig = std::move(split.second);
    }

    for (auto &[condition, table] : out) {
      const std::vector<double> *signal = nullptr;
      switch (condition) {
        case Condition::speech: signal = &speech_sig; break;
        case Condition::nonspeech: signal = &nonspeech_sig; break;
        case Condition::combined: signal = &utt.samples; break;
      }
      UtteranceFeatures &feats = table.per_item[i];
      bool skipped = false;

      if (plan.mfcc) {
        if (signal->size() >= kMinMfccSamples) feats.mfcc = mfcc_stats(*signal).values;
        else skipped = true;
      }
      if (plan.sparsity) {
        if (signal->size() >= kMinSparsitySamples) feats.sparsity = sparsity_features(*signal).values;
        else skipped = true;
      }
      if (plan.mel_pooled) {
        if (signal->size() >= kMinMelPooledSamples) feats.mel_pooled = mel_pooled(*signal).values;
        else skipped = true;
      }
      if (plan.segments) {
        if (!signal->empty()) {
          for (const MelSegment &seg : mel_segments(*signal))
            feats.segment_pooled.push_back(seg.mean_pooled());
        } else {
          skipped = true;
        }
      }
      if (skipped && log) {
        *log << "warning: utterance " << item.utterance_id << " has empty or too-short "
             << condition_name(condition) << " signal; skipped where needed\n";
      }
    }
  }
  return out;
}

namespace {

// Per-utterance vectors for an SVM approach; empty = unusable.
std::vector<double> approach_vector(const UtteranceFeatures &f, Approach a) {
  switch (a) {
    case Approach::svm_mfcc: return f.mfcc;
    case Approach::svm_sparsity: return f.sparsity;
    case Approach::svm_pca_stack: {
      if (f.mfcc.empty() || f.sparsity.empty() || f.mel_pooled.empty()) return {};
      std::vector<double> v;
      v.reserve(f.mfcc.size() + f.sparsity.size() + f.mel_pooled.size());
      v.insert(v.end(), f.mfcc.begin(), f.mfcc.end());
      v.insert(v.end(), f.sparsity.begin(), f.sparsity.end());
      v.insert(v.end(), f.mel_pooled.begin(), f.mel_pooled.end());
      return v;
    }
    case Approach::mlp_mel: return {};
  }
  return {};
}

void collect(const EvalCorpus &corpus, const ConditionFeatures &features, Approach approach,
             const std::vector<size_t> &items, LabelledSet *set) {
  for (size_t idx : items) {
    const EvalItem &item = corpus.items[idx];
    const UtteranceFeatures &f = features.per_item[idx];
    if (approach == Approach::mlp_mel) {
      for (const auto &seg : f.segment_pooled) {
        set->x.push_back(seg);
        set->y_svm.push_back(svm_label_of(item.group));
        set->y_mlp.push_back(mlp_label_of(item.group));
      }
    } else {
      std::vector<double> v = approach_vector(f, approach);
      if (v.empty()) continue;  // skipped utterance
      set->x.push_back(std::move(v));
      set->y_svm.push_back(svm_label_of(item.group));
      set->y_mlp.push_back(mlp_label_of(item.group));
    }
  }
}

// Runs one LOSO fold; returns 1 when the majority-voted speaker label is
// correct.
int run_fold(const EvalCorpus &corpus, const ConditionFeatures &features, Approach approach,
             const Fold &fold, size_t fold_index, uint64_t seed, const ProtocolOptions &opts) {
  LabelledSet train, val, test;
  collect(corpus, features, approach, fold.train_items, &train);
  collect(corpus, features, approach, fold.val_items, &val);

  std::vector<size_t> test_items;
  for (size_t i = 0; i < corpus.items.size(); ++i)
    if (corpus.items[i].speaker_id == fold.test_speaker_id) test_items.push_back(i);
  collect(corpus, features, approach, test_items, &test);

  if (test.x.empty())
    throw ProtocolError("speaker " + fold.test_speaker_id + " has no usable items for condition " +
                        condition_name(features.condition) + " / " + approach_name(approach));
  if (train.x.empty() || val.x.empty())
    throw ProtocolError("empty train or validation split in fold " + fold.test_speaker_id);

  const Standardizer standardizer = Standardizer::fit(train.x);
  auto standardize_all = [&](LabelledSet &s) {
    for (auto &v : s.x) v = standardizer.apply(v);
  };
  standardize_all(train);
  standardize_all(val);
  standardize_all(test);

  if (approach == Approach::svm_pca_stack) {
    const Pca pca = Pca::fit(train.x);
    auto project_all = [&](LabelledSet &s) {
      for (auto &v : s.x) v = pca.apply(v);
    };
    project_all(train);
    project_all(val);
    project_all(test);
  }

  std::vector<int> predictions;
  predictions.reserve(test.x.size());
  if (approach == Approach::mlp_mel) {
    MlpTrainOptions mlp_opts = opts.mlp;
    mlp_opts.seed = mix_seed(seed, fold_index, 0x6d6c70ULL);
    const MlpModel model = mlp_train(train.x, train.y_mlp, val.x, val.y_mlp, mlp_opts);
    for (const auto &v : test.x) predictions.push_back(mlp_predict(model, v).label);
  } else {
    const GridSearchResult grid = grid_search_svm(train.x, train.y_svm, val.x, val.y_svm,
                                                  opts.grid, opts.svm_tol, opts.svm_max_passes);
    for (const auto &v : test.x)
      predictions.push_back(svm_predict(grid.best_model, v).label == 1 ? 1 : 0);
  }

  const int voted = majority_vote(predictions);
  const size_t spk = corpus.speaker_index(fold.test_speaker_id);
  return voted == mlp_label_of(corpus.speakers[spk].group) ? 1 : 0;
}

}  // namespace

ConditionResult run_condition(const EvalCorpus &corpus, const ConditionFeatures &features,
                              Approach approach, const ProtocolOptions &opts) {
  ConditionResult result;
  result.approach = approach;
  result.condition = features.condition;

  for (uint64_t seed : opts.seeds) {
    const std::vector<Fold> folds = make_loso_folds(corpus, seed, opts.val_fraction);
    std::vector<int> correct(folds.size(), 0);
    parallel_for(folds.size(), opts.threads, [&](size_t f) {
      correct[f] = run_fold(corpus, features, approach, folds[f], f, seed, opts);
    });
    const int total = std::accumulate(correct.begin(), correct.end(), 0);
    result.per_seed_accuracy.push_back(static_cast<double>(total) /
                                       static_cast<double>(folds.size()));
  }

  result.mean = std::accumulate(result.per_seed_accuracy.begin(), result.per_seed_accuracy.end(), 0.0) /
                static_cast<double>(result.per_seed_accuracy.size());
  result.std_dev = population_std(result.per_seed_accuracy, result.mean);
  return result;
}

ConditionResult run_condition(const EvalCorpus &corpus, Condition condition, Approach approach,
                              const ProtocolOptions &opts, std::ostream *log) {
  const FeaturePlan plan = plan_for_approaches({approach});
  auto features = extract_condition_features(corpus, {condition}, plan, opts.vad, log);
  return run_condition(corpus, features.at(condition), approach, opts);
}

AuditFlags compare_conditions(const std::vector<ConditionResult> &results,
                              const GroupSnrStats &snr_a, const GroupSnrStats &snr_b) {
  std::map<Approach, std::pair<const ConditionResult *, const ConditionResult *>> by_approach;
  for (const ConditionResult &r : results) {
    if (r.condition == Condition::speech) by_approach[r.approach].first = &r;
    if (r.condition == Condition::nonspeech) by_approach[r.approach].second = &r;
  }

  size_t considered = 0, satisfied = 0;
  for (const auto &[approach, pair] : by_approach) {
    if (!pair.first || !pair.second) continue;
    ++considered;
    if (pair.second->mean >= pair.first->mean - 0.05) ++satisfied;
  }
  if (considered == 0)
    throw ProtocolError("compare_conditions needs speech and nonspeech results for an approach");

  AuditFlags flags;
  flags.environment_bias = 2 * satisfied > considered;
  flags.snr_gap = std::abs(snr_a.mean_db - snr_b.mean_db) > 3.0;
  return flags;
}

}  // namespace biasaudit
