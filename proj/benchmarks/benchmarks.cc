// benchmarks/benchmarks.cc

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

// Microbenchmarks for the per-utterance hot path: STFT, feature extractors,
// the shape MLE, VAD/SNR framing and SMO training.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "biasaudit/dsp.hpp"
#include "biasaudit/features.hpp"
#include "biasaudit/segmentation.hpp"
#include "biasaudit/svm.hpp"

namespace {

using namespace biasaudit;

std::vector<double> noise_signal(size_t n, uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> x(n);
  for (double &v : x) {
    const double u1 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v = 0.05 * std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(2.0 * M_PI * u2);
  }
  return x;
}

void BM_StftMagnitude(benchmark::State &state) {
  const auto x = noise_signal(static_cast<size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft_magnitude(x, StftConfig{32.0, 16.0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StftMagnitude)->Arg(16000)->Arg(35200);

void BM_MfccStats(benchmark::State &state) {
  const auto x = noise_signal(35200, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mfcc_stats(x));
}
BENCHMARK(BM_MfccStats);

void BM_SparsityFeatures(benchmark::State &state) {
  const auto x = noise_signal(35200, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sparsity_features(x));
}
BENCHMARK(BM_SparsityFeatures);

void BM_GammaShapeMle(benchmark::State &state) {
  std::mt19937_64 engine(4);
  std::vector<double> p(static_cast<size_t>(state.range(0)));
  for (double &v : p) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v = -std::log(u + 1e-300);  // exponential, shape 1
  }
  for (auto _ : state) benchmark::DoNotOptimize(gamma_shape_mle(p));
}
BENCHMARK(BM_GammaShapeMle)->Arg(256)->Arg(4096);

void BM_DetectSegments(benchmark::State &state) {
  Utterance utt;
  utt.samples = noise_signal(35200, 5);
  for (size_t i = 8000; i < 24000; ++i)
    utt.samples[i] += 0.2 * std::sin(2.0 * M_PI * 140.0 * static_cast<double>(i) / 16000.0);
  for (auto _ : state) benchmark::DoNotOptimize(detect_segments(utt));
}
BENCHMARK(BM_DetectSegments);

void BM_EstimateSnr(benchmark::State &state) {
  Utterance utt;
  utt.samples = noise_signal(35200, 6);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_utterance_snr(utt));
}
BENCHMARK(BM_EstimateSnr);

void BM_SvmTrainBlobs(benchmark::State &state) {
  std::mt19937_64 engine(7);
  auto draw = [&] { return (static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5); };
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (size_t i = 0; i < n; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    x.push_back({3.0 * label + draw(), draw()});
    y.push_back(label);
  }
  SvmTrainOptions opts;
  opts.c = 10.0;
  opts.gamma = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(svm_train(x, y, opts));
}
BENCHMARK(BM_SvmTrainBlobs)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
