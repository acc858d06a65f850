// Copyright 2026 The mlasr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "mlasr/audioprep.hpp"
#include "mlasr/lid.hpp"
#include "mlasr/lm.hpp"
#include "mlasr/metrics.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/simulate.hpp"

namespace {

using namespace mlasr;

Tokens random_tokens(Rng& r, std::size_t n, std::size_t alphabet) {
  Tokens t(n);
  for (auto& x : t) x = "w" + std::to_string(r.below(alphabet));
  return t;
}

void BM_Align(benchmark::State& state) {
  Rng r(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_tokens(r, n, 50), b = random_tokens(r, n, 50);
  for (auto _ : state) benchmark::DoNotOptimize(align(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Align)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_BatchLid(benchmark::State& state) {
  const Manifest m = generate_corpus({6, 200, 60, 3});
  std::vector<Vocab> vs;
  for (const auto& [id, alpha] : simulation_alphabets(6)) vs.push_back(build_vocab(m, id));
  const VocabRegistry reg(std::move(vs));
  const LidPolicy policy = LidPolicy::for_registry(reg);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(batch_identify(m, reg, policy, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_BatchLid)->Arg(1)->Arg(4);

void BM_TrainKneserNey(benchmark::State& state) {
  Rng r(2);
  std::vector<std::string> corpus;
  for (int s = 0; s < state.range(0); ++s) {
    std::string line;
    for (int k = 0; k < 12; ++k) line += (k ? " w" : "w") + std::to_string(r.below(2000));
    corpus.push_back(line);
  }
  const auto lex = lm::build_lexicon(corpus, 1500);
  for (auto _ : state) benchmark::DoNotOptimize(lm::train_ngram(corpus, 5, lex));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainKneserNey)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Resample2x(benchmark::State& state) {
  Rng r(3);
  audio::AudioBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples.resize(static_cast<std::size_t>(state.range(0)));
  for (auto& v : buf.samples) v = r.uniform() - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(audio::resample_2x(buf));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Resample2x)->Arg(8000)->Arg(80000);

void BM_Augment(benchmark::State& state) {
  Rng r(4);
  audio::AudioBuffer buf;
  buf.samples.resize(16000);
  for (auto& v : buf.samples) v = 0.3 * (r.uniform() - 0.5);
  const audio::AugmentSpec spec{3.0, 30.0, 1.1, 1.0, 5};
  for (auto _ : state) benchmark::DoNotOptimize(audio::augment(buf, spec));
}
BENCHMARK(BM_Augment)->Unit(benchmark::kMillisecond);

}  // namespace
