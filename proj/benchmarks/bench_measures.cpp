#include <benchmark/benchmark.h>

#include "litstyle/complexity.hpp"
#include "litstyle/corpus.hpp"
#include "synth.hpp"

using namespace litstyle;

namespace {

// Entropy profile of one text: 100 token-equal segments.
void BM_EntropyProfile(benchmark::State& state) {
  synth::DecaySpec spec;
  spec.tokens = static_cast<std::size_t>(state.range(0));
  const auto text = synth::decay_text("t", true, spec, 1);
  const auto segments = segment_equal(text, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(segment_entropy(text.doc_id, segments));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EntropyProfile)->Arg(10'000)->Arg(100'000);

void BM_DecayFit(benchmark::State& state) {
  const auto text = synth::decay_text("t", true, {}, 2);
  const auto h = segment_entropy(text.doc_id, segment_equal(text, 100)).h;
  for (auto _ : state) benchmark::DoNotOptimize(decay_fit(h));
}
BENCHMARK(BM_DecayFit);

void BM_Hellinger(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto p = synth::random_distribution(k, 1);
  const auto q = synth::random_distribution(k, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hellinger(p, q));
}
BENCHMARK(BM_Hellinger)->Arg(50)->Arg(500);

// Harmony plus variety for a 50-topic book of `range` chapters.
void BM_HarmonyVariety(benchmark::State& state) {
  const auto book = synth::random_distribution(50, 1);
  std::vector<std::vector<double>> chapters;
  for (int c = 0; c < state.range(0); ++c) chapters.push_back(synth::random_distribution(50, 10 + c));
  for (auto _ : state) {
    benchmark::DoNotOptimize(harmony(book, chapters));
    benchmark::DoNotOptimize(variety(chapters));
  }
}
BENCHMARK(BM_HarmonyVariety)->Arg(10)->Arg(60);

void BM_Dispersion(benchmark::State& state) {
  const auto chunks = synth::random_vectors(static_cast<std::size_t>(state.range(0)), 300, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(intra_textual_variance(chunks));
    benchmark::DoNotOptimize(stepwise_distance(chunks));
  }
}
BENCHMARK(BM_Dispersion)->Arg(100)->Arg(1000);

// Quadratic in the sequence length.
void BM_ForwardFlow(benchmark::State& state) {
  const auto words = synth::random_vectors(static_cast<std::size_t>(state.range(0)), 300, 4);
  for (auto _ : state) benchmark::DoNotOptimize(forward_flow(words));
}
BENCHMARK(BM_ForwardFlow)->Arg(100)->Arg(400);

}  // namespace
