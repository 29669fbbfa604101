#include <benchmark/benchmark.h>

#include "litstyle/learn.hpp"
#include "litstyle/topics.hpp"
#include "synth.hpp"

using namespace litstyle;

namespace {

// Time per Gibbs sweep over 30k tokens, for K topics.
void BM_LdaSweep(benchmark::State& state) {
  const auto corpus = synth::disjoint_topic_corpus({});
  LdaConfig c;
  c.topics = static_cast<std::size_t>(state.range(0));
  c.iterations = 10;
  std::size_t tokens = 0;
  for (const auto& d : corpus.docs) tokens += d.size();
  for (auto _ : state) benchmark::DoNotOptimize(fit_lda(corpus.docs, corpus.vocab, c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tokens * c.iterations));
}
BENCHMARK(BM_LdaSweep)->Arg(3)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LdaInfer(benchmark::State& state) {
  const auto corpus = synth::disjoint_topic_corpus({});
  LdaConfig c;
  c.topics = 3;
  c.iterations = 50;
  const auto model = fit_lda(corpus.docs, corpus.vocab, c);
  for (auto _ : state) benchmark::DoNotOptimize(infer_topics(model, corpus.docs[0], 200, 1));
}
BENCHMARK(BM_LdaInfer);

// One full-batch epoch: loss plus gradient of the 100-25 network.
void BM_MlpEpoch(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto table = synth::gaussian_blobs({4, rows / 4, 5, 5.0, 0, 1});
  MlpConfig config;
  const Network net = Network::init(5, 4, config, 1);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(table.rows.size()), 5);
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < 5; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i].values[j];
    labels.push_back(table.rows[i].label);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.loss(x, labels, 0.01));
    benchmark::DoNotOptimize(net.gradient(x, labels, 0.01));
  }
}
BENCHMARK(BM_MlpEpoch)->Arg(200)->Arg(800);

void BM_MlpTrain(benchmark::State& state) {
  const auto table = synth::gaussian_blobs({4, 50, 5, 5.0, 0, 1});
  MlpConfig config;
  config.tours = 1;
  config.max_epochs = 200;
  for (auto _ : state) benchmark::DoNotOptimize(train_mlp(table, config));
}
BENCHMARK(BM_MlpTrain)->Unit(benchmark::kMillisecond);

}  // namespace
