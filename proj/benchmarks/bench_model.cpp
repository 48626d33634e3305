#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "subvec/cooc.hpp"
#include "subvec/embedding.hpp"
#include "subvec/eval.hpp"

namespace {

subvec::TokenStream topic_corpus(std::size_t n_sentences) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<std::size_t> word(0, 19);
  subvec::TokenStream stream;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    const char* prefix = s % 2 == 0 ? "alef" : "bet";
    std::vector<std::string> sentence(16);
    for (auto& t : sentence) t = prefix + std::to_string(word(rng));
    stream.sentences.push_back(std::move(sentence));
  }
  return stream;
}

subvec::TrainConfig bench_config() {
  subvec::TrainConfig cfg;
  cfg.dim = 32;
  cfg.epochs = 1;
  cfg.subsample_t = 1.0;
  cfg.subword.bucket_count = 1u << 17;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

static void BM_TrainEpoch(benchmark::State& state) {
  const auto corpus = topic_corpus(static_cast<std::size_t>(state.range(0)));
  const auto vocab = subvec::Vocabulary::build(corpus, 1);
  const auto cfg = bench_config();
  for (auto _ : state) {
    state.PauseTiming();
    subvec::EmbeddingModel model(vocab, cfg);
    state.ResumeTiming();
    benchmark::DoNotOptimize(subvec::train(model, corpus));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus.token_count()));
}
BENCHMARK(BM_TrainEpoch)->Range(64, 1024)->Unit(benchmark::kMillisecond);

static void BM_NearestNeighbors(benchmark::State& state) {
  const auto corpus = topic_corpus(512);
  const auto vocab = subvec::Vocabulary::build(corpus, 1);
  subvec::EmbeddingModel model(vocab, bench_config());
  subvec::train(model, corpus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.nearest_neighbors("alef0", 10));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NearestNeighbors);

static void BM_BuildCooc(benchmark::State& state) {
  const auto corpus = topic_corpus(static_cast<std::size_t>(state.range(0)));
  const auto vocab = subvec::Vocabulary::build(corpus, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::build_cooc(corpus, vocab, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * corpus.token_count()));
}
BENCHMARK(BM_BuildCooc)->Range(256, 4096);

static void BM_Spearman(benchmark::State& state) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = value(rng);
    y[i] = value(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::spearman(x, y));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Spearman)->Range(64, 1 << 14);

static void BM_Project2d(benchmark::State& state) {
  const auto corpus = topic_corpus(512);
  const auto vocab = subvec::Vocabulary::build(corpus, 1);
  subvec::EmbeddingModel model(vocab, bench_config());
  subvec::train(model, corpus);
  std::vector<std::string> words;
  for (std::uint32_t id = 0; id < vocab.size(); ++id) words.push_back(vocab.token_of(id));
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::project_2d(model, words));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Project2d)->Unit(benchmark::kMillisecond);
