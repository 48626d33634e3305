#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "subvec/corpus.hpp"
#include "subvec/vocab.hpp"

namespace {

std::string noisy_text(std::size_t target_bytes) {
  static const std::vector<std::string> pieces = {
      "lorem", "ipsum", "dolor",  "sit",   "amet", "(",  ")",          "\"",
      "!",     ",",     ".",      "  ",    " ",    "\n", "\xdb\x94",   "consectetur",
      "adipi", "elit",  "\xd8\xa7\xd8\xb1\xd8\xaf\xd9\x88",
  };
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::string text;
  while (text.size() < target_bytes) {
    text += pieces[pick(rng)];
    text += ' ';
  }
  return text;
}

subvec::TokenStream word_stream(std::size_t n_sentences, std::size_t n_words) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<std::size_t> word(0, n_words - 1);
  subvec::TokenStream stream;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    std::vector<std::string> sentence(14);
    for (auto& t : sentence) t = "w" + std::to_string(word(rng));
    stream.sentences.push_back(std::move(sentence));
  }
  return stream;
}

}  // namespace

static void BM_Normalize(benchmark::State& state) {
  const auto text = noisy_text(static_cast<std::size_t>(state.range(0)));
  const auto removal = subvec::RemovalSet::standard();
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::normalize(text, removal));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Normalize)->Range(1 << 12, 1 << 20);

static void BM_Tokenize(benchmark::State& state) {
  const auto normalized = subvec::normalize(noisy_text(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::tokenize(normalized));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * normalized.str().size()));
}
BENCHMARK(BM_Tokenize)->Range(1 << 12, 1 << 20);

static void BM_BuildVocab(benchmark::State& state) {
  const auto stream = word_stream(static_cast<std::size_t>(state.range(0)), 2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::Vocabulary::build(stream, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * stream.token_count()));
}
BENCHMARK(BM_BuildVocab)->Range(1 << 8, 1 << 13);

BENCHMARK_MAIN();
