#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "subvec/subword.hpp"

namespace {

std::vector<std::string> random_words(std::size_t count, std::size_t min_len,
                                      std::size_t max_len) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::vector<std::string> words(count);
  for (auto& w : words) {
    w.resize(len(rng));
    for (auto& c : w) c = static_cast<char>(letter(rng));
  }
  return words;
}

}  // namespace

static void BM_ExtractNgrams(benchmark::State& state) {
  const auto words = random_words(1024, 4, 12);
  subvec::SubwordConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::extract_ngrams(words[i++ & 1023], cfg));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExtractNgrams);

static void BM_HashNgram(benchmark::State& state) {
  const auto words = random_words(1024, 3, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::hash_ngram(words[i++ & 1023], 2'000'000));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HashNgram);

static void BM_WordRowIds(benchmark::State& state) {
  const auto words = random_words(1024, 4, 12);
  subvec::TokenStream stream;
  stream.sentences.push_back(words);
  const auto vocab = subvec::Vocabulary::build(stream, 1);
  subvec::SubwordConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subvec::word_row_ids(words[i++ & 1023], vocab, cfg));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WordRowIds);
