#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subvec/vocab.hpp"

namespace subvec {

inline constexpr std::uint32_t kFnvOffsetBasis = 2166136261u;
inline constexpr std::uint32_t kFnvPrime = 16777619u;

struct SubwordConfig {
  std::uint32_t min_n = 3;
  std::uint32_t max_n = 6;
  std::uint64_t bucket_count = 2'000'000;
  // '<' and '>' markers distinguish prefixes and suffixes. Without them two
  // distinct words can share their whole n-gram set and collapse onto the
  // same rows, which is why they default on.
  bool boundary_markers = true;

  bool valid() const { return min_n >= 1 && min_n <= max_n && bucket_count >= 1; }
};

// FNV-1a over the UTF-8 bytes, 32-bit wrapping arithmetic. Stable across
// platforms, so saved models rehash identically everywhere.
inline std::uint32_t fnv1a(std::string_view bytes) {
  std::uint32_t h = kFnvOffsetBasis;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t bucket_count) {
  return fnv1a(ngram) % bucket_count;
}

// All contiguous substrings of the (optionally marker-wrapped) word with
// length in [min_n, max_n] Unicode scalars, shorter lengths first, left to
// right within a length. A word shorter than min_n yields none.
std::vector<std::string> extract_ngrams(std::string_view word, const SubwordConfig& cfg);

// Embedding rows backing one word: its vocabulary id when in vocabulary,
// plus one bucket row per n-gram, offset by the vocabulary size.
struct WordRowIds {
  std::optional<std::uint32_t> vocab_id;
  std::vector<std::string> ngrams;
  std::vector<std::uint64_t> row_ids;  // in [V, V + bucket_count)
};

// Throws NoRepresentation when the word is out of vocabulary and produces
// no n-gram of admissible length.
WordRowIds word_row_ids(std::string_view word, const Vocabulary& vocab, const SubwordConfig& cfg);

}  // namespace subvec
