#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subvec/corpus.hpp"
#include "subvec/vocab.hpp"

namespace subvec {

inline constexpr std::uint32_t kDefaultCoocWindow = 1;

// Symmetric sparse co-occurrence counts. Every unordered position pair
// (p, q) with 0 < q - p <= window inside one sentence contributes one count
// to the token pair, so lookup(i, j) and lookup(j, i) see the same value.
class CoocTable {
 public:
  CoocTable() = default;
  CoocTable(std::uint32_t window, std::uint32_t vocab_size);

  void add_pair(std::uint32_t a, std::uint32_t b);
  void add_pair_count(std::uint32_t a, std::uint32_t b, std::uint64_t count);

  std::uint64_t lookup(std::uint32_t i, std::uint32_t j) const;
  std::uint64_t row_total(std::uint32_t id) const;
  bool has_row(std::uint32_t id) const;

  // Full row of a word: neighbor id -> count, both directions included.
  const std::unordered_map<std::uint32_t, std::uint64_t>& row(std::uint32_t id) const;

  std::uint32_t window() const noexcept { return window_; }
  std::uint32_t vocab_size() const noexcept { return static_cast<std::uint32_t>(rows_.size()); }

  // Stored unordered pairs (i <= j).
  std::uint64_t pair_entries() const;

 private:
  std::uint32_t window_ = kDefaultCoocWindow;
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> rows_;
  std::vector<std::uint64_t> row_totals_;
};

// Counts within-sentence neighbor pairs over the stream; tokens not in the
// vocabulary are ignored. Throws EmptyCorpus when no in-vocabulary token
// appears at all.
CoocTable build_cooc(const TokenStream& stream, const Vocabulary& vocab,
                     std::uint32_t window = kDefaultCoocWindow);

struct NeighborDistribution {
  std::uint32_t word_id = 0;
  std::unordered_map<std::uint32_t, double> neighbors;  // id -> count / row_total
};

// Throws UnknownWord when the word has no co-occurrence row.
NeighborDistribution neighbor_distribution(const CoocTable& table, std::uint32_t word_id);

// Cosine between the two words' neighbor distributions, in [0, 1]. Empty
// when either word lacks a row; that is a reportable out-of-vocabulary
// outcome, not an error.
std::optional<double> bigram_similarity(const CoocTable& table, std::uint32_t w1,
                                        std::uint32_t w2);

// A co-occurrence table bound to its token names, which makes it queryable
// by word and serializable on its own.
class CoocModel {
 public:
  CoocModel() = default;
  CoocModel(CoocTable table, const Vocabulary& vocab);

  std::optional<double> similarity(std::string_view w1, std::string_view w2) const;
  std::optional<std::uint32_t> id_of(std::string_view token) const;
  const CoocTable& table() const noexcept { return table_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  // Scans all words with a row and returns the k most similar, best first,
  // ties by token id.
  std::vector<std::pair<std::string, double>> nearest(std::string_view word, std::size_t k) const;

  // Text format: one header line `SUBCOOC01<TAB>window`, then
  // `token_i<TAB>token_j<TAB>count` lines. Lines are emitted with the two
  // tokens of a pair in byte order and sorted, so equal tables serialize to
  // identical bytes no matter how ids were assigned.
  void save(std::ostream& out) const;
  static CoocModel load(std::istream& in);

 private:
  CoocTable table_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

}  // namespace subvec
