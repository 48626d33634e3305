#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subvec/corpus.hpp"

namespace subvec {

inline constexpr std::uint32_t kDefaultMinCount = 5;
inline constexpr double kDefaultSubsampleThreshold = 1e-4;
inline constexpr double kDefaultNegativeAlpha = 0.75;

// Token -> dense id map with exact corpus frequencies. Ids are assigned in
// descending frequency order, ties broken lexicographically, so the same
// stream always produces the same vocabulary.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Counts every token, drops those below min_count. Throws EmptyVocabulary
  // if nothing survives.
  static Vocabulary build(const TokenStream& stream, std::uint32_t min_count = kDefaultMinCount);

  std::optional<std::uint32_t> id_of(std::string_view token) const;
  const std::string& token_of(std::uint32_t id) const;
  std::uint64_t count_of(std::uint32_t id) const;

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(tokens_.size()); }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  std::uint32_t min_count() const noexcept { return min_count_; }

  // Probability of skipping this token during training:
  //   p = 1 - sqrt(t/f) - t/f, clipped to [0, 1], with f the corpus frequency.
  double discard_probability(std::uint32_t id, double threshold) const;

  // token<TAB>count per line, descending count (= id order).
  void write_counts(std::ostream& out) const;

  // Rebuilds a vocabulary from entries prepared elsewhere (model loading).
  // Entries must already be in id order with non-increasing counts.
  static Vocabulary from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                 std::uint32_t min_count);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> ids_;
  std::uint64_t total_tokens_ = 0;
  std::uint32_t min_count_ = 1;
};

// Draws vocabulary ids with P(id) proportional to count^alpha. Walker alias
// table: O(V) setup, O(1) per draw, exact probabilities.
class NegativeTable {
 public:
  explicit NegativeTable(const Vocabulary& vocab, double alpha = kDefaultNegativeAlpha);

  std::uint32_t sample(std::mt19937& rng) const;

  // Analytic probability of drawing `id`, for verification.
  double probability(std::uint32_t id) const;

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(accept_.size()); }
  double alpha() const noexcept { return alpha_; }

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
  std::vector<double> prob_;
  double alpha_;
};

// Draws until the result differs from `exclude`. Requires a vocabulary of
// at least two ids.
std::uint32_t sample_negative(const NegativeTable& table, std::mt19937& rng, std::uint32_t exclude);

// Deterministic helpers over std::mt19937. The standard distributions are
// implementation-defined, these are not, so seeded runs are bit-stable
// across compilers.
inline double next_unit(std::mt19937& rng) {
  return static_cast<double>(rng()) * (1.0 / 4294967296.0);  // [0, 1)
}

inline std::uint32_t next_below(std::mt19937& rng, std::uint32_t n) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(rng()) * n) >> 32);
}

inline float next_uniform(std::mt19937& rng, float lo, float hi) {
  const float unit = static_cast<float>(rng() >> 8) * (1.0f / 16777216.0f);
  return lo + (hi - lo) * unit;
}

inline std::uint32_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return static_cast<std::uint32_t>(z ^ (z >> 31));
}

}  // namespace subvec
