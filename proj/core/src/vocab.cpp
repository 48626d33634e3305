#include "subvec/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "subvec/errors.hpp"

namespace subvec {

Vocabulary Vocabulary::build(const TokenStream& stream, std::uint32_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& sentence : stream.sentences) {
    for (const auto& token : sentence) ++counts[token];
  }

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_count) entries.emplace_back(token, count);
  }
  if (entries.empty()) throw EmptyVocabulary();

  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return from_entries(std::move(entries), min_count);
}

Vocabulary Vocabulary::from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                    std::uint32_t min_count) {
  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.tokens_.reserve(entries.size());
  vocab.counts_.reserve(entries.size());
  for (auto& [token, count] : entries) {
    vocab.ids_.emplace(token, static_cast<std::uint32_t>(vocab.tokens_.size()));
    vocab.tokens_.push_back(std::move(token));
    vocab.counts_.push_back(count);
    vocab.total_tokens_ += count;
  }
  return vocab;
}

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token_of(std::uint32_t id) const {
  if (id >= tokens_.size()) throw UnknownId(id);
  return tokens_[id];
}

std::uint64_t Vocabulary::count_of(std::uint32_t id) const {
  if (id >= counts_.size()) throw UnknownId(id);
  return counts_[id];
}

double Vocabulary::discard_probability(std::uint32_t id, double threshold) const {
  if (!(threshold > 0.0)) throw std::invalid_argument("subsampling threshold must be > 0");
  const double f = static_cast<double>(count_of(id)) / static_cast<double>(total_tokens_);
  const double p = 1.0 - std::sqrt(threshold / f) - threshold / f;
  return std::clamp(p, 0.0, 1.0);
}

void Vocabulary::write_counts(std::ostream& out) const {
  for (std::uint32_t id = 0; id < size(); ++id) {
    out << tokens_[id] << '\t' << counts_[id] << '\n';
  }
}

NegativeTable::NegativeTable(const Vocabulary& vocab, double alpha) : alpha_(alpha) {
  const std::uint32_t n = vocab.size();
  prob_.resize(n);
  accept_.resize(n);
  alias_.resize(n);

  double norm = 0.0;
  for (std::uint32_t id = 0; id < n; ++id) {
    prob_[id] = std::pow(static_cast<double>(vocab.count_of(id)), alpha);
    norm += prob_[id];
  }
  for (auto& p : prob_) p /= norm;

  // Vose's alias method.
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::uint32_t id = 0; id < n; ++id) {
    scaled[id] = prob_[id] * n;
    (scaled[id] < 1.0 ? small : large).push_back(id);
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    const auto l = large.back();
    small.pop_back();
    large.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (auto id : large) {
    accept_[id] = 1.0;
    alias_[id] = id;
  }
  for (auto id : small) {  // numerical leftovers
    accept_[id] = 1.0;
    alias_[id] = id;
  }
}

std::uint32_t NegativeTable::sample(std::mt19937& rng) const {
  const std::uint32_t slot = next_below(rng, size());
  return next_unit(rng) < accept_[slot] ? slot : alias_[slot];
}

double NegativeTable::probability(std::uint32_t id) const {
  if (id >= prob_.size()) throw UnknownId(id);
  return prob_[id];
}

std::uint32_t sample_negative(const NegativeTable& table, std::mt19937& rng,
                              std::uint32_t exclude) {
  if (table.size() < 2) throw std::invalid_argument("need at least 2 ids to exclude one");
  std::uint32_t id;
  do {
    id = table.sample(rng);
  } while (id == exclude);
  return id;
}

}  // namespace subvec
