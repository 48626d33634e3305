#include "subvec/cooc.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "subvec/errors.hpp"

namespace subvec {

CoocTable::CoocTable(std::uint32_t window, std::uint32_t vocab_size)
    : window_(window), rows_(vocab_size), row_totals_(vocab_size, 0) {}

void CoocTable::add_pair(std::uint32_t a, std::uint32_t b) { add_pair_count(a, b, 1); }

void CoocTable::add_pair_count(std::uint32_t a, std::uint32_t b, std::uint64_t count) {
  rows_[a][b] += count;
  row_totals_[a] += count;
  if (a != b) {
    rows_[b][a] += count;
    row_totals_[b] += count;
  }
}

std::uint64_t CoocTable::lookup(std::uint32_t i, std::uint32_t j) const {
  if (i >= rows_.size() || j >= rows_.size()) return 0;
  const auto& row = rows_[i];
  const auto it = row.find(j);
  return it == row.end() ? 0 : it->second;
}

std::uint64_t CoocTable::row_total(std::uint32_t id) const {
  return id < row_totals_.size() ? row_totals_[id] : 0;
}

bool CoocTable::has_row(std::uint32_t id) const {
  return id < rows_.size() && !rows_[id].empty();
}

const std::unordered_map<std::uint32_t, std::uint64_t>& CoocTable::row(std::uint32_t id) const {
  if (!has_row(id)) throw UnknownWord("id " + std::to_string(id));
  return rows_[id];
}

std::uint64_t CoocTable::pair_entries() const {
  std::uint64_t n = 0;
  for (std::uint32_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [j, count] : rows_[i]) {
      if (j >= i) ++n;
    }
  }
  return n;
}

CoocTable build_cooc(const TokenStream& stream, const Vocabulary& vocab, std::uint32_t window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");

  CoocTable table(window, vocab.size());
  std::uint64_t in_vocab = 0;
  std::vector<std::uint32_t> ids;
  for (const auto& sentence : stream.sentences) {
    ids.clear();
    for (const auto& token : sentence) {
      if (const auto id = vocab.id_of(token)) ids.push_back(*id);
    }
    in_vocab += ids.size();
    for (std::size_t p = 0; p < ids.size(); ++p) {
      const std::size_t hi = std::min(ids.size() - 1, p + window);
      for (std::size_t q = p + 1; q <= hi; ++q) table.add_pair(ids[p], ids[q]);
    }
  }
  if (in_vocab == 0) throw EmptyCorpus();
  return table;
}

NeighborDistribution neighbor_distribution(const CoocTable& table, std::uint32_t word_id) {
  if (!table.has_row(word_id)) throw UnknownWord("id " + std::to_string(word_id));
  NeighborDistribution dist;
  dist.word_id = word_id;
  const double total = static_cast<double>(table.row_total(word_id));
  for (const auto& [neighbor, count] : table.row(word_id)) {
    dist.neighbors.emplace(neighbor, static_cast<double>(count) / total);
  }
  return dist;
}

std::optional<double> bigram_similarity(const CoocTable& table, std::uint32_t w1,
                                        std::uint32_t w2) {
  if (!table.has_row(w1) || !table.has_row(w2)) return std::nullopt;
  if (w1 == w2) return 1.0;

  // Cosine over the union of neighbors. Row totals cancel, so counts work
  // directly and the result is invariant under scaling every count.
  const auto& row1 = table.row(w1);
  const auto& row2 = table.row(w2);
  const auto& small = row1.size() <= row2.size() ? row1 : row2;
  const auto& large = row1.size() <= row2.size() ? row2 : row1;

  double dot = 0.0;
  for (const auto& [neighbor, count] : small) {
    const auto it = large.find(neighbor);
    if (it != large.end()) dot += static_cast<double>(count) * static_cast<double>(it->second);
  }
  if (dot == 0.0) return 0.0;

  double n1 = 0.0, n2 = 0.0;
  for (const auto& [neighbor, count] : row1) n1 += static_cast<double>(count) * count;
  for (const auto& [neighbor, count] : row2) n2 += static_cast<double>(count) * count;
  return dot / (std::sqrt(n1) * std::sqrt(n2));
}

CoocModel::CoocModel(CoocTable table, const Vocabulary& vocab) : table_(std::move(table)) {
  tokens_.reserve(vocab.size());
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    tokens_.push_back(vocab.token_of(id));
    ids_.emplace(tokens_.back(), id);
  }
}

std::optional<std::uint32_t> CoocModel::id_of(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> CoocModel::similarity(std::string_view w1, std::string_view w2) const {
  const auto id1 = id_of(w1);
  const auto id2 = id_of(w2);
  if (!id1 || !id2) return std::nullopt;
  return bigram_similarity(table_, *id1, *id2);
}

std::vector<std::pair<std::string, double>> CoocModel::nearest(std::string_view word,
                                                               std::size_t k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto query = id_of(word);
  if (!query || !table_.has_row(*query)) throw UnknownWord(std::string(word));

  struct Scored {
    std::uint32_t id;
    double sim;
  };
  std::vector<Scored> scored;
  for (std::uint32_t id = 0; id < table_.vocab_size(); ++id) {
    if (id == *query || !table_.has_row(id)) continue;
    if (const auto sim = bigram_similarity(table_, *query, id)) scored.push_back({id, *sim});
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [](const Scored& a, const Scored& b) {
                      if (a.sim != b.sim) return a.sim > b.sim;
                      return a.id < b.id;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.emplace_back(tokens_[scored[i].id], scored[i].sim);
  return out;
}

void CoocModel::save(std::ostream& out) const {
  std::vector<std::pair<std::string_view, std::string_view>> lines;
  lines.reserve(table_.pair_entries());
  for (std::uint32_t i = 0; i < table_.vocab_size(); ++i) {
    if (!table_.has_row(i)) continue;
    for (const auto& [j, count] : table_.row(i)) {
      if (j < i) continue;
      std::string_view a = tokens_[i];
      std::string_view b = tokens_[j];
      if (b < a) std::swap(a, b);
      lines.emplace_back(a, b);
    }
  }
  std::sort(lines.begin(), lines.end());

  out << "SUBCOOC01\t" << table_.window() << '\n';
  for (const auto& [a, b] : lines) {
    out << a << '\t' << b << '\t' << table_.lookup(ids_.at(std::string(a)), ids_.at(std::string(b)))
        << '\n';
  }
  if (!out) throw IoError("co-occurrence model write failed");
}

CoocModel CoocModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty co-occurrence model");
  std::uint32_t window = 0;
  {
    std::istringstream hs(line);
    std::string magic;
    if (!std::getline(hs, magic, '\t') || magic != "SUBCOOC01" || !(hs >> window) || window < 1) {
      throw IoError("not a subvec co-occurrence model (bad header)");
    }
  }

  struct RawPair {
    std::string a, b;
    std::uint64_t count;
  };
  std::vector<RawPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError(line_no, "expected token<TAB>token<TAB>count");
    RawPair p;
    p.a = line.substr(0, t1);
    p.b = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      p.count = std::stoull(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad count");
    }
    if (p.a.empty() || p.b.empty() || p.count == 0) throw ParseError(line_no, "bad pair");
    pairs.push_back(std::move(p));
  }

  CoocModel model;
  auto intern = [&model](const std::string& token) {
    const auto it = model.ids_.find(token);
    if (it != model.ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(model.tokens_.size());
    model.tokens_.push_back(token);
    model.ids_.emplace(token, id);
    return id;
  };

  for (const auto& p : pairs) {
    intern(p.a);
    intern(p.b);
  }
  model.table_ = CoocTable(window, static_cast<std::uint32_t>(model.tokens_.size()));
  for (const auto& p : pairs) {
    model.table_.add_pair_count(model.ids_.at(p.a), model.ids_.at(p.b), p.count);
  }
  return model;
}

}  // namespace subvec
