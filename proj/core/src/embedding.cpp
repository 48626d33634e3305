#include "subvec/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "subvec/errors.hpp"

namespace subvec {

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(lr0 > 0.0f)) throw std::invalid_argument("learning rate must be > 0");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (!(subsample_t > 0.0)) throw std::invalid_argument("subsample threshold must be > 0");
  if (!subword.valid()) throw std::invalid_argument("subword config: need 1 <= min_n <= max_n and bucket_count >= 1");
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, const TrainConfig& cfg)
    : vocab_(std::move(vocab)), config_(cfg) {
  config_.validate();
  if (vocab_.size() == 0) throw EmptyVocabulary();

  const std::size_t v = vocab_.size();
  const std::size_t rows = v + config_.subword.bucket_count;
  const float bound = 1.0f / static_cast<float>(config_.dim);

  input_.resize(rows * config_.dim);
  std::mt19937 rng(mix_seed(config_.seed, 0));
  for (auto& x : input_) x = next_uniform(rng, -bound, bound);

  output_.assign(v * config_.dim, 0.0f);
  rebuild_row_cache();
}

void EmbeddingModel::rebuild_row_cache() {
  const std::uint64_t v = vocab_.size();
  cached_rows_.resize(v);
  for (std::uint32_t id = 0; id < v; ++id) {
    auto& rows = cached_rows_[id];
    rows.clear();
    rows.push_back(id);
    for (const auto& ngram : extract_ngrams(vocab_.token_of(id), config_.subword)) {
      rows.push_back(v + hash_ngram(ngram, config_.subword.bucket_count));
    }
  }
}

std::span<float> EmbeddingModel::input_row(std::uint64_t row) {
  return {input_.data() + row * config_.dim, config_.dim};
}
std::span<const float> EmbeddingModel::input_row(std::uint64_t row) const {
  return {input_.data() + row * config_.dim, config_.dim};
}
std::span<float> EmbeddingModel::output_row(std::uint32_t id) {
  return {output_.data() + static_cast<std::size_t>(id) * config_.dim, config_.dim};
}
std::span<const float> EmbeddingModel::output_row(std::uint32_t id) const {
  return {output_.data() + static_cast<std::size_t>(id) * config_.dim, config_.dim};
}

std::span<const std::uint64_t> EmbeddingModel::rows_of(std::uint32_t vocab_id) const {
  if (vocab_id >= cached_rows_.size()) throw UnknownId(vocab_id);
  return cached_rows_[vocab_id];
}

void EmbeddingModel::compose_rows(std::span<const std::uint64_t> rows, double* out) const {
  const std::size_t dim = config_.dim;
  std::fill(out, out + dim, 0.0);
  for (const auto row : rows) {
    const float* src = input_.data() + row * dim;
    for (std::size_t d = 0; d < dim; ++d) out[d] += src[d];
  }
  if (config_.compose == Composition::kMean && rows.size() > 1) {
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (std::size_t d = 0; d < dim; ++d) out[d] *= inv;
  }
}

std::vector<float> EmbeddingModel::word_vector(std::string_view word) const {
  std::vector<std::uint64_t> oov_rows;
  std::span<const std::uint64_t> rows;
  if (const auto id = vocab_.id_of(word)) {
    rows = cached_rows_[*id];
  } else {
    for (const auto& ngram : extract_ngrams(word, config_.subword)) {
      oov_rows.push_back(vocab_.size() + hash_ngram(ngram, config_.subword.bucket_count));
    }
    if (oov_rows.empty()) throw NoRepresentation(std::string(word));
    rows = oov_rows;
  }

  std::vector<double> acc(config_.dim);
  compose_rows(rows, acc.data());
  std::vector<float> vec(config_.dim);
  for (std::size_t d = 0; d < config_.dim; ++d) vec[d] = static_cast<float>(acc[d]);
  return vec;
}

namespace {

struct Scored {
  std::uint32_t id;
  double cos;
};

// Ranks every vocabulary word against `target`, skipping `excluded` ids and
// words whose composed vector is zero.
std::vector<std::pair<std::string, double>> rank_by_cosine(
    const EmbeddingModel& model, std::span<const double> target,
    std::span<const std::uint32_t> excluded, std::size_t k) {
  double target_norm = 0.0;
  for (const double x : target) target_norm += x * x;
  if (target_norm == 0.0) throw ZeroVector();
  target_norm = std::sqrt(target_norm);

  const std::size_t dim = model.dim();
  std::vector<double> candidate(dim);
  std::vector<Scored> scored;
  scored.reserve(model.vocab().size());

  for (std::uint32_t id = 0; id < model.vocab().size(); ++id) {
    if (std::find(excluded.begin(), excluded.end(), id) != excluded.end()) continue;
    std::fill(candidate.begin(), candidate.end(), 0.0);
    const auto rows = model.rows_of(id);
    for (const auto row : rows) {
      const auto src = model.input_row(row);
      for (std::size_t d = 0; d < dim; ++d) candidate[d] += src[d];
    }
    if (model.config().compose == Composition::kMean && rows.size() > 1) {
      const double inv = 1.0 / static_cast<double>(rows.size());
      for (auto& x : candidate) x *= inv;
    }
    double dot = 0.0, norm = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      dot += candidate[d] * target[d];
      norm += candidate[d] * candidate[d];
    }
    if (norm == 0.0) continue;
    scored.push_back({id, dot / (std::sqrt(norm) * target_norm)});
  }

  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [](const Scored& a, const Scored& b) {
                      if (a.cos != b.cos) return a.cos > b.cos;
                      return a.id < b.id;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.emplace_back(model.vocab().token_of(scored[i].id), scored[i].cos);
  }
  return out;
}

std::vector<double> widen(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

std::vector<std::pair<std::string, double>> EmbeddingModel::nearest_neighbors(
    std::string_view word, std::size_t k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto target = widen(word_vector(word));
  std::vector<std::uint32_t> excluded;
  if (const auto id = vocab_.id_of(word)) excluded.push_back(*id);
  return rank_by_cosine(*this, target, excluded, k);
}

std::vector<std::pair<std::string, double>> EmbeddingModel::analogy(std::string_view a,
                                                                    std::string_view b,
                                                                    std::string_view c,
                                                                    std::size_t k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto va = widen(word_vector(a));
  const auto vb = widen(word_vector(b));
  const auto vc = widen(word_vector(c));
  std::vector<double> target(config_.dim);
  for (std::size_t d = 0; d < config_.dim; ++d) target[d] = vb[d] - va[d] + vc[d];

  std::vector<std::uint32_t> excluded;
  for (const auto word : {a, b, c}) {
    if (const auto id = vocab_.id_of(word)) excluded.push_back(*id);
  }
  return rank_by_cosine(*this, target, excluded, k);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    dot += static_cast<double>(a[d]) * b[d];
    na += static_cast<double>(a[d]) * a[d];
    nb += static_cast<double>(b[d]) * b[d];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

float train_pair(EmbeddingModel& model, std::span<const std::uint64_t> center_rows,
                 std::uint32_t context_id, bool positive, float lr) {
  if (center_rows.empty()) throw std::invalid_argument("center_rows must be non-empty");
  if (!(lr > 0.0f)) throw std::invalid_argument("learning rate must be > 0");
  detail::SgnsWorkspace<float> ws(model.dim());
  return detail::sgns_pair_step<float>(center_rows, model.input_matrix().data(), model.dim(),
                                       model.output_row(context_id).data(),
                                       positive ? 1.0f : 0.0f, lr, ws);
}

namespace {

struct WorkerResult {
  double loss = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t skipped_negatives = 0;
};

}  // namespace

TrainStats train(EmbeddingModel& model, const TokenStream& stream,
                 const TrainProgressFn& progress) {
  const TrainConfig& cfg = model.config();
  cfg.validate();
  const Vocabulary& vocab = model.vocab();

  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(stream.sentences.size());
  std::uint64_t in_vocab_tokens = 0;
  for (const auto& sentence : stream.sentences) {
    std::vector<std::uint32_t> ids;
    ids.reserve(sentence.size());
    for (const auto& token : sentence) {
      if (const auto id = vocab.id_of(token)) ids.push_back(*id);
    }
    if (!ids.empty()) {
      in_vocab_tokens += ids.size();
      sentences.push_back(std::move(ids));
    }
  }
  if (in_vocab_tokens == 0) throw EmptyCorpus();

  const NegativeTable negative_table(vocab, cfg.negative_alpha);
  std::vector<double> discard(vocab.size());
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    discard[id] = vocab.discard_probability(id, cfg.subsample_t);
  }

  const std::uint64_t total_expected = in_vocab_tokens * cfg.epochs;
  std::atomic<std::uint64_t> processed{0};

  float* const input = model.input_matrix().data();
  float* const output = model.output_matrix().data();
  const std::size_t dim = cfg.dim;

  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min<std::size_t>(cfg.threads, sentences.size()));

  auto run_worker = [&](std::uint32_t epoch, std::size_t worker, WorkerResult& result) {
    std::mt19937 rng(mix_seed(cfg.seed, (static_cast<std::uint64_t>(epoch) << 20) | worker));
    detail::SgnsWorkspace<float> ws(dim);
    std::vector<std::uint32_t> kept;

    const std::size_t begin = sentences.size() * worker / n_workers;
    const std::size_t end = sentences.size() * (worker + 1) / n_workers;
    for (std::size_t s = begin; s < end; ++s) {
      const auto& sentence = sentences[s];
      const std::uint64_t before =
          processed.fetch_add(sentence.size(), std::memory_order_relaxed);
      const double done = static_cast<double>(before) / static_cast<double>(total_expected);
      const float lr = cfg.lr0 * static_cast<float>(std::max(0.0, 1.0 - done));
      if (lr <= 0.0f) continue;

      kept.clear();
      for (const auto id : sentence) {
        if (discard[id] > 0.0 && next_unit(rng) < discard[id]) continue;
        kept.push_back(id);
      }

      for (std::size_t p = 0; p < kept.size(); ++p) {
        const auto center_rows = model.rows_of(kept[p]);
        const std::size_t b = 1 + next_below(rng, cfg.window);
        const std::size_t lo = p >= b ? p - b : 0;
        const std::size_t hi = std::min(kept.size() - 1, p + b);
        for (std::size_t q = lo; q <= hi; ++q) {
          if (q == p) continue;
          const std::uint32_t context = kept[q];
          result.loss += detail::sgns_pair_step<float>(center_rows, input, dim,
                                                       output + static_cast<std::size_t>(context) * dim,
                                                       1.0f, lr, ws);
          ++result.pairs;
          for (std::uint32_t neg = 0; neg < cfg.negatives; ++neg) {
            std::uint32_t target = negative_table.sample(rng);
            for (int retry = 0; target == context && retry < 10; ++retry) {
              target = negative_table.sample(rng);
            }
            if (target == context) {
              ++result.skipped_negatives;
              continue;
            }
            result.loss += detail::sgns_pair_step<float>(center_rows, input, dim,
                                                         output + static_cast<std::size_t>(target) * dim,
                                                         0.0f, lr, ws);
            ++result.pairs;
          }
        }
      }
    }
  };

  TrainStats stats;
  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<WorkerResult> results(n_workers);
    if (n_workers == 1) {
      run_worker(epoch, 0, results[0]);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(n_workers);
      for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back(run_worker, epoch, w, std::ref(results[w]));
      }
      for (auto& t : pool) t.join();
    }

    double loss = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& r : results) {
      loss += r.loss;
      pairs += r.pairs;
      stats.skipped_negatives += r.skipped_negatives;
    }
    stats.pair_updates += pairs;
    const double mean_loss = pairs > 0 ? loss / static_cast<double>(pairs) : 0.0;
    stats.epoch_mean_loss.push_back(mean_loss);
    if (progress) {
      const double done = static_cast<double>(processed.load(std::memory_order_relaxed)) /
                          static_cast<double>(total_expected);
      progress(epoch, cfg.lr0 * static_cast<float>(std::max(0.0, 1.0 - done)), mean_loss);
    }
  }
  return stats;
}

}  // namespace subvec
