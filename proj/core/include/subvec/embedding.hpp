#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subvec/corpus.hpp"
#include "subvec/subword.hpp"
#include "subvec/vocab.hpp"

namespace subvec {

// How a word vector is assembled from the word's rows. Mean matches the
// reference update scaling; sum is the literal reading of the subword
// description and differs only by a constant factor absorbed by the
// learning rate.
enum class Composition : std::uint8_t { kMean = 0, kSum = 1 };

struct TrainConfig {
  std::uint32_t dim = 100;
  std::uint32_t epochs = 5;
  float lr0 = 0.05f;
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  std::uint32_t min_count = kDefaultMinCount;
  double subsample_t = kDefaultSubsampleThreshold;
  double negative_alpha = kDefaultNegativeAlpha;
  SubwordConfig subword;
  Composition compose = Composition::kMean;
  std::uint32_t threads = 1;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on an out-of-range field.
  void validate() const;
};

struct TrainStats {
  std::vector<double> epoch_mean_loss;  // mean logistic loss per pair update
  std::uint64_t pair_updates = 0;
  std::uint64_t skipped_negatives = 0;
};

// (epoch index, current learning rate, mean loss so far this epoch)
using TrainProgressFn = std::function<void(std::uint32_t, float, double)>;

namespace detail {

template <typename Real>
struct SgnsWorkspace {
  std::vector<Real> hidden;
  std::vector<Real> out_before;
  explicit SgnsWorkspace(std::size_t dim) : hidden(dim), out_before(dim) {}
};

template <typename Real>
Real softplus(Real x) {
  return x > Real(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// One binary logistic step of skip-gram negative sampling.
//
// h is the mean of the center rows, s = sigmoid(h . out_row). The output row
// moves by lr*(label - s)*h and every center row by lr*(label - s)*out_row/n,
// with out_row taken before its own update so both moves follow the gradient
// at the current point. Returns the pre-update loss
//   -(label*log s + (1-label)*log(1-s)).
//
// Templated so tests can run the identical arithmetic in double when
// comparing against finite differences.
template <typename Real>
Real sgns_pair_step(std::span<const std::uint64_t> center_rows, Real* input, std::size_t dim,
                    Real* out_row, Real label, Real lr, SgnsWorkspace<Real>& ws) {
  const std::size_t n = center_rows.size();
  const Real inv_n = Real(1) / static_cast<Real>(n);

  for (std::size_t d = 0; d < dim; ++d) ws.hidden[d] = Real(0);
  for (const auto row : center_rows) {
    const Real* src = input + row * dim;
    for (std::size_t d = 0; d < dim; ++d) ws.hidden[d] += src[d];
  }
  for (std::size_t d = 0; d < dim; ++d) ws.hidden[d] *= inv_n;

  Real z = Real(0);
  for (std::size_t d = 0; d < dim; ++d) z += ws.hidden[d] * out_row[d];

  const Real s = Real(1) / (Real(1) + std::exp(-z));
  const Real loss = label > Real(0.5) ? softplus(-z) : softplus(z);
  const Real g = lr * (label - s);

  for (std::size_t d = 0; d < dim; ++d) ws.out_before[d] = out_row[d];
  for (std::size_t d = 0; d < dim; ++d) out_row[d] += g * ws.hidden[d];

  const Real center_scale = g * inv_n;
  for (const auto row : center_rows) {
    Real* dst = input + row * dim;
    for (std::size_t d = 0; d < dim; ++d) dst[d] += center_scale * ws.out_before[d];
  }
  return loss;
}

}  // namespace detail

// Subword skip-gram model: an input matrix with one row per vocabulary word
// followed by one row per hash bucket, and an output matrix with one row per
// vocabulary word.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Fresh model: input rows i.i.d. uniform in [-1/dim, +1/dim] from the
  // seeded generator, output rows zero. Deterministic given cfg.seed.
  EmbeddingModel(Vocabulary vocab, const TrainConfig& cfg);

  const Vocabulary& vocab() const noexcept { return vocab_; }
  const TrainConfig& config() const noexcept { return config_; }
  const SubwordConfig& subword() const noexcept { return config_.subword; }
  std::uint32_t dim() const noexcept { return config_.dim; }
  std::size_t input_rows() const noexcept { return vocab_.size() + config_.subword.bucket_count; }

  std::span<float> input_row(std::uint64_t row);
  std::span<const float> input_row(std::uint64_t row) const;
  std::span<float> output_row(std::uint32_t id);
  std::span<const float> output_row(std::uint32_t id) const;
  std::span<const float> input_matrix() const noexcept { return input_; }
  std::span<const float> output_matrix() const noexcept { return output_; }
  std::span<float> input_matrix() noexcept { return input_; }
  std::span<float> output_matrix() noexcept { return output_; }

  // Input rows backing a vocabulary word: its own row plus its n-gram
  // buckets. Cached once per model.
  std::span<const std::uint64_t> rows_of(std::uint32_t vocab_id) const;

  // Composed vector for any representable word; an out-of-vocabulary word
  // is assembled from its n-gram rows alone. Throws NoRepresentation.
  std::vector<float> word_vector(std::string_view word) const;

  std::vector<std::pair<std::string, double>> nearest_neighbors(std::string_view word,
                                                                std::size_t k) const;

  // Tokens closest to vector(b) - vector(a) + vector(c), excluding a, b, c.
  std::vector<std::pair<std::string, double>> analogy(std::string_view a, std::string_view b,
                                                      std::string_view c, std::size_t k) const;

  // Binary model format, magic SUBVEC01, little-endian matrices.
  void save(std::ostream& out) const;
  static EmbeddingModel load(std::istream& in);

  // Text interchange format: header "V dim", then one token and its
  // composed vector per line.
  void write_vec(std::ostream& out) const;

 private:
  void rebuild_row_cache();
  void compose_rows(std::span<const std::uint64_t> rows, double* out) const;

  Vocabulary vocab_;
  TrainConfig config_;
  std::vector<float> input_;
  std::vector<float> output_;
  std::vector<std::vector<std::uint64_t>> cached_rows_;
};

// One logistic SGD step against output row `context_id`; positive pairs push
// the pair together, negative pairs apart. Returns the pre-update loss.
float train_pair(EmbeddingModel& model, std::span<const std::uint64_t> center_rows,
                 std::uint32_t context_id, bool positive, float lr);

// Skip-gram training with negative sampling over the stream. Unknown tokens
// are skipped; per position the window half-width is drawn uniformly from
// [1, window]; the learning rate decays linearly to zero over
// epochs * (in-vocabulary token count). With threads > 1 the workers share
// the matrices hogwild-style and the result is not bit-reproducible; one
// thread plus a fixed seed is.
TrainStats train(EmbeddingModel& model, const TokenStream& stream,
                 const TrainProgressFn& progress = {});

// dot(a,b) / (|a||b|), throws ZeroVector when either norm vanishes.
double cosine(std::span<const float> a, std::span<const float> b);

// .vec reader, mainly for interop checks: returns (token, vector) rows.
std::vector<std::pair<std::string, std::vector<float>>> read_vec(std::istream& in);

}  // namespace subvec
