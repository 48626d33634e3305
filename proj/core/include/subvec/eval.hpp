#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subvec/embedding.hpp"

namespace subvec {

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double human_score = 0.0;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityPair> pairs;
};

// Tab- or comma-separated `word1 word2 score` rows; an optional header row
// is recognized by its non-numeric third field. Throws ParseError with the
// line number, or DuplicatePair when an unordered pair repeats.
SimilarityDataset load_dataset(const std::filesystem::path& path);
SimilarityDataset parse_dataset(std::istream& in, std::string name);

// Values with their 1-based ranks; tied values share the mean of the ranks
// they span.
struct RankedSeries {
  std::vector<double> values;
  std::vector<double> ranks;
};

RankedSeries rank_series(std::span<const double> values);

// Rank correlation. Tie-free series take the closed form
//   r_s = 1 - 6*sum(d^2) / (n(n^2-1)),
// otherwise the Pearson correlation of the average ranks, which agrees with
// the closed form whenever that one applies. Throws LengthMismatch,
// TooFewPairs and ZeroVariance.
double spearman(std::span<const double> x, std::span<const double> y);

// A model's word-pair similarity; empty means the pair cannot be scored
// (out of vocabulary under that model's policy) and is excluded.
using PairScorer = std::function<std::optional<double>(const std::string&, const std::string&)>;

struct EvalReport {
  std::string model;
  std::string dataset;
  double rho = 0.0;
  std::size_t n_scored = 0;
  std::size_t n_total = 0;
  std::vector<std::pair<std::string, std::string>> oov_pairs;
};

EvalReport evaluate(const PairScorer& scorer, const SimilarityDataset& dataset,
                    std::string model_name);

// Rows = models, columns = datasets, cells = rho with coverage. Cells with
// no report render as "-".
std::string render_comparison(std::span<const EvalReport> reports);

// Machine rows: model<TAB>dataset<TAB>rho<TAB>n_scored<TAB>n_total.
std::string render_comparison_tsv(std::span<const EvalReport> reports);

struct ProjectedWord {
  std::string token;
  double x = 0.0;
  double y = 0.0;
};

// Mean-centers the words' vectors and projects onto the top two principal
// components (sign fixed so each component's first nonzero loading is
// positive). Unrepresentable words are skipped and reported via `skipped`.
// Needs at least three projectable words.
std::vector<ProjectedWord> project_2d(const EmbeddingModel& model,
                                      std::span<const std::string> words,
                                      std::vector<std::string>* skipped = nullptr);

}  // namespace subvec
