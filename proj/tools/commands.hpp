#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace subvec::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

inline constexpr std::string_view kToolVersion = "0.1.0";

// Every flag of a run, fully resolved, written next to each produced
// artifact as <artifact>.manifest.json. Re-running the same manifest in
// deterministic mode reproduces the artifact byte for byte.
nlohmann::json make_manifest(const std::string& subcommand, const nlohmann::json& config,
                             const nlohmann::json& inputs, const nlohmann::json& outputs);

void write_manifest(const std::filesystem::path& artifact, const nlohmann::json& manifest);

// Writes content via a temporary file and renames on success, so failures
// never leave a partial artifact behind.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

struct PreprocessArgs {
  std::string input;
  std::string output;
  std::optional<std::string> stoplist;
  std::string extra_remove;      // characters added to the removal set
  std::string keep;              // characters dropped from the removal set
  bool punctuation_class = true; // remove the punctuation-other category
  std::string delimiters = "\xdb\x94";  // sentence delimiters besides newline
};

struct TrainArgs {
  std::string corpus;
  std::string output;
  std::string model = "fasttext";  // fasttext | bigram
  std::uint32_t dim = 100;
  std::uint32_t epochs = 5;
  double lr = 0.05;
  std::int64_t window = -1;  // -1: per-model default (5 fasttext, 1 bigram)
  std::uint32_t negatives = 5;
  std::uint32_t min_count = 5;
  double sample_t = 1e-4;
  std::uint32_t minn = 3;
  std::uint32_t maxn = 6;
  std::uint64_t buckets = 2'000'000;
  bool no_markers = false;
  std::string compose = "mean";  // mean | sum
  std::uint32_t threads = 1;
  std::uint64_t seed = 1;
  bool deterministic = false;
};

struct EvalArgs {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::string format = "text";  // text | tsv
};

struct QueryArgs {
  std::string model;
  std::string op;  // nn | analogy | sim
  std::vector<std::string> words;
  std::size_t k = 10;
};

struct ProjectArgs {
  std::string model;
  std::string words_file;
  std::optional<std::string> output;
};

struct VocabArgs {
  std::string input;  // tokenized corpus or binary model
  std::uint32_t min_count = 5;
};

int cmd_preprocess(const PreprocessArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_query(const QueryArgs& args);
int cmd_project(const ProjectArgs& args);
int cmd_vocab(const VocabArgs& args);

}  // namespace subvec::cli
