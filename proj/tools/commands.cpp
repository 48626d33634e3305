#include "commands.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "subvec/cooc.hpp"
#include "subvec/corpus.hpp"
#include "subvec/errors.hpp"
#include "subvec/eval.hpp"
#include "subvec/unicode.hpp"

namespace subvec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

enum class ModelKind { kEmbedding, kCooc };

ModelKind sniff_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path.string());
  char magic[9] = {};
  in.read(magic, 9);
  if (std::string_view(magic, 8) == "SUBVEC01") return ModelKind::kEmbedding;
  if (std::string_view(magic, 9) == "SUBCOOC01") return ModelKind::kCooc;
  throw IoError("unrecognized model format: " + path.string());
}

EmbeddingModel load_embedding(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path.string());
  return EmbeddingModel::load(in);
}

CoocModel load_cooc(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path.string());
  return CoocModel::load(in);
}

RemovalSet removal_from_args(const PreprocessArgs& args) {
  RemovalSet set = args.punctuation_class ? RemovalSet::standard() : RemovalSet::none();
  if (!args.punctuation_class) {
    for (const char32_t c : std::u32string_view(U"()[]{}'\"")) set.add(c);
  }
  for (const char32_t c : decode_utf8(args.extra_remove)) set.add(c);
  for (const char32_t c : decode_utf8(args.keep)) set.exclude(c);
  // sentence delimiters always survive normalization
  for (const char32_t c : decode_utf8(args.delimiters)) set.exclude(c);
  return set;
}

}  // namespace

json make_manifest(const std::string& subcommand, const json& config, const json& inputs,
                   const json& outputs) {
  return json{
      {"tool", "subvec"},    {"version", std::string(kToolVersion)},
      {"subcommand", subcommand}, {"timestamp", utc_timestamp()},
      {"config", config},    {"inputs", inputs},
      {"outputs", outputs},
  };
}

void write_manifest(const fs::path& artifact, const json& manifest) {
  const fs::path path = artifact.string() + ".manifest.json";
  atomic_write(path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
}

void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw IoError("cannot open for writing: " + tmp.string());
      writer(out);
      out.flush();
      if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

int cmd_preprocess(const PreprocessArgs& args) {
  std::ifstream in(args.input, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + args.input);

  const RemovalSet removal = removal_from_args(args);
  const std::u32string delimiters = decode_utf8(args.delimiters);
  StopList stops;
  if (args.stoplist) stops = StopList::from_file(*args.stoplist);

  std::uint64_t sentences_out = 0, tokens_out = 0;
  atomic_write(args.output, [&](std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
      // newline is a sentence boundary, so line-at-a-time processing
      // matches whole-file processing exactly
      TokenStream stream = tokenize(normalize(line, removal), delimiters);
      if (args.stoplist) stream = remove_stopwords(stream, stops);
      write_token_stream(stream, out);
      sentences_out += stream.sentences.size();
      tokens_out += stream.token_count();
    }
  });

  json config{{"stoplist", args.stoplist ? json(*args.stoplist) : json(nullptr)},
              {"punctuation_class", args.punctuation_class},
              {"extra_remove", args.extra_remove},
              {"keep", args.keep},
              {"delimiters", args.delimiters}};
  write_manifest(args.output, make_manifest("preprocess", config, json{{"corpus", args.input}},
                                            json{{"corpus", args.output}}));
  std::cerr << "preprocess: " << sentences_out << " sentences, " << tokens_out << " tokens -> "
            << args.output << '\n';
  return kExitOk;
}

namespace {

json train_config_json(const TrainArgs& args, std::uint32_t window, std::uint32_t threads) {
  return json{{"model", args.model},
              {"dim", args.dim},
              {"epochs", args.epochs},
              {"lr", args.lr},
              {"window", window},
              {"negatives", args.negatives},
              {"min_count", args.min_count},
              {"sample_t", args.sample_t},
              {"minn", args.minn},
              {"maxn", args.maxn},
              {"buckets", args.buckets},
              {"markers", !args.no_markers},
              {"compose", args.compose},
              {"threads", threads},
              {"seed", args.seed},
              {"deterministic", args.deterministic}};
}

int train_fasttext(const TrainArgs& args, const TokenStream& stream) {
  TrainConfig cfg;
  cfg.dim = args.dim;
  cfg.epochs = args.epochs;
  cfg.lr0 = static_cast<float>(args.lr);
  cfg.window = args.window < 0 ? 5 : static_cast<std::uint32_t>(args.window);
  cfg.negatives = args.negatives;
  cfg.min_count = args.min_count;
  cfg.subsample_t = args.sample_t;
  cfg.subword.min_n = args.minn;
  cfg.subword.max_n = args.maxn;
  cfg.subword.bucket_count = args.buckets;
  cfg.subword.boundary_markers = !args.no_markers;
  cfg.compose = args.compose == "sum" ? Composition::kSum : Composition::kMean;
  cfg.threads = args.deterministic ? 1 : args.threads;
  cfg.seed = args.seed;
  cfg.validate();

  const double matrix_gb = static_cast<double>(cfg.subword.bucket_count) * cfg.dim * 4.0 / 1e9;
  if (matrix_gb > 1.0) {
    std::cerr << "warning: bucket rows need about " << matrix_gb
              << " GB; consider a smaller --buckets for small corpora\n";
  }

  const Vocabulary vocab = Vocabulary::build(stream, cfg.min_count);
  std::cerr << "vocab: " << vocab.size() << " tokens, " << vocab.total_tokens()
            << " occurrences\n";

  EmbeddingModel model(vocab, cfg);
  train(model, stream, [&](std::uint32_t epoch, float lr, double loss) {
    std::fprintf(stderr, "epoch %u/%u  lr %.5f  loss %.5f\n", epoch + 1, cfg.epochs,
                 static_cast<double>(lr), loss);
  });

  atomic_write(args.output, [&](std::ostream& out) { model.save(out); });
  write_manifest(args.output,
                 make_manifest("train", train_config_json(args, cfg.window, cfg.threads),
                               json{{"corpus", args.corpus}}, json{{"model", args.output}}));
  return kExitOk;
}

int train_bigram(const TrainArgs& args, const TokenStream& stream) {
  const auto window = args.window < 0 ? kDefaultCoocWindow : static_cast<std::uint32_t>(args.window);
  if (window < 1) throw std::invalid_argument("window must be >= 1");

  const Vocabulary vocab = Vocabulary::build(stream, args.min_count);
  std::cerr << "vocab: " << vocab.size() << " tokens\n";
  const CoocModel model(build_cooc(stream, vocab, window), vocab);
  std::cerr << "cooc: " << model.table().pair_entries() << " stored pairs, window " << window
            << '\n';

  atomic_write(args.output, [&](std::ostream& out) { model.save(out); });
  write_manifest(args.output,
                 make_manifest("train", train_config_json(args, window, 1),
                               json{{"corpus", args.corpus}}, json{{"model", args.output}}));
  return kExitOk;
}

}  // namespace

int cmd_train(const TrainArgs& args) {
  const TokenStream stream = load_token_stream(args.corpus);
  if (args.model == "fasttext") return train_fasttext(args, stream);
  if (args.model == "bigram") return train_bigram(args, stream);
  throw std::invalid_argument("unknown --model '" + args.model + "' (fasttext|bigram)");
}

int cmd_eval(const EvalArgs& args) {
  std::vector<SimilarityDataset> datasets;
  for (const auto& path : args.datasets) datasets.push_back(load_dataset(path));

  std::vector<EvalReport> reports;
  for (const auto& model_path : args.models) {
    const std::string name = fs::path(model_path).stem().string();
    PairScorer scorer;
    EmbeddingModel embedding;
    CoocModel cooc;
    if (sniff_model(model_path) == ModelKind::kEmbedding) {
      embedding = load_embedding(model_path);
      scorer = [&embedding](const std::string& w1, const std::string& w2) -> std::optional<double> {
        try {
          return cosine(embedding.word_vector(w1), embedding.word_vector(w2));
        } catch (const NoRepresentation&) {
          return std::nullopt;
        } catch (const ZeroVector&) {
          return std::nullopt;
        }
      };
    } else {
      cooc = load_cooc(model_path);
      scorer = [&cooc](const std::string& w1, const std::string& w2) {
        return cooc.similarity(w1, w2);
      };
    }

    for (const auto& dataset : datasets) {
      try {
        reports.push_back(evaluate(scorer, dataset, name));
      } catch (const Error& e) {
        std::cerr << "eval: " << name << " on " << dataset.name << " failed: " << e.what()
                  << '\n';
      }
    }
  }
  if (reports.empty()) throw IoError("no model/dataset cell could be evaluated");

  if (args.format == "tsv") {
    std::cout << render_comparison_tsv(reports);
  } else {
    std::cout << render_comparison(reports);
  }
  return kExitOk;
}

int cmd_query(const QueryArgs& args) {
  const ModelKind kind = sniff_model(args.model);

  if (args.op == "sim") {
    if (args.words.size() != 2) throw std::invalid_argument("sim needs exactly 2 words");
    std::optional<double> sim;
    if (kind == ModelKind::kEmbedding) {
      const auto model = load_embedding(args.model);
      sim = cosine(model.word_vector(args.words[0]), model.word_vector(args.words[1]));
    } else {
      sim = load_cooc(args.model).similarity(args.words[0], args.words[1]);
      if (!sim) throw UnknownWord(args.words[0] + "' / '" + args.words[1]);
    }
    std::printf("%.6f\n", *sim);
    return kExitOk;
  }

  std::vector<std::pair<std::string, double>> ranked;
  if (args.op == "nn") {
    if (args.words.size() != 1) throw std::invalid_argument("nn needs exactly 1 word");
    if (kind == ModelKind::kEmbedding) {
      ranked = load_embedding(args.model).nearest_neighbors(args.words[0], args.k);
    } else {
      ranked = load_cooc(args.model).nearest(args.words[0], args.k);
    }
  } else if (args.op == "analogy") {
    if (args.words.size() != 3) throw std::invalid_argument("analogy needs exactly 3 words");
    if (kind != ModelKind::kEmbedding) {
      throw std::invalid_argument("analogy requires an embedding model");
    }
    ranked = load_embedding(args.model).analogy(args.words[0], args.words[1], args.words[2],
                                                args.k);
  } else {
    throw std::invalid_argument("unknown query op '" + args.op + "' (nn|analogy|sim)");
  }

  for (const auto& [token, score] : ranked) std::printf("%s\t%.6f\n", token.c_str(), score);
  return kExitOk;
}

int cmd_project(const ProjectArgs& args) {
  const auto model = load_embedding(args.model);

  std::ifstream in(args.words_file, std::ios::binary);
  if (!in) throw IoError("cannot open words file: " + args.words_file);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }

  std::vector<std::string> skipped;
  const auto projected = project_2d(model, words, &skipped);
  for (const auto& word : skipped) {
    std::cerr << "project: skipping unrepresentable word '" << word << "'\n";
  }

  auto write_rows = [&](std::ostream& out) {
    char buf[80];
    for (const auto& p : projected) {
      std::snprintf(buf, sizeof(buf), "\t%.6f\t%.6f\n", p.x, p.y);
      out << p.token << buf;
    }
  };
  if (args.output) {
    atomic_write(*args.output, write_rows);
    write_manifest(*args.output,
                   make_manifest("project", json{{"words_file", args.words_file}},
                                 json{{"model", args.model}, {"words", args.words_file}},
                                 json{{"projection", *args.output}}));
  } else {
    write_rows(std::cout);
  }
  return kExitOk;
}

int cmd_vocab(const VocabArgs& args) {
  std::ifstream probe(args.input, std::ios::binary);
  if (!probe) throw IoError("cannot open input: " + args.input);
  char magic[8] = {};
  probe.read(magic, 8);
  probe.close();

  if (std::string_view(magic, 8) == "SUBVEC01") {
    load_embedding(args.input).vocab().write_counts(std::cout);
  } else {
    const auto stream = load_token_stream(args.input);
    Vocabulary::build(stream, args.min_count).write_counts(std::cout);
  }
  return kExitOk;
}

}  // namespace subvec::cli
