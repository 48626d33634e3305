#include <exception>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "subvec/embedding.hpp"
#include "subvec/errors.hpp"

namespace cli = subvec::cli;

int main(int argc, char** argv) {
  CLI::App app{"subword embeddings and bigram co-occurrence models"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  cli::PreprocessArgs pre;
  auto* preprocess = app.add_subcommand(
      "preprocess", "normalize and tokenize a raw UTF-8 corpus, one sentence per line");
  preprocess->add_option("input", pre.input, "raw UTF-8 text file")->required();
  preprocess->add_option("output", pre.output, "normalized corpus to write")->required();
  preprocess->add_option("--stoplist", pre.stoplist, "stop-word file, one token per line");
  preprocess->add_option("--remove-chars", pre.extra_remove,
                         "extra characters to replace with spaces");
  preprocess->add_option("--keep-chars", pre.keep, "characters to exempt from removal");
  preprocess->add_flag("!--no-punct-class", pre.punctuation_class,
                       "do not remove the punctuation-other category");
  preprocess->add_option("--delimiters", pre.delimiters,
                         "sentence delimiter characters besides newline");

  cli::TrainArgs tr;
  auto* train = app.add_subcommand("train", "train a model on a preprocessed corpus");
  train->add_option("corpus", tr.corpus, "tokenized corpus, one sentence per line")->required();
  train->add_option("output", tr.output, "model file to write")->required();
  train->add_option("--model", tr.model, "fasttext | bigram")
      ->check(CLI::IsMember({"fasttext", "bigram"}));
  train->add_option("--dim", tr.dim, "vector dimension")->check(CLI::PositiveNumber);
  train->add_option("--epochs", tr.epochs, "training epochs")->check(CLI::PositiveNumber);
  train->add_option("--lr", tr.lr, "initial learning rate")->check(CLI::PositiveNumber);
  train->add_option("--window", tr.window, "context window (default 5, bigram default 1)");
  train->add_option("--negatives", tr.negatives, "negative samples per pair")
      ->check(CLI::PositiveNumber);
  train->add_option("--min-count", tr.min_count, "minimum token count")
      ->check(CLI::PositiveNumber);
  train->add_option("--sample-t", tr.sample_t, "frequent-word subsampling threshold")
      ->check(CLI::PositiveNumber);
  train->add_option("--minn", tr.minn, "shortest subword length")->check(CLI::PositiveNumber);
  train->add_option("--maxn", tr.maxn, "longest subword length")->check(CLI::PositiveNumber);
  train->add_option("--buckets", tr.buckets, "subword hash buckets")->check(CLI::PositiveNumber);
  train->add_flag("--no-markers", tr.no_markers, "drop the < > word boundary markers");
  train->add_option("--compose", tr.compose, "word vector composition: mean | sum")
      ->check(CLI::IsMember({"mean", "sum"}));
  train->add_option("--threads", tr.threads, "training workers")->check(CLI::PositiveNumber);
  train->add_option("--seed", tr.seed, "random seed");
  train->add_flag("--deterministic", tr.deterministic,
                  "single worker, bit-reproducible given --seed");

  cli::EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "score models on word-similarity datasets");
  eval->add_option("--model,-m", ev.models, "model file (repeatable)")->required();
  eval->add_option("--dataset,-d", ev.datasets, "dataset file (repeatable)")->required();
  eval->add_option("--format", ev.format, "text | tsv")
      ->check(CLI::IsMember({"text", "tsv"}));

  cli::QueryArgs qu;
  auto* query = app.add_subcommand("query", "interrogate a trained model");
  query->add_option("model", qu.model, "model file")->required();
  query->add_option("op", qu.op, "nn | analogy | sim")->required();
  query->add_option("words", qu.words, "query words")->required();
  query->add_option("-k", qu.k, "results to return")->check(CLI::PositiveNumber);

  cli::ProjectArgs pj;
  auto* project = app.add_subcommand("project", "project word vectors to 2D for plotting");
  project->add_option("model", pj.model, "embedding model file")->required();
  project->add_option("words", pj.words_file, "file with one word per line")->required();
  project->add_option("--output,-o", pj.output, "write TSV here instead of stdout");

  cli::VocabArgs vo;
  auto* vocab = app.add_subcommand("vocab", "dump token counts of a corpus or model");
  vocab->add_option("input", vo.input, "tokenized corpus or embedding model")->required();
  vocab->add_option("--min-count", vo.min_count, "minimum token count (corpus input)")
      ->check(CLI::PositiveNumber);

  std::string vectors_model;
  auto* vectors = app.add_subcommand("vectors", "write a model's vectors in .vec text format");
  vectors->add_option("model", vectors_model, "embedding model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  try {
    if (preprocess->parsed()) return cli::cmd_preprocess(pre);
    if (train->parsed()) return cli::cmd_train(tr);
    if (eval->parsed()) return cli::cmd_eval(ev);
    if (query->parsed()) return cli::cmd_query(qu);
    if (project->parsed()) return cli::cmd_project(pj);
    if (vocab->parsed()) return cli::cmd_vocab(vo);
    if (vectors->parsed()) {
      std::ifstream in(vectors_model, std::ios::binary);
      if (!in) throw subvec::IoError("cannot open model: " + vectors_model);
      subvec::EmbeddingModel::load(in).write_vec(std::cout);
      return cli::kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const subvec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return cli::kExitInternal;
  }
  return cli::kExitUsage;
}
