#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "subvec/errors.hpp"
#include "subvec/eval.hpp"

#if SUBVEC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace subvec;

TEST_CASE("dataset parsing handles tabs, commas and headers") {
  SUBCASE("plain TSV") {
    std::istringstream in("cat\tdog\t7.35\ncar\ttrain\t5.5\nsun\tmoon\t8.0\n");
    const auto ds = parse_dataset(in, "toy");
    REQUIRE(ds.pairs.size() == 3);
    CHECK(ds.pairs[0].word1 == "cat");
    CHECK(ds.pairs[0].word2 == "dog");
    CHECK(ds.pairs[0].human_score == doctest::Approx(7.35));
    CHECK(ds.pairs[2].word2 == "moon");
  }
  SUBCASE("CSV with a header row") {
    std::istringstream in("word1,word2,score\ncat,dog,7.35\ncar, train, 5.5\n");
    const auto ds = parse_dataset(in, "toy");
    REQUIRE(ds.pairs.size() == 2);
    CHECK(ds.pairs[1].word1 == "car");
    CHECK(ds.pairs[1].word2 == "train");
  }
  SUBCASE("non-numeric score mid-file reports its line") {
    std::istringstream in("cat\tdog\t7.35\ncar\ttrain\toops\n");
    try {
      parse_dataset(in, "toy");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("wrong field count reports its line") {
    std::istringstream in("cat\tdog\t7.35\ncar\ttrain\n");
    CHECK_THROWS_AS(parse_dataset(in, "toy"), ParseError);
  }
  SUBCASE("duplicate unordered pair is rejected") {
    std::istringstream in("cat\tdog\t7.35\ndog\tcat\t2.0\n");
    CHECK_THROWS_AS(parse_dataset(in, "toy"), DuplicatePair);
  }
}

TEST_CASE("rank_series assigns average ranks to ties") {
  const std::vector<double> values{10.0, 20.0, 20.0, 5.0};
  const auto ranked = rank_series(values);
  CHECK(ranked.ranks == std::vector<double>{2.0, 3.5, 3.5, 1.0});
}

TEST_CASE("spearman closed form on tie-free series") {
  SUBCASE("any strictly increasing map of x scores one") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y;
    for (const double v : x) y.push_back(std::exp(v));  // strictly increasing
    CHECK(spearman(x, y) == 1.0);
  }
  SUBCASE("a reversed ranking scores minus one") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    const std::vector<double> y{9.0, 5.0, 1.0};
    CHECK(spearman(x, y) == -1.0);
  }
  SUBCASE("hand-computed four-point case") {
    // ranks x: 1,2,3,4; ranks y: 2,1,4,3 -> 1 - 6*4/(4*15)
    const std::vector<double> x{10.0, 20.0, 30.0, 40.0};
    const std::vector<double> y{2.0, 1.0, 4.0, 3.0};
    CHECK(spearman(x, y) == doctest::Approx(0.6).epsilon(1e-15));
  }
}

TEST_CASE("spearman with ties follows pearson of average ranks") {
  const std::vector<double> x{1.0, 2.0, 2.0, 4.0, 5.0, 6.0};
  const std::vector<double> y{3.0, 1.0, 4.0, 1.0, 5.0, 9.0};
  // ranks x: 1, 2.5, 2.5, 4, 5, 6; ranks y: 3, 1.5, 4, 1.5, 5, 6
  // pearson of those ranks = 10.25 / 17
  CHECK(spearman(x, y) == 10.25 / 17.0);
}

TEST_CASE("spearman error contracts") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y2{1.0, 2.0};
  const std::vector<double> constant{4.0, 4.0, 4.0};
  CHECK_THROWS_AS(spearman(x, y2), LengthMismatch);
  CHECK_THROWS_AS(spearman(std::vector<double>{1.0}, std::vector<double>{2.0}), TooFewPairs);
  CHECK_THROWS_AS(spearman(x, constant), ZeroVariance);
}

TEST_CASE("spearman agrees with the naive oracle and is symmetric") {
  std::mt19937 rng(606);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 5 + trial % 40;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = value(rng);
      // inject ties in half the trials
      y[i] = trial % 2 == 0 ? value(rng) : std::round(value(rng) / 25.0) * 25.0;
    }
    const double got = spearman(x, y);
    CHECK(got == doctest::Approx(oracles::naive_spearman(x, y)).epsilon(1e-12));
    CHECK(spearman(y, x) == got);
  }
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
  std::mt19937 rng(707);
  std::uniform_real_distribution<double> value(0.1, 10.0);
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x[i] = value(rng);
    y[i] = value(rng);
  }
  const double base = spearman(x, y);

  std::vector<double> x_cubed;
  for (const double v : x) x_cubed.push_back(v * v * v);
  CHECK(spearman(x_cubed, y) == doctest::Approx(base).epsilon(1e-12));

  std::vector<double> y_log;
  for (const double v : y) y_log.push_back(std::log(v));
  CHECK(spearman(x, y_log) == doctest::Approx(base).epsilon(1e-12));
}

namespace {

SimilarityDataset toy_dataset() {
  SimilarityDataset ds;
  ds.name = "toy";
  ds.pairs = {
      {"a", "b", 9.0}, {"a", "c", 7.0}, {"b", "d", 5.0}, {"c", "d", 3.0}, {"d", "e", 1.0},
  };
  return ds;
}

}  // namespace

TEST_CASE("evaluate with a perfect scorer reaches rho one and full coverage") {
  const auto ds = toy_dataset();
  const PairScorer perfect = [&](const std::string& w1, const std::string& w2) {
    for (const auto& p : ds.pairs) {
      if (p.word1 == w1 && p.word2 == w2) return std::optional<double>(p.human_score);
    }
    return std::optional<double>();
  };
  const auto report = evaluate(perfect, ds, "perfect");
  CHECK(report.rho == 1.0);
  CHECK(report.n_scored == 5);
  CHECK(report.n_total == 5);
  CHECK(report.oov_pairs.empty());
}

TEST_CASE("evaluate reports unscorable pairs and keeps the count identity") {
  const auto ds = toy_dataset();
  const PairScorer partial = [](const std::string& w1, const std::string&) {
    if (w1 == "b") return std::optional<double>();
    return std::optional<double>(static_cast<double>(w1[0]));
  };
  const auto report = evaluate(partial, ds, "partial");
  CHECK(report.n_scored + report.oov_pairs.size() == report.n_total);
  CHECK(report.oov_pairs.size() == 1);
  CHECK(report.oov_pairs[0].first == "b");
}

TEST_CASE("evaluate surfaces degenerate scorers") {
  const auto ds = toy_dataset();
  const PairScorer constant = [](const std::string&, const std::string&) {
    return std::optional<double>(0.5);
  };
  CHECK_THROWS_AS(evaluate(constant, ds, "constant"), ZeroVariance);

  const PairScorer all_oov = [](const std::string&, const std::string&) {
    return std::optional<double>();
  };
  CHECK_THROWS_AS(evaluate(all_oov, ds, "oov"), TooFewPairs);
}

TEST_CASE("evaluate matches a hand-ranked computation and ignores row order") {
  const auto ds = toy_dataset();
  // model scores: a-b 0.9, a-c 0.1, b-d 0.5, c-d 0.2, d-e 0.05
  // human ranks: 5,4,3,2,1 ; model ranks: 5,2,4,3,1 ; d = (0,2,-1,-1,0)
  // rho = 1 - 6*6/(5*24) = 0.7
  const PairScorer scorer = [](const std::string& w1, const std::string& w2) {
    const std::string key = w1 + w2;
    if (key == "ab") return std::optional<double>(0.9);
    if (key == "ac") return std::optional<double>(0.1);
    if (key == "bd") return std::optional<double>(0.5);
    if (key == "cd") return std::optional<double>(0.2);
    return std::optional<double>(0.05);
  };
  const auto report = evaluate(scorer, ds, "hand");
  CHECK(report.rho == doctest::Approx(0.7).epsilon(1e-15));

  SimilarityDataset shuffled = ds;
  std::reverse(shuffled.pairs.begin(), shuffled.pairs.end());
  const auto report2 = evaluate(scorer, shuffled, "hand");
  CHECK(report2.rho == report.rho);
  CHECK(report2.n_scored == report.n_scored);
}

TEST_CASE("comparison table has models as rows and datasets as columns") {
  std::vector<EvalReport> reports;
  reports.push_back({"fasttext", "wordsim", 0.462, 350, 353, {}});
  reports.push_back({"fasttext", "simlex", 0.743, 999, 999, {}});
  reports.push_back({"bigrams", "wordsim", 0.188, 120, 353, {}});
  reports.push_back({"bigrams", "simlex", 0.156, 200, 999, {}});

  const auto table = render_comparison(reports);
  // header + 2 model rows
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK(table.find("fasttext") != std::string::npos);
  CHECK(table.find("wordsim") != std::string::npos);
  CHECK(table.find("0.4620 (350/353)") != std::string::npos);
  CHECK(table.find("0.1560 (200/999)") != std::string::npos);

  SUBCASE("single report renders a 1x1 grid") {
    const std::vector<EvalReport> one{reports[0]};
    const auto small = render_comparison(one);
    CHECK(std::count(small.begin(), small.end(), '\n') == 2);
  }
  SUBCASE("missing cells render as a dash") {
    reports.pop_back();  // drop bigrams/simlex
    const auto partial = render_comparison(reports);
    CHECK(partial.find('-') != std::string::npos);
  }
  SUBCASE("machine rows are tab-separated") {
    const auto tsv = render_comparison_tsv(reports);
    CHECK(tsv.find("fasttext\twordsim\t0.462000\t350\t353\n") != std::string::npos);
  }
}

#if SUBVEC_HAVE_EIGEN

namespace {

// Model whose words carry hand-chosen vectors (no subwords involved).
EmbeddingModel vector_model(const std::vector<std::vector<float>>& vectors) {
  TokenStream stream;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    stream.sentences.push_back({"w" + std::to_string(i)});
  }
  const auto vocab = Vocabulary::build(stream, 1);
  TrainConfig cfg;
  cfg.dim = static_cast<std::uint32_t>(vectors[0].size());
  cfg.subword.min_n = 32;
  cfg.subword.max_n = 32;
  cfg.subword.boundary_markers = false;
  cfg.subword.bucket_count = 16;
  EmbeddingModel model(vocab, cfg);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t d = 0; d < vectors[i].size(); ++d) {
      model.input_row(i)[d] = vectors[i][d];
    }
  }
  return model;
}

std::vector<std::string> word_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  return names;
}

}  // namespace

TEST_CASE("projecting 2d vectors preserves pairwise distances") {
  const std::vector<std::vector<float>> vectors{
      {0.0f, 0.0f}, {1.0f, 0.25f}, {0.5f, 2.0f}, {-1.5f, 1.0f}, {2.0f, -1.0f},
  };
  const auto model = vector_model(vectors);
  const auto projected = project_2d(model, word_names(vectors.size()));
  REQUIRE(projected.size() == vectors.size());

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double dx0 = vectors[i][0] - vectors[j][0];
      const double dy0 = vectors[i][1] - vectors[j][1];
      const double dx1 = projected[i].x - projected[j].x;
      const double dy1 = projected[i].y - projected[j].y;
      CHECK(std::sqrt(dx1 * dx1 + dy1 * dy1) ==
            doctest::Approx(std::sqrt(dx0 * dx0 + dy0 * dy0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("collinear points have no second-component variance") {
  const std::vector<std::vector<float>> vectors{
      {0.0f, 0.0f, 0.0f}, {1.0f, 2.0f, -1.0f}, {2.0f, 4.0f, -2.0f}, {3.0f, 6.0f, -3.0f},
  };
  const auto model = vector_model(vectors);
  const auto projected = project_2d(model, word_names(vectors.size()));
  double mean_y = 0.0;
  for (const auto& p : projected) mean_y += p.y;
  mean_y /= static_cast<double>(projected.size());
  double var_y = 0.0;
  for (const auto& p : projected) var_y += (p.y - mean_y) * (p.y - mean_y);
  CHECK(var_y < 1e-18);
}

TEST_CASE("projection variance equals the top eigenvalues from Eigen") {
  std::mt19937 rng(808);
  std::uniform_real_distribution<float> value(-1.0f, 1.0f);
  constexpr std::size_t kWords = 10, kDim = 100;
  std::vector<std::vector<float>> vectors(kWords, std::vector<float>(kDim));
  for (auto& v : vectors) {
    for (auto& x : v) x = value(rng);
  }
  const auto model = vector_model(vectors);
  const auto projected = project_2d(model, word_names(kWords));

  // reference: Eigen's self-adjoint solver on the sample covariance
  Eigen::MatrixXd data(kWords, kDim);
  for (std::size_t i = 0; i < kWords; ++i) {
    for (std::size_t d = 0; d < kDim; ++d) data(i, d) = vectors[i][d];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / double(kWords - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const auto eigenvalues = solver.eigenvalues();  // ascending

  double var_x = 0.0, var_y = 0.0, mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : projected) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= kWords;
  mean_y /= kWords;
  for (const auto& p : projected) {
    var_x += (p.x - mean_x) * (p.x - mean_x);
    var_y += (p.y - mean_y) * (p.y - mean_y);
  }
  var_x /= kWords - 1;
  var_y /= kWords - 1;

  CHECK(var_x == doctest::Approx(eigenvalues(kDim - 1)).epsilon(1e-6));
  CHECK(var_y == doctest::Approx(eigenvalues(kDim - 2)).epsilon(1e-6));
}

TEST_CASE("unrepresentable words are skipped and reported") {
  const std::vector<std::vector<float>> vectors{
      {0.0f, 1.0f}, {1.0f, 0.0f}, {1.0f, 1.0f},
  };
  const auto model = vector_model(vectors);
  std::vector<std::string> words = word_names(3);
  words.push_back("zz");  // no vocab entry, no ngrams under this config
  std::vector<std::string> skipped;
  const auto projected = project_2d(model, words, &skipped);
  CHECK(projected.size() == 3);
  REQUIRE(skipped.size() == 1);
  CHECK(skipped[0] == "zz");

  SUBCASE("fewer than three projectable words is an error") {
    const std::vector<std::string> few{"w0", "w1", "zz"};
    CHECK_THROWS_AS(project_2d(model, few), std::invalid_argument);
  }
}

#endif  // SUBVEC_HAVE_EIGEN
