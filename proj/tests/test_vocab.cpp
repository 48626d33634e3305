#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "subvec/errors.hpp"
#include "subvec/vocab.hpp"

using namespace subvec;

namespace {

TokenStream make_stream(std::vector<std::vector<std::string>> sentences) {
  TokenStream s;
  s.sentences = std::move(sentences);
  return s;
}

TokenStream random_stream(std::mt19937& rng, std::size_t n_sentences, std::size_t vocab_span) {
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<std::size_t> word(0, vocab_span - 1);
  TokenStream stream;
  for (std::size_t i = 0; i < n_sentences; ++i) {
    std::vector<std::string> s(len(rng));
    for (auto& t : s) t = "w" + std::to_string(word(rng));
    stream.sentences.push_back(std::move(s));
  }
  return stream;
}

}  // namespace

TEST_CASE("build_vocab counts exactly and assigns ids by frequency then token order") {
  const auto vocab = Vocabulary::build(make_stream({{"a", "b", "a"}}), 1);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab.id_of("a") == 0);
  CHECK(vocab.id_of("b") == 1);
  CHECK(vocab.count_of(0) == 2);
  CHECK(vocab.count_of(1) == 1);
  CHECK(vocab.total_tokens() == 3);
}

TEST_CASE("build_vocab applies the min_count threshold") {
  const auto vocab = Vocabulary::build(make_stream({{"a", "b", "a"}}), 2);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.id_of("a") == 0);
  CHECK(!vocab.id_of("b"));
  CHECK(vocab.total_tokens() == 2);
}

TEST_CASE("build_vocab throws when nothing survives") {
  CHECK_THROWS_AS(Vocabulary::build(make_stream({{"a", "b"}}), 3), EmptyVocabulary);
  CHECK_THROWS_AS(Vocabulary::build(make_stream({}), 1), EmptyVocabulary);
}

TEST_CASE("build_vocab matches an independent counting oracle on a random corpus") {
  std::mt19937 rng(123);
  const auto stream = random_stream(rng, 1000, 80);
  const auto expected = oracles::naive_counts(stream.sentences);

  const auto vocab = Vocabulary::build(stream, 1);
  REQUIRE(vocab.size() == expected.size());
  std::uint64_t total = 0;
  for (const auto& [token, count] : expected) {
    const auto id = vocab.id_of(token);
    REQUIRE(id);
    CHECK(vocab.count_of(*id) == count);
    total += count;
  }
  CHECK(vocab.total_tokens() == total);
}

TEST_CASE("vocabulary ids are deterministic and ordered by count") {
  std::mt19937 rng(99);
  const auto stream = random_stream(rng, 300, 40);
  const auto v1 = Vocabulary::build(stream, 2);
  const auto v2 = Vocabulary::build(stream, 2);
  REQUIRE(v1.size() == v2.size());
  std::uint64_t sum = 0;
  for (std::uint32_t id = 0; id < v1.size(); ++id) {
    CHECK(v1.token_of(id) == v2.token_of(id));
    CHECK(v1.count_of(id) == v2.count_of(id));
    CHECK(v1.count_of(id) >= v1.min_count());
    if (id > 0) {
      CHECK(v1.count_of(id) <= v1.count_of(id - 1));
      if (v1.count_of(id) == v1.count_of(id - 1)) {
        CHECK(v1.token_of(id - 1) < v1.token_of(id));
      }
    }
    sum += v1.count_of(id);
  }
  CHECK(sum == v1.total_tokens());
}

TEST_CASE("discard_probability follows the subsampling formula") {
  // one token with count 4, one with count 12: f(a) = 0.75, f(b) = 0.25
  const auto vocab = Vocabulary::build(
      make_stream({{"a", "a", "a", "a", "a", "a", "a", "a", "a", "a", "a", "a", "b", "b", "b", "b"}}),
      1);
  REQUIRE(vocab.total_tokens() == 16);

  SUBCASE("frequency at or below the threshold is never discarded") {
    CHECK(vocab.discard_probability(0, 0.80) == 0.0);
    CHECK(vocab.discard_probability(1, 0.25) == 0.0);
  }
  SUBCASE("frequency at four times the threshold discards a quarter") {
    // f(b) = 0.25 = 4t with t = 0.0625: p = 1 - 1/2 - 1/4
    CHECK(vocab.discard_probability(1, 0.0625) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("unknown id throws") {
    CHECK_THROWS_AS(vocab.discard_probability(2, 1e-4), UnknownId);
  }
}

TEST_CASE("negative table matches analytic probabilities") {
  // counts {8, 1}: P(0) = 8^0.75 / (8^0.75 + 1)
  const auto vocab = Vocabulary::build(
      make_stream({{"a", "a", "a", "a", "a", "a", "a", "a", "b"}}), 1);
  const NegativeTable table(vocab, 0.75);

  const double expected_p0 = std::pow(8.0, 0.75) / (std::pow(8.0, 0.75) + 1.0);
  CHECK(table.probability(0) == doctest::Approx(expected_p0).epsilon(1e-12));
  CHECK(table.probability(0) + table.probability(1) == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937 rng(2024);
  std::size_t zeros = 0;
  constexpr std::size_t kDraws = 1'000'000;
  for (std::size_t i = 0; i < kDraws; ++i) {
    if (table.sample(rng) == 0) ++zeros;
  }
  CHECK(std::abs(static_cast<double>(zeros) / kDraws - expected_p0) < 0.01);
}

TEST_CASE("uniform counts draw uniformly (chi-squared, V=16)") {
  TokenStream stream;
  for (int w = 0; w < 16; ++w) {
    stream.sentences.push_back({"w" + std::to_string(w), "w" + std::to_string(w)});
  }
  const auto vocab = Vocabulary::build(stream, 1);
  const NegativeTable table(vocab, 0.75);

  std::mt19937 rng(555);
  constexpr std::size_t kDraws = 1'000'000;
  std::vector<std::size_t> hits(16, 0);
  for (std::size_t i = 0; i < kDraws; ++i) ++hits[table.sample(rng)];

  const double expected = static_cast<double>(kDraws) / 16.0;
  double chi2 = 0.0;
  for (const auto h : hits) {
    const double d = static_cast<double>(h) - expected;
    chi2 += d * d / expected;
  }
  // chi-squared critical value, 15 degrees of freedom, p = 0.01
  CHECK(chi2 < 30.578);
}

TEST_CASE("alpha = 1 reproduces raw frequency proportions") {
  std::mt19937 corpus_rng(31);
  const auto stream = random_stream(corpus_rng, 200, 10);
  const auto vocab = Vocabulary::build(stream, 1);
  const NegativeTable table(vocab, 1.0);

  std::mt19937 rng(77);
  constexpr std::size_t kDraws = 500'000;
  std::vector<std::size_t> hits(vocab.size(), 0);
  for (std::size_t i = 0; i < kDraws; ++i) ++hits[table.sample(rng)];

  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    const double expected =
        static_cast<double>(vocab.count_of(id)) / static_cast<double>(vocab.total_tokens());
    CHECK(table.probability(id) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(static_cast<double>(hits[id]) / kDraws == doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("sample_negative never returns the excluded id") {
  const auto vocab = Vocabulary::build(make_stream({{"a", "a", "b"}}), 1);
  const NegativeTable table(vocab);
  std::mt19937 rng(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_negative(table, rng, 0) == 1);
  }
}

TEST_CASE("every vocabulary id keeps a nonzero sampling probability") {
  std::mt19937 corpus_rng(8);
  const auto stream = random_stream(corpus_rng, 400, 50);
  const auto vocab = Vocabulary::build(stream, 1);
  const NegativeTable table(vocab);
  double sum = 0.0;
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    CHECK(table.probability(id) > 0.0);
    sum += table.probability(id);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("vocabulary dump is token<TAB>count in descending order") {
  const auto vocab = Vocabulary::build(make_stream({{"b", "b", "b", "a", "a", "c"}}), 1);
  std::ostringstream out;
  vocab.write_counts(out);
  CHECK(out.str() == "b\t3\na\t2\nc\t1\n");
}
