#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace subvec {

// The Urdu full stop. Together with newline it is the default sentence
// delimiter, which is why the default removal set leaves it alone even
// though it is classified as punctuation.
inline constexpr char32_t kUrduFullStop = U'۔';

// Character class replaced by a single space during normalization.
// The default covers brackets, single/double quotes and everything in the
// punctuation-other category, minus the sentence delimiters.
class RemovalSet {
 public:
  // Brackets ()[]{}, ' and ", plus category Po, excluding U+06D4.
  static RemovalSet standard();

  // Only the explicitly added characters, no category rule.
  static RemovalSet none();

  RemovalSet& add(char32_t c);
  RemovalSet& exclude(char32_t c);
  RemovalSet& with_punctuation_other(bool enabled);

  bool contains(char32_t c) const;

 private:
  std::unordered_set<char32_t> added_;
  std::unordered_set<char32_t> excluded_;
  bool punctuation_other_ = false;
};

// UTF-8 text with the normalization invariants established: no removal-set
// character, no run of two or more spaces, no leading or trailing space on
// any line. Only normalize() creates one.
class NormalizedText {
 public:
  NormalizedText() = default;
  const std::string& str() const noexcept { return text_; }

 private:
  friend NormalizedText normalize(std::string_view, const RemovalSet&);
  explicit NormalizedText(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

struct TokenStream {
  std::vector<std::vector<std::string>> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
};

class StopList {
 public:
  StopList() = default;
  explicit StopList(std::vector<std::string> words);

  // One token per line, UTF-8. Blank lines are ignored, duplicates collapse.
  static StopList from_file(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
};

// Replaces every removal-set character by one space, folds '\t' and '\r'
// into spaces, collapses space runs and trims spaces at line boundaries.
// Newlines survive as sentence delimiters. Throws InvalidEncoding on bad
// UTF-8, reporting the byte offset.
NormalizedText normalize(std::string_view raw, const RemovalSet& removal = RemovalSet::standard());

// Splits into sentences at newline and any delimiter character, then into
// tokens at spaces. Empty tokens and empty sentences are dropped.
TokenStream tokenize(const NormalizedText& text, std::u32string_view delimiters = U"۔");

// Order-preserving stop-word filter; sentences that become empty are dropped.
TokenStream remove_stopwords(const TokenStream& stream, const StopList& stops);

// Readers/writers for the normalized corpus file format: one sentence per
// line, tokens separated by single spaces.
TokenStream load_token_stream(const std::filesystem::path& path);
void write_token_stream(const TokenStream& stream, std::ostream& out);

}  // namespace subvec
