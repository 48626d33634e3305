#include "subvec/corpus.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "subvec/errors.hpp"
#include "subvec/unicode.hpp"

namespace subvec {

RemovalSet RemovalSet::standard() {
  RemovalSet set;
  for (char32_t c : std::u32string_view(U"()[]{}'\"")) set.add(c);
  set.with_punctuation_other(true);
  set.exclude(kUrduFullStop);
  return set;
}

RemovalSet RemovalSet::none() { return RemovalSet{}; }

RemovalSet& RemovalSet::add(char32_t c) {
  excluded_.erase(c);
  added_.insert(c);
  return *this;
}

RemovalSet& RemovalSet::exclude(char32_t c) {
  added_.erase(c);
  excluded_.insert(c);
  return *this;
}

RemovalSet& RemovalSet::with_punctuation_other(bool enabled) {
  punctuation_other_ = enabled;
  return *this;
}

bool RemovalSet::contains(char32_t c) const {
  if (excluded_.count(c)) return false;
  if (added_.count(c)) return true;
  return punctuation_other_ && is_punctuation_other(c);
}

NormalizedText normalize(std::string_view raw, const RemovalSet& removal) {
  const std::u32string scalars = decode_utf8(raw);

  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;  // collapsed run waiting for a non-space
  bool at_line_start = true;
  for (char32_t c : scalars) {
    if (removal.contains(c)) c = U' ';
    if (c == U'\t' || c == U'\r') c = U' ';

    if (c == U' ') {
      pending_space = true;
      continue;
    }
    if (c == U'\n') {
      // trailing spaces on the line vanish
      pending_space = false;
      at_line_start = true;
      out.push_back('\n');
      continue;
    }
    if (pending_space && !at_line_start) out.push_back(' ');
    pending_space = false;
    at_line_start = false;
    append_utf8(out, c);
  }
  return NormalizedText(std::move(out));
}

TokenStream tokenize(const NormalizedText& text, std::u32string_view delimiters) {
  TokenStream stream;
  std::vector<std::string> sentence;
  std::string token;

  auto flush_token = [&] {
    if (!token.empty()) {
      sentence.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!sentence.empty()) {
      stream.sentences.push_back(std::move(sentence));
      sentence.clear();
    }
  };

  for (char32_t c : decode_utf8(text.str())) {
    if (c == U'\n' || delimiters.find(c) != std::u32string_view::npos) {
      flush_sentence();
    } else if (c == U' ') {
      flush_token();
    } else {
      append_utf8(token, c);
    }
  }
  flush_sentence();
  return stream;
}

TokenStream remove_stopwords(const TokenStream& stream, const StopList& stops) {
  TokenStream out;
  for (const auto& sentence : stream.sentences) {
    std::vector<std::string> kept;
    kept.reserve(sentence.size());
    for (const auto& token : sentence) {
      if (!stops.contains(token)) kept.push_back(token);
    }
    if (!kept.empty()) out.sentences.push_back(std::move(kept));
  }
  return out;
}

StopList::StopList(std::vector<std::string> words) {
  for (auto& w : words) {
    if (!w.empty()) words_.insert(std::move(w));
  }
}

StopList StopList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stop list: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return StopList(std::move(words));
}

bool StopList::contains(std::string_view token) const { return words_.find(token) != words_.end(); }

TokenStream load_token_stream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus: " + path.string());
  TokenStream stream;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> sentence;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto next = line.find(' ', pos);
      const auto end = next == std::string::npos ? line.size() : next;
      if (end > pos) sentence.emplace_back(line, pos, end - pos);
      pos = end + 1;
    }
    if (!sentence.empty()) stream.sentences.push_back(std::move(sentence));
  }
  return stream;
}

void write_token_stream(const TokenStream& stream, std::ostream& out) {
  for (const auto& sentence : stream.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) out.put(' ');
      out << sentence[i];
    }
    out.put('\n');
  }
}

}  // namespace subvec
