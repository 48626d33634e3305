#include "subvec/subword.hpp"

#include "subvec/errors.hpp"
#include "subvec/unicode.hpp"

namespace subvec {

std::vector<std::string> extract_ngrams(std::string_view word, const SubwordConfig& cfg) {
  std::u32string scalars = decode_utf8(word);
  if (cfg.boundary_markers) {
    scalars.insert(scalars.begin(), U'<');
    scalars.push_back(U'>');
  }

  const std::size_t len = scalars.size();
  std::vector<std::string> ngrams;
  for (std::size_t n = cfg.min_n; n <= cfg.max_n && n <= len; ++n) {
    for (std::size_t pos = 0; pos + n <= len; ++pos) {
      ngrams.push_back(encode_utf8(std::u32string_view(scalars).substr(pos, n)));
    }
  }
  return ngrams;
}

WordRowIds word_row_ids(std::string_view word, const Vocabulary& vocab, const SubwordConfig& cfg) {
  WordRowIds out;
  out.vocab_id = vocab.id_of(word);
  out.ngrams = extract_ngrams(word, cfg);
  if (!out.vocab_id && out.ngrams.empty()) throw NoRepresentation(std::string(word));

  out.row_ids.reserve(out.ngrams.size());
  for (const auto& ngram : out.ngrams) {
    out.row_ids.push_back(vocab.size() + hash_ngram(ngram, cfg.bucket_count));
  }
  return out;
}

}  // namespace subvec
