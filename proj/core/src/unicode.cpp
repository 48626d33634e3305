#include "subvec/unicode.hpp"

#include <algorithm>
#include <array>

#include "subvec/errors.hpp"

namespace subvec {

namespace {

struct CodepointRange {
  char32_t lo;
  char32_t hi;
};

// Unicode 13.0 general category Po, as contiguous ranges.
constexpr CodepointRange kPunctuationOther[] = {
#include "unicode_po_ranges.inc"
};

}  // namespace

bool is_punctuation_other(char32_t c) {
  auto it = std::upper_bound(std::begin(kPunctuationOther), std::end(kPunctuationOther), c,
                             [](char32_t v, const CodepointRange& r) { return v < r.lo; });
  if (it == std::begin(kPunctuationOther)) return false;
  --it;
  return c <= it->hi;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw InvalidEncoding(i);
    }
    if (i + len > n) throw InvalidEncoding(i);
    for (int k = 1; k < len; ++k) {
      const auto bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80) throw InvalidEncoding(i);
      cp = (cp << 6) | (bk & 0x3F);
    }
    constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len]) throw InvalidEncoding(i);  // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) throw InvalidEncoding(i);
    if (cp > 0x10FFFF) throw InvalidEncoding(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) append_utf8(out, c);
  return out;
}

std::size_t utf8_length(std::string_view bytes) {
  std::size_t count = 0;
  for (char c : bytes) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

}  // namespace subvec
