#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace subvec {

// Strict UTF-8 decoding: rejects overlong forms, surrogates, values above
// U+10FFFF and truncated sequences. Throws InvalidEncoding with the byte
// offset of the offending sequence.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view scalars);

void append_utf8(std::string& out, char32_t c);

// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view bytes);

// General category Po (punctuation, other) per the embedded Unicode table.
bool is_punctuation_other(char32_t c);

}  // namespace subvec
