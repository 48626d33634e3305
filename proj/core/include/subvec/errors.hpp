#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subvec {

// Root of everything thrown by the library. Callers that only care about
// "did it work" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidEncoding : public Error {
 public:
  explicit InvalidEncoding(std::size_t byte_offset)
      : Error("invalid UTF-8 byte sequence at offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary() : Error("no token meets the minimum count threshold") {}
};

class UnknownId : public Error {
 public:
  explicit UnknownId(std::size_t id)
      : Error("id " + std::to_string(id) + " is not in the vocabulary") {}
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(const std::string& word) : Error("no co-occurrence row for '" + word + "'") {}
};

class NoRepresentation : public Error {
 public:
  explicit NoRepresentation(const std::string& word)
      : Error("'" + word + "' is out of vocabulary and has no subword of admissible length") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus contains no usable token") {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cosine is undefined for a zero vector") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicatePair : public Error {
 public:
  DuplicatePair(const std::string& w1, const std::string& w2)
      : Error("duplicate word pair '" + w1 + "' / '" + w2 + "'") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("series lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class TooFewPairs : public Error {
 public:
  explicit TooFewPairs(std::size_t n)
      : Error("need at least 2 scored pairs, got " + std::to_string(n)) {}
};

class ZeroVariance : public Error {
 public:
  ZeroVariance() : Error("correlation is undefined when one series is constant") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace subvec
