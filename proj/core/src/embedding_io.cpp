#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "subvec/embedding.hpp"
#include "subvec/errors.hpp"

namespace subvec {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'B', 'V', 'E', 'C', '0', '1'};
constexpr std::uint8_t kHashFnv1a32 = 1;

void write_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint8_t read_u8(std::istream& in) {
  const int c = in.get();
  if (c == EOF) throw IoError("model file truncated");
  return static_cast<std::uint8_t>(c);
}

std::uint32_t read_u32(std::istream& in) {
  char buf[4];
  if (!in.read(buf, 4)) throw IoError("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw IoError("model file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

void write_f32_block(std::ostream& out, std::span<const float> values) {
  static_assert(sizeof(float) == 4);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 4));
  } else {
    for (const float f : values) {
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      write_u32(out, bits);
    }
  }
}

void read_f32_block(std::istream& in, std::span<float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * 4))) {
      throw IoError("model file truncated");
    }
  } else {
    for (float& f : values) {
      const std::uint32_t bits = read_u32(in);
      std::memcpy(&f, &bits, 4);
    }
  }
}

void append_fixed(std::string& line, float v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<double>(v),
                                 std::chars_format::fixed, 8);
  line.append(buf, res.ptr);
}

}  // namespace

void EmbeddingModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, config_.dim);
  write_u64(out, vocab_.size());
  write_u64(out, config_.subword.bucket_count);
  write_u32(out, config_.subword.min_n);
  write_u32(out, config_.subword.max_n);
  write_u8(out, config_.subword.boundary_markers ? 1 : 0);
  write_u8(out, kHashFnv1a32);
  write_u8(out, static_cast<std::uint8_t>(config_.compose));
  write_u32(out, vocab_.min_count());

  for (std::uint32_t id = 0; id < vocab_.size(); ++id) {
    const std::string& token = vocab_.token_of(id);
    write_u32(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    write_u64(out, vocab_.count_of(id));
  }

  write_f32_block(out, input_);
  write_f32_block(out, output_);
  if (!out) throw IoError("model write failed");
}

EmbeddingModel EmbeddingModel::load(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a subvec embedding model (bad magic)");
  }

  EmbeddingModel model;
  model.config_.dim = read_u32(in);
  const std::uint64_t v = read_u64(in);
  model.config_.subword.bucket_count = read_u64(in);
  model.config_.subword.min_n = read_u32(in);
  model.config_.subword.max_n = read_u32(in);
  model.config_.subword.boundary_markers = read_u8(in) != 0;
  const std::uint8_t hash_id = read_u8(in);
  if (hash_id != kHashFnv1a32) {
    throw IoError("unsupported n-gram hash id " + std::to_string(hash_id));
  }
  model.config_.compose = static_cast<Composition>(read_u8(in));
  model.config_.min_count = read_u32(in);

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(v);
  for (std::uint64_t i = 0; i < v; ++i) {
    const std::uint32_t len = read_u32(in);
    std::string token(len, '\0');
    if (!in.read(token.data(), len)) throw IoError("model file truncated");
    const std::uint64_t count = read_u64(in);
    entries.emplace_back(std::move(token), count);
  }
  model.vocab_ = Vocabulary::from_entries(std::move(entries), model.config_.min_count);

  model.input_.resize((v + model.config_.subword.bucket_count) * model.config_.dim);
  model.output_.resize(v * model.config_.dim);
  read_f32_block(in, model.input_);
  read_f32_block(in, model.output_);
  model.rebuild_row_cache();
  return model;
}

void EmbeddingModel::write_vec(std::ostream& out) const {
  out << vocab_.size() << ' ' << config_.dim << '\n';
  std::string line;
  for (std::uint32_t id = 0; id < vocab_.size(); ++id) {
    line.clear();
    line += vocab_.token_of(id);
    for (const float x : word_vector(vocab_.token_of(id))) {
      line.push_back(' ');
      append_fixed(line, x);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("vector file write failed");
}

std::vector<std::pair<std::string, std::vector<float>>> read_vec(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing header");
  std::size_t count = 0, dim = 0;
  {
    std::istringstream hs(header);
    if (!(hs >> count >> dim)) throw ParseError(1, "header must be 'V dim'");
  }

  std::vector<std::pair<std::string, std::vector<float>>> rows;
  rows.reserve(count);
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError(i + 2, "fewer rows than header declares");
    const auto first_space = line.find(' ');
    if (first_space == std::string::npos) throw ParseError(i + 2, "expected token and vector");
    std::vector<float> values;
    values.reserve(dim);
    const char* p = line.data() + first_space;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float v = 0.0f;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw ParseError(i + 2, "bad float");
      values.push_back(v);
      p = res.ptr;
    }
    if (values.size() != dim) throw ParseError(i + 2, "vector length does not match header");
    rows.emplace_back(line.substr(0, first_space), std::move(values));
  }
  return rows;
}

}  // namespace subvec
