#include "subvec/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "subvec/errors.hpp"

namespace subvec {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    if (next == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(pos)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(pos, next - pos)));
    pos = next + 1;
  }
  return fields;
}

}  // namespace

SimilarityDataset parse_dataset(std::istream& in, std::string name) {
  SimilarityDataset dataset;
  dataset.name = std::move(name);

  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
    const auto fields = split_fields(line, sep);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }

    double score = 0.0;
    if (!parse_double(fields[2], score)) {
      if (first_content_line) {  // header row
        first_content_line = false;
        continue;
      }
      throw ParseError(line_no, "non-numeric score '" + fields[2] + "'");
    }
    first_content_line = false;

    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty word");
    auto key = std::minmax(fields[0], fields[1]);
    if (!seen.insert({key.first, key.second}).second) {
      throw DuplicatePair(fields[0], fields[1]);
    }
    dataset.pairs.push_back({fields[0], fields[1], score});
  }
  return dataset;
}

SimilarityDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path.string());
  return parse_dataset(in, path.stem().string());
}

RankedSeries rank_series(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  RankedSeries out;
  out.values.assign(values.begin(), values.end());
  out.ranks.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j hold one tied run; they share the mean rank
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = rank;
    i = j + 1;
  }
  return out;
}

namespace {

bool has_ties(const RankedSeries& r) {
  std::vector<double> sorted = r.values;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

double pearson_of_ranks(const RankedSeries& rx, const RankedSeries& ry) {
  const std::size_t n = rx.ranks.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += rx.ranks[i];
    mean_y += ry.ranks[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx.ranks[i] - mean_x;
    const double dy = ry.ranks[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) throw ZeroVariance();
  return cov / std::sqrt(var_x * var_y);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
  if (x.size() < 2) throw TooFewPairs(x.size());

  const RankedSeries rx = rank_series(x);
  const RankedSeries ry = rank_series(y);

  if (!has_ties(rx) && !has_ties(ry)) {
    const double n = static_cast<double>(x.size());
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = rx.ranks[i] - ry.ranks[i];
      sum_d2 += d * d;
    }
    return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
  }
  return pearson_of_ranks(rx, ry);
}

EvalReport evaluate(const PairScorer& scorer, const SimilarityDataset& dataset,
                    std::string model_name) {
  EvalReport report;
  report.model = std::move(model_name);
  report.dataset = dataset.name;
  report.n_total = dataset.pairs.size();

  std::vector<double> human, predicted;
  for (const auto& pair : dataset.pairs) {
    const auto score = scorer(pair.word1, pair.word2);
    if (!score) {
      report.oov_pairs.emplace_back(pair.word1, pair.word2);
      continue;
    }
    human.push_back(pair.human_score);
    predicted.push_back(*score);
  }
  report.n_scored = human.size();
  if (report.n_scored < 2) throw TooFewPairs(report.n_scored);
  report.rho = spearman(human, predicted);
  return report;
}

namespace {

std::vector<std::string> ordered_unique(std::span<const EvalReport> reports,
                                        const std::string EvalReport::*field) {
  std::vector<std::string> out;
  for (const auto& r : reports) {
    if (std::find(out.begin(), out.end(), r.*field) == out.end()) out.push_back(r.*field);
  }
  return out;
}

std::string format_cell(const EvalReport& r) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.4f (%zu/%zu)", r.rho, r.n_scored, r.n_total);
  return buf;
}

}  // namespace

std::string render_comparison(std::span<const EvalReport> reports) {
  const auto models = ordered_unique(reports, &EvalReport::model);
  const auto datasets = ordered_unique(reports, &EvalReport::dataset);

  auto find_report = [&](const std::string& model,
                         const std::string& dataset) -> const EvalReport* {
    for (const auto& r : reports) {
      if (r.model == model && r.dataset == dataset) return &r;
    }
    return nullptr;
  };

  // column widths
  std::size_t name_width = 5;  // "model"
  for (const auto& m : models) name_width = std::max(name_width, m.size());
  std::vector<std::size_t> widths(datasets.size());
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    widths[c] = datasets[c].size();
    for (const auto& m : models) {
      if (const auto* r = find_report(m, datasets[c])) {
        widths[c] = std::max(widths[c], format_cell(*r).size());
      }
    }
  }

  std::string out;
  auto pad = [&out](const std::string& s, std::size_t w) {
    out += s;
    out.append(w > s.size() ? w - s.size() : 0, ' ');
  };

  pad("model", name_width);
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    out += "  ";
    pad(datasets[c], widths[c]);
  }
  out += '\n';
  for (const auto& m : models) {
    pad(m, name_width);
    for (std::size_t c = 0; c < datasets.size(); ++c) {
      out += "  ";
      const auto* r = find_report(m, datasets[c]);
      pad(r ? format_cell(*r) : "-", widths[c]);
    }
    out += '\n';
  }
  return out;
}

std::string render_comparison_tsv(std::span<const EvalReport> reports) {
  std::string out;
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.rho);
    out += r.model;
    out += '\t';
    out += r.dataset;
    out += '\t';
    out += buf;
    out += '\t';
    out += std::to_string(r.n_scored);
    out += '\t';
    out += std::to_string(r.n_total);
    out += '\n';
  }
  return out;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
// (eigenvalues, column-major eigenvectors), unsorted.
void jacobi_symmetric_eigen(std::vector<double>& a, std::size_t n, std::vector<double>& values,
                            std::vector<double>& vectors) {
  vectors.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off < 1e-26) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[p * n + k] = a[k * n + p];
          a[k * n + q] = s * akp + c * akq;
          a[q * n + k] = a[k * n + q];
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vectors[k * n + p];
          const double vkq = vectors[k * n + q];
          vectors[k * n + p] = c * vkp - s * vkq;
          vectors[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
}

}  // namespace

std::vector<ProjectedWord> project_2d(const EmbeddingModel& model,
                                      std::span<const std::string> words,
                                      std::vector<std::string>* skipped) {
  const std::size_t dim = model.dim();
  std::vector<std::string> tokens;
  std::vector<double> data;  // row per word
  for (const auto& word : words) {
    try {
      const auto vec = model.word_vector(word);
      tokens.push_back(word);
      data.insert(data.end(), vec.begin(), vec.end());
    } catch (const NoRepresentation&) {
      if (skipped) skipped->push_back(word);
    }
  }

  const std::size_t n = tokens.size();
  if (n < 3) throw std::invalid_argument("need at least 3 representable words to project");

  // mean-center
  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += data[i * dim + d];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) data[i * dim + d] -= mean[d];
  }

  // sample covariance
  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data.data() + i * dim;
    for (std::size_t d1 = 0; d1 < dim; ++d1) {
      for (std::size_t d2 = d1; d2 < dim; ++d2) cov[d1 * dim + d2] += row[d1] * row[d2];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t d1 = 0; d1 < dim; ++d1) {
    for (std::size_t d2 = d1; d2 < dim; ++d2) {
      cov[d1 * dim + d2] /= denom;
      cov[d2 * dim + d1] = cov[d1 * dim + d2];
    }
  }

  std::vector<double> values, vectors;
  jacobi_symmetric_eigen(cov, dim, values, vectors);

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });

  // top-2 components, first nonzero loading positive
  std::vector<double> components(2 * dim);
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t col = order[c];
    double sign = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double loading = vectors[d * dim + col];
      if (std::abs(loading) > 1e-12) {
        sign = loading > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t d = 0; d < dim; ++d) components[c * dim + d] = sign * vectors[d * dim + col];
  }

  std::vector<ProjectedWord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ProjectedWord p;
    p.token = tokens[i];
    for (std::size_t d = 0; d < dim; ++d) {
      p.x += data[i * dim + d] * components[d];
      p.y += data[i * dim + d] * components[dim + d];
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace subvec
