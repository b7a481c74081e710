#include "gaugeword/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "gaugeword/error.hpp"
#include "gaugeword/format.hpp"

namespace gaugeword {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<long long> to_integer(std::string_view s) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void malformed(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw Error(ErrorCode::MalformedLine,
              path + " line " + std::to_string(line_no) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace

std::optional<VectorFormat> parse_vector_format(std::string_view name) {
  if (name == "auto") return VectorFormat::auto_detect;
  if (name == "word2vec") return VectorFormat::word2vec;
  if (name == "glove") return VectorFormat::glove;
  return std::nullopt;
}

LabelledRows read_labelled_rows(const std::string& path, VectorFormat format,
                                bool dedupe) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);

  LabelledRows out;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  std::optional<long long> header_count;
  long long dim = -1;
  std::size_t line_no = 0;
  std::size_t rows_read = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (rows_read == 0 && !header_count && format != VectorFormat::glove) {
      const auto a = tokens.size() == 2 ? to_integer(tokens[0]) : std::nullopt;
      const auto b = tokens.size() == 2 ? to_integer(tokens[1]) : std::nullopt;
      if (a && b) {
        if (*a < 0 || *b < 1) malformed(path, line_no, "bad word2vec header");
        header_count = *a;
        dim = *b;
        continue;
      }
      if (format == VectorFormat::word2vec) {
        malformed(path, line_no, "expected a 'count dim' header");
      }
    }

    if (tokens.size() < 2) malformed(path, line_no, "row has no values");
    const auto width = static_cast<long long>(tokens.size()) - 1;
    if (dim < 0) dim = width;
    if (width != dim) {
      malformed(path, line_no,
                "expected " + std::to_string(dim) + " values, found " +
                    std::to_string(width));
    }
    ++rows_read;
    std::string label(tokens[0]);
    if (dedupe && !seen.insert(label).second) {
      ++out.duplicates_dropped;
      continue;
    }
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto v = to_double(tokens[k]);
      if (!v || !std::isfinite(*v)) {
        malformed(path, line_no,
                  "value '" + std::string(tokens[k]) + "' is not a finite number");
      }
      values.push_back(*v);
    }
    out.labels.push_back(std::move(label));
  }
  if (header_count && *header_count != static_cast<long long>(rows_read)) {
    throw Error(ErrorCode::DimensionMismatch,
                path + ": header declares " + std::to_string(*header_count) +
                    " rows but " + std::to_string(rows_read) + " were read");
  }
  if (out.labels.empty()) {
    throw Error(ErrorCode::EmptyVocabulary, path + " contains no vectors");
  }
  const auto n = static_cast<Eigen::Index>(out.labels.size());
  out.rows = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                            Eigen::RowMajor>>(values.data(), n,
                                                              dim);
  return out;
}

void write_labelled_rows(const std::vector<std::string>& labels,
                         const Matrix& rows, const std::string& path,
                         VectorFormat format) {
  if (labels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "refusing to write an empty file");
  }
  if (static_cast<Eigen::Index>(labels.size()) != rows.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "labels and rows differ in count");
  }
  auto out = open_out(path);
  if (format == VectorFormat::word2vec) {
    out << labels.size() << ' ' << rows.cols() << '\n';
  }
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      out << ' ' << format_real(rows(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

LoadedEmbedding load_embedding_text(const std::string& path,
                                    VectorFormat format) {
  LabelledRows rows = read_labelled_rows(path, format, true);
  return LoadedEmbedding{
      Embedding(std::move(rows.labels), rows.rows.transpose()),
      rows.duplicates_dropped};
}

LoadedEmbedding load_embedding_pair(const std::string& v_path,
                                    const std::string& u_path,
                                    VectorFormat format) {
  LabelledRows v_rows = read_labelled_rows(v_path, format, true);
  LabelledRows u_rows = read_labelled_rows(u_path, format, false);
  if (u_rows.rows.cols() != v_rows.rows.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "U has d = " + std::to_string(u_rows.rows.cols()) +
                    " but V has d = " + std::to_string(v_rows.rows.cols()));
  }
  return LoadedEmbedding{Embedding(std::move(v_rows.labels),
                                   v_rows.rows.transpose(),
                                   std::move(u_rows.rows)),
                         v_rows.duplicates_dropped};
}

void save_embedding_text(const Embedding& emb, const std::string& path,
                         VectorFormat format) {
  if (emb.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "cannot save an empty vocabulary");
  }
  write_labelled_rows(emb.vocab(), emb.v().transpose(), path,
                      format == VectorFormat::auto_detect ? VectorFormat::glove
                                                          : format);
}

void save_context_text(const Matrix& u, const std::string& path,
                       VectorFormat format,
                       const std::vector<std::string>& labels) {
  std::vector<std::string> names = labels;
  if (names.empty()) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      names.push_back("ctx" + std::to_string(i));
    }
  }
  write_labelled_rows(names, u, path,
                      format == VectorFormat::auto_detect ? VectorFormat::glove
                                                          : format);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto first = field.find_first_not_of(" \t\r");
      const auto last = field.find_last_not_of(" \t\r");
      const auto v = first == std::string::npos
                         ? std::nullopt
                         : to_double(std::string_view(field).substr(
                               first, last - first + 1));
      if (!v) malformed(path, line_no, "bad numeric field '" + field + "'");
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      malformed(path, line_no, "row width differs from the first row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::MalformedLine, path + " is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

Vector read_vector_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    for (auto tok : split_ws(line)) {
      const auto v = to_double(tok);
      if (!v) malformed(path, line_no, "not a number: " + std::string(tok));
      values.push_back(*v);
    }
  }
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

}  // namespace gaugeword
