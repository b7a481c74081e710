#include "gaugeword/lsa.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace gaugeword {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenizedCorpus read_corpus(std::istream& in) {
  TokenizedCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    corpus.documents.push_back(tokenize(line));
  }
  return corpus;
}

TokenizedCorpus read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open corpus " + path);
  return read_corpus(in);
}

DocTermMatrix build_doc_term(const TokenizedCorpus& corpus,
                             std::size_t min_count, std::size_t max_vocab) {
  if (min_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  }
  std::unordered_map<std::string, std::size_t> totals;
  for (const auto& doc : corpus.documents) {
    for (const auto& tok : doc) ++totals[tok];
  }

  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (const auto& [word, count] : totals) {
    if (count >= min_count) ranked.emplace_back(word, count);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (max_vocab > 0 && ranked.size() > max_vocab) ranked.resize(max_vocab);
  if (ranked.empty()) {
    throw Error(ErrorCode::EmptyVocabulary,
                "no word reaches min_count " + std::to_string(min_count));
  }

  DocTermMatrix dtm;
  std::unordered_map<std::string, Eigen::Index> column;
  dtm.vocab.reserve(ranked.size());
  for (const auto& [word, count] : ranked) {
    column.emplace(word, static_cast<Eigen::Index>(dtm.vocab.size()));
    dtm.vocab.push_back(word);
  }
  const auto n = static_cast<Eigen::Index>(corpus.documents.size());
  dtm.counts = Matrix::Zero(n, static_cast<Eigen::Index>(dtm.vocab.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& tok : corpus.documents[static_cast<std::size_t>(i)]) {
      if (auto it = column.find(tok); it != column.end()) {
        dtm.counts(i, it->second) += 1.0;
      }
    }
  }
  return dtm;
}

void write_doc_term_csv(const DocTermMatrix& dtm, std::ostream& out) {
  for (std::size_t j = 0; j < dtm.vocab.size(); ++j) {
    if (j) out << ',';
    out << csv_field(dtm.vocab[j]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < dtm.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < dtm.counts.cols(); ++j) {
      if (j) out << ',';
      out << static_cast<long long>(dtm.counts(i, j));
    }
    out << '\n';
  }
}

LsaSolution lsa_solve(const Matrix& x, Eigen::Index d, double alpha) {
  const ThinSvd svd = svd_thin(x, d);
  const double top = svd.sigma(0);
  const double last = svd.sigma(d - 1);
  if (!(top > 0.0) || !(last > 1e-14 * top)) {
    std::ostringstream os;
    os << "sigma_" << d << " = " << last
       << " is zero; the rank-d solution set is not {CV*}";
    throw Error(ErrorCode::DegenerateSpectrum, os.str());
  }

  LsaSolution out;
  out.sigma = svd.sigma;
  if (last < 1e-10 * top) {
    std::ostringstream os;
    os << "sigma_d / sigma_1 = " << last / top << " is below 1e-10";
    out.warnings.push_back({ErrorCode::DegenerateSpectrum, os.str()});
  }
  const Vector left = svd.sigma.array().pow(alpha).matrix();
  const Vector right = svd.sigma.array().pow(1.0 - alpha).matrix();
  out.pair.u = svd.a * left.asDiagonal();
  out.pair.v = right.asDiagonal() * svd.b.transpose();
  return out;
}

double reconstruction_error(const Matrix& x, const FactorPair& pair) {
  check_pair_shape(pair);
  if (x.rows() != pair.u.rows() || x.cols() != pair.v.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                "reconstruction_error: X shape differs from UV");
  }
  return (x - pair.u * pair.v).norm();
}

}  // namespace gaugeword
