#include "gaugeword/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "gaugeword/error.hpp"

namespace gaugeword {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "correlation inputs have lengths " + std::to_string(x.size()) +
                    " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::TooFewPairs, "correlation needs at least 2 values");
  }
}

}  // namespace

Embedding::Embedding(std::vector<std::string> vocab, Matrix v,
                     std::optional<Matrix> u)
    : vocab_(std::move(vocab)), v_(std::move(v)), u_(std::move(u)) {
  if (static_cast<Eigen::Index>(vocab_.size()) != v_.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                "vocabulary size " + std::to_string(vocab_.size()) +
                    " does not match " + std::to_string(v_.cols()) +
                    " columns of V");
  }
  if (!all_finite(v_)) {
    throw Error(ErrorCode::InvalidArgument, "embedding has non-finite entries");
  }
  if (u_ && u_->cols() != v_.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "U and V do not share dimension d");
  }
  index_.reserve(vocab_.size());
  for (std::size_t j = 0; j < vocab_.size(); ++j) {
    index_.emplace(lowercase(vocab_[j]), static_cast<Eigen::Index>(j));
  }
}

std::optional<Eigen::Index> Embedding::find(std::string_view word) const {
  const auto it = index_.find(lowercase(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Embedding Embedding::with_v(Matrix v) const {
  return Embedding(vocab_, std::move(v), u_);
}

Embedding Embedding::with_factors(Matrix v, std::optional<Matrix> u) const {
  return Embedding(vocab_, std::move(v), std::move(u));
}

SimilarityTestSet read_testset(std::istream& in, std::string name) {
  SimilarityTestSet out{std::move(name), {}};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_fields(view);
    if (fields.size() < 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::MalformedLine,
                  out.name + " line " + std::to_string(line_no) +
                      ": expected word1 SEP word2 SEP score");
    }
    const auto score = parse_double(fields[2]);
    if (!score) {
      if (!header_seen && out.pairs.empty()) {
        header_seen = true;
        continue;
      }
      throw Error(ErrorCode::MalformedLine,
                  out.name + " line " + std::to_string(line_no) +
                      ": score is not a number");
    }
    if (!std::isfinite(*score)) {
      throw Error(ErrorCode::MalformedLine,
                  out.name + " line " + std::to_string(line_no) +
                      ": score is not finite");
    }
    out.pairs.push_back(
        {std::string(fields[0]), std::string(fields[1]), *score});
  }
  if (out.pairs.empty()) {
    throw Error(ErrorCode::TooFewPairs, out.name + " contains no pairs");
  }
  return out;
}

SimilarityTestSet read_testset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open test set " + path);
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  return read_testset(in, name);
}

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::spearman ? "spearman" : "pearson";
}

std::optional<CorrelationMethod> parse_method(std::string_view name) {
  if (name == "spearman") return CorrelationMethod::spearman;
  if (name == "pearson") return CorrelationMethod::pearson;
  return std::nullopt;
}

double cosine(const Eigen::Ref<const Vector>& a,
              const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "cosine of vectors of unequal size");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > kZeroVectorTolerance) || !(nb > kZeroVectorTolerance)) {
    throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::ConstantInput, "correlation of a constant list");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double correlate(CorrelationMethod method, std::span<const double> x,
                 std::span<const double> y) {
  return method == CorrelationMethod::spearman ? spearman(x, y) : pearson(x, y);
}

PreparedTask::PreparedTask(const Embedding& emb,
                           const SimilarityTestSet& testset)
    : name_(testset.name) {
  std::unordered_map<Eigen::Index, Eigen::Index> compact_of;
  std::vector<Eigen::Index> source_columns;
  auto slot = [&](Eigen::Index col) {
    auto [it, inserted] = compact_of.emplace(
        col, static_cast<Eigen::Index>(source_columns.size()));
    if (inserted) source_columns.push_back(col);
    return it->second;
  };
  for (const auto& pair : testset.pairs) {
    const auto a = emb.find(pair.first);
    const auto b = emb.find(pair.second);
    if (!a || !b) {
      ++oov_;
      continue;
    }
    left_.push_back(slot(*a));
    right_.push_back(slot(*b));
    human_.push_back(pair.human_score);
  }
  compact_.resize(emb.dim(), static_cast<Eigen::Index>(source_columns.size()));
  for (std::size_t k = 0; k < source_columns.size(); ++k) {
    compact_.col(static_cast<Eigen::Index>(k)) = emb.v().col(source_columns[k]);
  }
}

EvalReport PreparedTask::score(const Matrix& v_compact,
                               CorrelationMethod method) const {
  if (v_compact.cols() != compact_.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                "compact V has the wrong number of columns");
  }
  EvalReport report;
  report.testset = name_;
  report.method = method;
  report.pairs_skipped_oov = oov_;

  const Vector norms = v_compact.colwise().norm().transpose();
  std::vector<double> model;
  std::vector<double> human;
  model.reserve(left_.size());
  human.reserve(left_.size());
  for (std::size_t k = 0; k < left_.size(); ++k) {
    const Eigen::Index a = left_[k];
    const Eigen::Index b = right_[k];
    if (!(norms(a) > kZeroVectorTolerance) ||
        !(norms(b) > kZeroVectorTolerance)) {
      ++report.pairs_skipped_zero;
      continue;
    }
    const double dot = v_compact.col(a).dot(v_compact.col(b));
    model.push_back(std::clamp(dot / (norms(a) * norms(b)), -1.0, 1.0));
    human.push_back(human_[k]);
  }
  report.pairs_used = model.size();
  if (model.size() < 2) {
    throw Error(ErrorCode::TooFewPairs,
                name_ + ": only " + std::to_string(model.size()) +
                    " usable pairs (" + std::to_string(oov_) + " OOV, " +
                    std::to_string(report.pairs_skipped_zero) +
                    " zero-vector)");
  }
  report.score = correlate(method, model, human);
  return report;
}

EvalReport evaluate(const Embedding& emb, const SimilarityTestSet& testset,
                    CorrelationMethod method) {
  return PreparedTask(emb, testset).score(method);
}

}  // namespace gaugeword
