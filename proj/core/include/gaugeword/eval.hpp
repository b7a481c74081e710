#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gaugeword/matcore.hpp"

namespace gaugeword {

// Ordered vocabulary with word vectors as the columns of V (d x p), plus an
// optional context factor U (n x d).
class Embedding {
 public:
  Embedding(std::vector<std::string> vocab, Matrix v,
            std::optional<Matrix> u = std::nullopt);

  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  const Matrix& v() const noexcept { return v_; }
  const std::optional<Matrix>& u() const noexcept { return u_; }
  Eigen::Index dim() const noexcept { return v_.rows(); }
  std::size_t size() const noexcept { return vocab_.size(); }

  // Column of `word` after lowercasing; the first occurrence wins when two
  // vocabulary entries collide after lowercasing.
  std::optional<Eigen::Index> find(std::string_view word) const;

  // Same vocabulary, new V (and U).
  Embedding with_v(Matrix v) const;
  Embedding with_factors(Matrix v, std::optional<Matrix> u) const;

 private:
  std::vector<std::string> vocab_;
  Matrix v_;
  std::optional<Matrix> u_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

struct WordPair {
  std::string first;
  std::string second;
  double human_score;
};

struct SimilarityTestSet {
  std::string name;
  std::vector<WordPair> pairs;
};

// Pairs, one per line: word1 SEP word2 SEP score with SEP a tab or comma.
// Blank lines and lines starting with '#' are skipped, as is a single header
// line recognised by a non-numeric third field. Throws MalformedLine.
SimilarityTestSet read_testset(std::istream& in, std::string name);
SimilarityTestSet read_testset_file(const std::string& path);

enum class CorrelationMethod { spearman, pearson };

std::string_view to_string(CorrelationMethod method);
std::optional<CorrelationMethod> parse_method(std::string_view name);

inline constexpr double kZeroVectorTolerance = 1e-12;

// <a, b> / (|a| |b|), clamped to [-1, 1]. Throws ZeroVector.
double cosine(const Eigen::Ref<const Vector>& a,
              const Eigen::Ref<const Vector>& b);

// Sample correlation. Throws LengthMismatch / TooFewPairs / ConstantInput.
double pearson(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average ranks (ties share the mean rank).
double spearman(std::span<const double> x, std::span<const double> y);
double correlate(CorrelationMethod method, std::span<const double> x,
                 std::span<const double> y);

// 1-based ranks; tied values get the mean of the rank range they occupy.
std::vector<double> average_ranks(std::span<const double> x);

struct EvalReport {
  std::string testset;
  CorrelationMethod method = CorrelationMethod::spearman;
  double score = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped_oov = 0;
  std::size_t pairs_skipped_zero = 0;

  std::size_t total() const {
    return pairs_used + pairs_skipped_oov + pairs_skipped_zero;
  }
};

/// A test set resolved against one vocabulary. The embedding's columns that
/// the test set touches are gathered into a compact d x m block, so scoring a
/// transformed embedding only needs C times that block.
class PreparedTask {
 public:
  PreparedTask(const Embedding& emb, const SimilarityTestSet& testset);

  // Columns of the source embedding referenced by resolvable pairs, in
  // compact order.
  const Matrix& compact_v() const noexcept { return compact_; }
  std::size_t resolvable() const noexcept { return left_.size(); }
  std::size_t oov() const noexcept { return oov_; }
  const std::string& name() const noexcept { return name_; }

  // Score V_compact (d x m, same column order as compact_v()).
  EvalReport score(const Matrix& v_compact, CorrelationMethod method) const;

  // Evaluate the original embedding.
  EvalReport score(CorrelationMethod method) const {
    return score(compact_, method);
  }

 private:
  std::string name_;
  Matrix compact_;
  std::vector<Eigen::Index> left_;
  std::vector<Eigen::Index> right_;
  std::vector<double> human_;
  std::size_t oov_ = 0;
};

/// g(D, V): correlation between cosine similarities and human scores over the
/// resolvable pairs. OOV pairs and pairs touching a zero vector are skipped
/// and counted. Throws TooFewPairs with fewer than two usable pairs.
EvalReport evaluate(const Embedding& emb, const SimilarityTestSet& testset,
                    CorrelationMethod method);

}  // namespace gaugeword
