#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gaugeword/eval.hpp"
#include "gaugeword/gauge.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace gw = gaugeword;
using gw::CorrelationMethod;
using gw::Matrix;
using gw::Vector;

TEST(Embedding, LookupIsCaseInsensitiveFirstWins) {
  Matrix v = Matrix::Identity(2, 3);
  const gw::Embedding emb({"Apple", "apple", "pear"}, v);
  EXPECT_EQ(emb.find("APPLE"), 0);
  EXPECT_EQ(emb.find("pear"), 2);
  EXPECT_FALSE(emb.find("plum").has_value());
  EXPECT_EQ(emb.dim(), 2);
  EXPECT_EQ(emb.size(), 3u);
}

TEST(Embedding, ValidatesShapes) {
  EXPECT_GW_ERROR(gw::Embedding({"a"}, Matrix::Ones(2, 2)), ShapeMismatch);
  EXPECT_GW_ERROR(gw::Embedding({"a", "b"}, Matrix::Ones(2, 2), Matrix::Ones(3, 3)),
                  ShapeMismatch);
  Matrix bad = Matrix::Ones(2, 1);
  bad(0, 0) = INFINITY;
  EXPECT_GW_ERROR(gw::Embedding({"a"}, bad), InvalidArgument);
}

TEST(ReadTestset, FormatsAndHeader) {
  std::istringstream tsv("# comment\nword1\tword2\tscore\ncat\tdog\t7.5\n\ntiger\tcat\t9\n");
  const auto ts = gw::read_testset(tsv, "t");
  ASSERT_EQ(ts.pairs.size(), 2u);
  EXPECT_EQ(ts.pairs[1].first, "tiger");
  EXPECT_DOUBLE_EQ(ts.pairs[0].human_score, 7.5);

  std::istringstream csv("a,b,1\nc , d , 2.5\n");
  const auto ts2 = gw::read_testset(csv, "c");
  EXPECT_EQ(ts2.pairs[1].second, "d");
  EXPECT_DOUBLE_EQ(ts2.pairs[1].human_score, 2.5);
}

TEST(ReadTestset, Errors) {
  std::istringstream missing("a\tb\n");
  EXPECT_GW_ERROR(gw::read_testset(missing, "x"), MalformedLine);
  std::istringstream badnum("a\tb\t1\nc\td\tfoo\n");
  EXPECT_GW_ERROR(gw::read_testset(badnum, "x"), MalformedLine);
  std::istringstream empty("# nothing\n");
  EXPECT_GW_ERROR(gw::read_testset(empty, "x"), TooFewPairs);
  std::istringstream two_headers("w1\tw2\ts\nx\ty\tz\n");
  EXPECT_GW_ERROR(gw::read_testset(two_headers, "x"), MalformedLine);
}

TEST(Cosine, HandValuesAndZero) {
  Vector a(2), b(2);
  a << 1, 0;
  b << 1, 1;
  EXPECT_NEAR(gw::cosine(a, b), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_GW_ERROR(gw::cosine(a, Vector::Zero(2)), ZeroVector);
  EXPECT_GW_ERROR(gw::cosine(a, Vector::Ones(3)), LengthMismatch);
  EXPECT_DOUBLE_EQ(gw::cosine(a, 5.0 * a), 1.0);
}

TEST(Correlation, MatchesOracleOnRandomData) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coarse(0, 5);  // forces ties
  for (int trial = 0; trial < 100; ++trial) {
    const int n = oracle::uniform_int(rng, 2, 40);
    std::vector<double> x(n), y(n);
    const bool tied = trial % 2 == 0;
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) {
      x[i] = tied ? coarse(rng) : normal(rng);
      y[i] = tied ? coarse(rng) : normal(rng);
    }
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end()) ||
        *std::min_element(y.begin(), y.end()) == *std::max_element(y.begin(), y.end())) {
      continue;
    }
    EXPECT_NEAR(gw::pearson(x, y), oracle::pearson(x, y), 1e-12);
    EXPECT_NEAR(gw::spearman(x, y), oracle::spearman(x, y), 1e-12);
    const auto ranks = gw::average_ranks(x);
    const auto ref = oracle::midranks(x);
    for (int i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(ranks[i], ref[i]);
  }
}

TEST(Correlation, Errors) {
  std::vector<double> a{1, 2, 3}, b{1, 2}, c{4, 4, 4};
  EXPECT_GW_ERROR(gw::pearson(a, b), LengthMismatch);
  EXPECT_GW_ERROR(gw::pearson(a, c), ConstantInput);
  EXPECT_GW_ERROR(gw::spearman(a, c), ConstantInput);
  std::vector<double> one{1};
  EXPECT_GW_ERROR(gw::pearson(one, one), TooFewPairs);
}

TEST(Correlation, ParseMethod) {
  EXPECT_EQ(gw::parse_method("spearman"), CorrelationMethod::spearman);
  EXPECT_EQ(gw::parse_method("pearson"), CorrelationMethod::pearson);
  EXPECT_FALSE(gw::parse_method("kendall").has_value());
}

TEST(Evaluate, ToyEmbeddingHandValue) {
  // Cosines (1/sqrt2, 1/sqrt2, 0) against (3, 2, 1): ranks (2.5, 2.5, 1)
  // versus (3, 2, 1) give sqrt(3)/2.
  const gw::EvalReport r = gw::evaluate(fixtures::toy_embedding(), fixtures::toy_testset(),
                                        CorrelationMethod::spearman);
  EXPECT_NEAR(r.score, std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_EQ(r.pairs_used, 3u);
  EXPECT_EQ(r.total(), 3u);
}

TEST(Evaluate, SkipsOovAndZeroVectors) {
  Matrix v(2, 4);
  v << 1, 0, 1, 0,
       0, 1, 1, 0;
  const gw::Embedding emb({"a", "b", "c", "zero"}, v);
  const gw::SimilarityTestSet ts{"t", {{"a", "b", 1}, {"a", "c", 2}, {"b", "c", 3},
                                       {"a", "missing", 4}, {"zero", "a", 5}}};
  const auto r = gw::evaluate(emb, ts, CorrelationMethod::pearson);
  EXPECT_EQ(r.pairs_used, 3u);
  EXPECT_EQ(r.pairs_skipped_oov, 1u);
  EXPECT_EQ(r.pairs_skipped_zero, 1u);
  EXPECT_EQ(r.total(), 5u);

  const gw::SimilarityTestSet tiny{"tiny", {{"a", "b", 1}, {"a", "nope", 2}}};
  EXPECT_GW_ERROR(gw::evaluate(emb, tiny, CorrelationMethod::pearson), TooFewPairs);
}

TEST(Evaluate, MatchesOracleOnSyntheticTask) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto task = oracle::synthetic_task(seed, 5, 50, 30);
    const auto emb = fixtures::embedding_of(task);
    const auto ts = fixtures::testset_of(task);
    EXPECT_NEAR(gw::evaluate(emb, ts, CorrelationMethod::spearman).score,
                oracle::score(task.v, task.pairs, true), 1e-12);
    EXPECT_NEAR(gw::evaluate(emb, ts, CorrelationMethod::pearson).score,
                oracle::score(task.v, task.pairs, false), 1e-12);
  }
}

// Scores are unchanged by V -> c Q V.
TEST(Evaluate, InvariantUnderScaledOrthogonal) {
  std::mt19937_64 rng(42);
  const auto task = oracle::synthetic_task(7, 6, 50, 30);
  const auto emb = fixtures::embedding_of(task);
  const auto ts = fixtures::testset_of(task);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix q = oracle::random_orthogonal(rng, 6);
    const double c = std::exp(std::normal_distribution<double>(0.0, 2.0)(rng)) *
                     (trial % 2 ? -1.0 : 1.0);
    const gw::Embedding moved = emb.with_v(c * q * task.v);
    for (auto m : {CorrelationMethod::spearman, CorrelationMethod::pearson}) {
      EXPECT_LT(std::abs(gw::evaluate(moved, ts, m).score - gw::evaluate(emb, ts, m).score),
                1e-9);
    }
  }
}

TEST(Evaluate, DiagonalRescalingChangesToyScore) {
  gw::Vector lam(2);
  lam << 2.0, 1.0;
  const auto emb = fixtures::toy_embedding();
  const Matrix lv = gw::apply_transform(gw::Transform::diagonal(lam), emb.v());
  EXPECT_NEAR(gw::cosine(lv.col(0), lv.col(1)), 2.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(gw::cosine(lv.col(1), lv.col(2)), 1.0 / std::sqrt(5.0), 1e-12);
  const double after =
      gw::evaluate(emb.with_v(lv), fixtures::toy_testset(), CorrelationMethod::spearman).score;
  EXPECT_NEAR(after, 1.0, 1e-12);
}

TEST(PreparedTask, CompactBlockScoresLikeFullEmbedding) {
  const auto task = oracle::synthetic_task(3, 4, 50, 30);
  const auto emb = fixtures::embedding_of(task);
  auto ts = fixtures::testset_of(task);
  ts.pairs.push_back({"w1", "unknown", 3.0});
  const gw::PreparedTask prepared(emb, ts);
  EXPECT_EQ(prepared.resolvable(), 30u);
  EXPECT_EQ(prepared.oov(), 1u);
  EXPECT_LE(prepared.compact_v().cols(), 50);
  const gw::Transform c = gw::sample_transform(gw::TransformKind::general, 4, 5);
  const auto direct = gw::evaluate(emb.with_v(c.matrix() * emb.v()), ts,
                                   CorrelationMethod::pearson);
  const auto compact = prepared.score(c.matrix() * prepared.compact_v(),
                                      CorrelationMethod::pearson);
  EXPECT_NEAR(direct.score, compact.score, 1e-12);
  EXPECT_EQ(compact.pairs_skipped_oov, 1u);
  EXPECT_GW_ERROR(prepared.score(Matrix::Ones(4, 1), CorrelationMethod::pearson),
                  ShapeMismatch);
}
