#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeword/error.hpp"
#include "gaugeword/factor_pair.hpp"

namespace gaugeword {

using TokenList = std::vector<std::string>;

struct TokenizedCorpus {
  std::vector<TokenList> documents;
};

// Lowercases ASCII letters and splits on maximal runs of characters that are
// not ASCII alphanumerics. Bytes >= 0x80 (UTF-8 continuation data) count as
// word characters so non-ASCII words stay intact.
TokenList tokenize(std::string_view text);

// One document per line.
TokenizedCorpus read_corpus(std::istream& in);
TokenizedCorpus read_corpus_file(const std::string& path);

struct DocTermMatrix {
  std::vector<std::string> vocab;  // column j counts vocab[j]
  Matrix counts;                   // documents x vocab
};

inline constexpr std::size_t kDefaultMaxVocab = 5000;

// Vocabulary is every word with total count >= min_count, ordered by
// descending count then lexicographically, truncated to max_vocab entries
// (0 = no cap). Throws EmptyVocabulary when nothing survives.
DocTermMatrix build_doc_term(const TokenizedCorpus& corpus,
                             std::size_t min_count,
                             std::size_t max_vocab = kDefaultMaxVocab);

// CSV with a header row of vocabulary words, one row of counts per document.
void write_doc_term_csv(const DocTermMatrix& dtm, std::ostream& out);

struct LsaSolution {
  FactorPair pair;  // U = A_d Sigma^alpha, V = Sigma^(1-alpha) B_d^T
  Vector sigma;     // leading d singular values of X
  std::vector<Warning> warnings;
};

// Rank-d least-squares factorization of x via truncated SVD, with the
// singular values split between the factors according to alpha. The product
// UV does not depend on alpha. Refuses sigma_d == 0 (to 1e-14 relative) and
// warns below 1e-10 relative.
LsaSolution lsa_solve(const Matrix& x, Eigen::Index d, double alpha);

// ||X - UV||_F.
double reconstruction_error(const Matrix& x, const FactorPair& pair);

}  // namespace gaugeword
