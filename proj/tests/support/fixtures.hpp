#pragma once

// Adapters from oracle data to library types.

#include "gaugeword/eval.hpp"
#include "oracles.hpp"

namespace fixtures {

inline gaugeword::Embedding embedding_of(const oracle::SyntheticTask& t) {
  return gaugeword::Embedding(t.vocab, t.v);
}

inline gaugeword::SimilarityTestSet testset_of(const oracle::SyntheticTask& t,
                                               std::string name = "synthetic") {
  gaugeword::SimilarityTestSet ts{std::move(name), {}};
  for (const auto& p : t.pairs) {
    ts.pairs.push_back({t.vocab[static_cast<std::size_t>(p.i)],
                        t.vocab[static_cast<std::size_t>(p.j)], p.human});
  }
  return ts;
}

// The three-word toy: north = (1,0), northeast = (1,1), east = (0,1), with
// human similarities 3 > 2 > 1 for (north, northeast), (northeast, east),
// (north, east).
inline gaugeword::Embedding toy_embedding() {
  gaugeword::Matrix v(2, 3);
  v << 1, 1, 0,
       0, 1, 1;
  return gaugeword::Embedding({"north", "northeast", "east"}, v);
}

inline gaugeword::SimilarityTestSet toy_testset() {
  return {"toy", {{"north", "northeast", 3.0},
                  {"northeast", "east", 2.0},
                  {"north", "east", 1.0}}};
}

// d = 2 witness on which Spearman is stuck at 0.8 at the identity but
// reaches 1 once lambda_1 / lambda_2 exceeds about 1.05.
inline gaugeword::Embedding witness_embedding() {
  gaugeword::Matrix v(2, 4);
  v << 1, 1, 0, 1,
       0, 1.05, 1, 2;
  return gaugeword::Embedding({"w1", "w2", "w3", "w4"}, v);
}

inline gaugeword::SimilarityTestSet witness_testset() {
  return {"witness", {{"w1", "w2", 3.0},
                      {"w2", "w3", 2.0},
                      {"w1", "w3", 1.0},
                      {"w2", "w4", 4.0}}};
}

inline std::vector<oracle::IndexedPair> witness_pairs() {
  return {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}, {1, 3, 4.0}};
}

}  // namespace fixtures
