#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gaugeword/eval.hpp"
#include "gaugeword/matcore.hpp"

namespace gaugeword {

struct OptimizerOptions {
  std::size_t max_evals = 0;  // 0: 500 * number of parameters
  double ftol = 1e-8;         // stop once max f - min f over the simplex < ftol
  double initial_step = 0.1;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

// Throws InvalidArgument unless 0 < reflection < expansion,
// 0 < contraction < 1, 0 < shrink < 1, initial_step != 0, ftol >= 0 and
// max_evals (when set) >= k + 1.
void validate(const OptimizerOptions& opts, std::size_t k);

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
  std::size_t iterations = 0;
  bool converged = false;  // spread test met before the evaluation budget
};

/// Derivative-free minimization with the Nelder-Mead simplex method. The
/// initial simplex is x0 plus x0 + initial_step * e_i. Vertices are kept
/// sorted by value with ties resolved toward the lower vertex index, so runs
/// are fully deterministic. Non-finite values away from the initial simplex
/// are treated as +infinity; at the initial simplex they throw
/// NonFiniteObjective.
NelderMeadResult nelder_mead(const Objective& objective,
                             std::span<const double> x0,
                             const OptimizerOptions& opts = {});

enum class GaugeSlice {
  diagonal,          // Lambda = diag(exp(x))
  upper_triangular,  // positive diagonal exp(x_i) plus free strict upper part
};

struct DiagOptResult {
  Transform lambda_star;  // normalized to geometric-mean-1 diagonal
  double train_score = 0.0;
  double init_score = 0.0;
  std::size_t evals_used = 0;
  std::optional<double> holdout_score;
};

/// Maximize g(train, Lambda V*) over the chosen slice, starting at Lambda = I.
/// The diagonal is parametrized as exp(x), which loses nothing because sign
/// flips are orthogonal and leave cosine scores unchanged. The reported
/// transform is rescaled so the diagonal has geometric mean 1, and
/// train_score is re-evaluated at that transform.
DiagOptResult optimize_diag(const Embedding& base,
                            const SimilarityTestSet& train,
                            CorrelationMethod method,
                            const OptimizerOptions& opts = {},
                            GaugeSlice slice = GaugeSlice::diagonal);

// Score of Lambda V* on a test set.
double score_transformed(const Embedding& base, const Transform& lambda,
                         const SimilarityTestSet& testset,
                         CorrelationMethod method);

// Partition of pair indices 0..n-1 into k folds of sizes differing by at most
// one, after a seeded shuffle. Throws BadK unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed);

SimilarityTestSet subset(const SimilarityTestSet& testset,
                         const std::vector<std::size_t>& indices,
                         const std::string& suffix);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_pairs = 0;
  std::size_t holdout_pairs = 0;
  DiagOptResult result;  // result.holdout_score empty when the fold has < 2
                         // usable pairs
};

struct CrossValidationResult {
  std::vector<FoldResult> folds;
  std::optional<double> mean_holdout;  // over folds with a holdout score
};

/// For each fold, optimize on the other k-1 folds and score the held-out
/// fold with the optimized transform.
CrossValidationResult cross_validated_optimize(
    const Embedding& base, const SimilarityTestSet& testset,
    CorrelationMethod method, std::size_t k, std::uint64_t seed,
    const OptimizerOptions& opts = {},
    GaugeSlice slice = GaugeSlice::diagonal);

}  // namespace gaugeword
