#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaugeword/eval.hpp"
#include "gaugeword/matcore.hpp"

namespace gaugeword {

struct SweepRow {
  double alpha = 0.0;
  std::string lambda;
  std::string testset;
  CorrelationMethod method = CorrelationMethod::spearman;
  std::optional<double> score;  // empty when the row failed
  std::string failure;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Scores Lambda^alpha V* for each alpha (strictly increasing) against every
// test set and method. Evaluation failures mark the row and the sweep
// continues.
SweepResult alpha_sweep(const Embedding& base, const Transform& lambda,
                        const std::string& lambda_label,
                        const std::vector<double>& alphas,
                        const std::vector<SimilarityTestSet>& testsets,
                        const std::vector<CorrelationMethod>& methods);

// Inclusive grid start, start+step, ... up to stop (with a 1e-9 step slack).
std::vector<double> alpha_grid(double start, double stop, double step);

using NamedLambda = std::pair<std::string, Transform>;

// The four diagonal choices swept against alpha:
//   "sigma"      Sigma_d as given
//   "linear"     lambda_i = i (1-based)
//   "uniform"    lambda_i ~ U(0,1), redrawn below 1e-12
//   "absnormal"  lambda_i ~ |N(0,1)|, redrawn below 1e-12
std::vector<NamedLambda> lambda_presets(Eigen::Index d, const Vector& sigma,
                                        std::uint64_t seed);

struct Trial {
  std::size_t index = 0;
  std::optional<double> score;
  std::string failure;
};

struct TrialSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1); 0 for one trial
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct TrialDistribution {
  TransformKind kind = TransformKind::diagonal;
  std::string testset;
  CorrelationMethod method = CorrelationMethod::spearman;
  std::uint64_t seed = 0;
  double base_score = 0.0;
  std::vector<Trial> trials;
  std::optional<TrialSummary> summary;  // empty when no trial succeeded

  std::vector<double> scores() const;
};

std::optional<TrialSummary> summarize(const std::vector<double>& scores);

// Trial i scores R_i V* with R_i = sample_transform(kind, d, seed + i).
// Trials are independent of each other and of their execution order.
TrialDistribution random_transform_study(const Embedding& base,
                                         TransformKind kind,
                                         std::size_t n_runs,
                                         std::uint64_t seed,
                                         const SimilarityTestSet& testset,
                                         CorrelationMethod method);

// CSV writers. Numbers are written with 17 significant digits.
//   sweep:  header alpha,lambda,testset,method,score ; failed rows score=nan
//   trials: "# seed=", "# kind=", "# testset=", "# method=", "# base_score="
//           preamble, then header trial,score ; failed trials are listed as
//           "# failed=<index>:<reason>" and omitted from the data rows.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const TrialDistribution& result, std::ostream& out);

SweepResult read_sweep_csv(std::istream& in);
TrialDistribution read_trials_csv(std::istream& in);

}  // namespace gaugeword
