#include "gaugeword/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gaugeword/error.hpp"
#include "gaugeword/gauge.hpp"

namespace gaugeword {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f;
};

// x_out = a + t (b - a)
std::vector<double> lerp(const std::vector<double>& a,
                         const std::vector<double>& b, double t) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

std::size_t slice_parameters(GaugeSlice slice, Eigen::Index d) {
  const auto n = static_cast<std::size_t>(d);
  return slice == GaugeSlice::diagonal ? n : n + n * (n - 1) / 2;
}

// Builds the transform for a parameter vector; `shift` is subtracted from
// the log-diagonal and the strict upper part is scaled by exp(-shift), which
// is the same as dividing the whole matrix by exp(shift).
Matrix slice_matrix(GaugeSlice slice, Eigen::Index d,
                    std::span<const double> x, double shift = 0.0) {
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    m(i, i) = std::exp(x[static_cast<std::size_t>(i)] - shift);
  }
  if (slice == GaugeSlice::upper_triangular) {
    const double scale = std::exp(-shift);
    std::size_t k = static_cast<std::size_t>(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) m(i, j) = scale * x[k++];
    }
  }
  return m;
}

Matrix apply_slice(GaugeSlice slice, const Matrix& m, const Matrix& v) {
  if (slice == GaugeSlice::diagonal) return m.diagonal().asDiagonal() * v;
  return m.triangularView<Eigen::Upper>() * v;
}

}  // namespace

void validate(const OptimizerOptions& opts, std::size_t k) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, "optimizer options: " + msg);
  };
  if (k == 0) fail("no parameters");
  if (!(opts.reflection > 0.0)) fail("reflection must be > 0");
  if (!(opts.expansion > opts.reflection)) {
    fail("expansion must exceed reflection");
  }
  if (!(opts.contraction > 0.0 && opts.contraction < 1.0)) {
    fail("contraction must lie in (0, 1)");
  }
  if (!(opts.shrink > 0.0 && opts.shrink < 1.0)) fail("shrink must lie in (0, 1)");
  if (!(opts.initial_step != 0.0) || !std::isfinite(opts.initial_step)) {
    fail("initial_step must be finite and nonzero");
  }
  if (!(opts.ftol >= 0.0)) fail("ftol must be >= 0");
  if (opts.max_evals != 0 && opts.max_evals < k + 1) {
    fail("max_evals must be at least k + 1");
  }
}

NelderMeadResult nelder_mead(const Objective& objective,
                             std::span<const double> x0,
                             const OptimizerOptions& opts) {
  const std::size_t k = x0.size();
  validate(opts, k);
  const std::size_t budget = opts.max_evals ? opts.max_evals : 500 * k;

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evals;
    const double f = objective(x);
    return std::isfinite(f) ? f : kInf;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(k + 1);
  simplex.push_back({std::vector<double>(x0.begin(), x0.end()), 0.0});
  for (std::size_t i = 0; i < k; ++i) {
    auto x = simplex.front().x;
    x[i] += opts.initial_step;
    simplex.push_back({std::move(x), 0.0});
  }
  for (std::size_t i = 0; i <= k; ++i) {
    ++result.evals;
    const double f = objective(simplex[i].x);
    if (!std::isfinite(f)) {
      std::ostringstream os;
      os << "objective is " << f << " at initial simplex vertex " << i;
      throw Error(ErrorCode::NonFiniteObjective, os.str());
    }
    simplex[i].f = f;
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  for (;;) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.back().f - simplex.front().f < opts.ftol) {
      result.converged = true;
      break;
    }
    if (result.evals >= budget) break;
    ++result.iterations;

    std::vector<double> centroid(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) centroid[j] += simplex[i].x[j];
    }
    for (double& c : centroid) c /= static_cast<double>(k);

    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second_worst = simplex[k - 1].f;

    auto reflected = lerp(centroid, worst.x, -opts.reflection);
    const double f_r = eval(reflected);

    if (f_r < f_best) {
      auto expanded = lerp(centroid, worst.x, -opts.reflection * opts.expansion);
      const double f_e = eval(expanded);
      if (f_e < f_r) {
        worst = {std::move(expanded), f_e};
      } else {
        worst = {std::move(reflected), f_r};
      }
      continue;
    }
    if (f_r < f_second_worst) {
      worst = {std::move(reflected), f_r};
      continue;
    }

    bool contracted = false;
    if (f_r < worst.f) {
      auto outside = lerp(centroid, reflected, opts.contraction);
      const double f_c = eval(outside);
      if (f_c <= f_r) {
        worst = {std::move(outside), f_c};
        contracted = true;
      }
    } else {
      auto inside = lerp(centroid, worst.x, opts.contraction);
      const double f_c = eval(inside);
      if (f_c < worst.f) {
        worst = {std::move(inside), f_c};
        contracted = true;
      }
    }
    if (contracted) continue;

    for (std::size_t i = 1; i <= k; ++i) {
      simplex[i].x = lerp(simplex.front().x, simplex[i].x, opts.shrink);
      simplex[i].f = eval(simplex[i].x);
    }
  }

  result.x = simplex.front().x;
  result.f = simplex.front().f;
  return result;
}

double score_transformed(const Embedding& base, const Transform& lambda,
                         const SimilarityTestSet& testset,
                         CorrelationMethod method) {
  const PreparedTask task(base, testset);
  return task.score(apply_transform(lambda, task.compact_v()), method).score;
}

DiagOptResult optimize_diag(const Embedding& base,
                            const SimilarityTestSet& train,
                            CorrelationMethod method,
                            const OptimizerOptions& opts, GaugeSlice slice) {
  const Eigen::Index d = base.dim();
  const PreparedTask task(base, train);
  const double init_score = task.score(method).score;
  const Matrix& compact = task.compact_v();

  const Objective objective = [&](std::span<const double> x) {
    try {
      const Matrix m = slice_matrix(slice, d, x);
      return -task.score(apply_slice(slice, m, compact), method).score;
    } catch (const Error&) {
      return kInf;
    }
  };

  const std::size_t k = slice_parameters(slice, d);
  const std::vector<double> x0(k, 0.0);
  const NelderMeadResult nm = nelder_mead(objective, x0, opts);

  // cI leaves the score unchanged, so fix the scale: geometric mean 1.
  double shift = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) shift += nm.x[static_cast<std::size_t>(i)];
  shift /= static_cast<double>(d);
  const Matrix best = slice_matrix(slice, d, nm.x, shift);

  const TransformKind kind = slice == GaugeSlice::diagonal
                                 ? TransformKind::diagonal
                                 : TransformKind::upper_triangular;
  DiagOptResult out{Transform(best, kind), init_score, init_score, nm.evals,
                    std::nullopt};
  double train_score = init_score;
  try {
    train_score = task.score(apply_slice(slice, best, compact), method).score;
  } catch (const Error&) {
    train_score = -kInf;
  }
  if (train_score >= init_score) {
    out.train_score = train_score;
  } else {
    out.lambda_star = Transform(Matrix::Identity(d, d), kind);
  }
  return out;
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::BadK, "k = " + std::to_string(k) +
                                     " must satisfy 2 <= k <= " +
                                     std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

SimilarityTestSet subset(const SimilarityTestSet& testset,
                         const std::vector<std::size_t>& indices,
                         const std::string& suffix) {
  SimilarityTestSet out{testset.name + suffix, {}};
  out.pairs.reserve(indices.size());
  for (std::size_t i : indices) out.pairs.push_back(testset.pairs.at(i));
  return out;
}

CrossValidationResult cross_validated_optimize(
    const Embedding& base, const SimilarityTestSet& testset,
    CorrelationMethod method, std::size_t k, std::uint64_t seed,
    const OptimizerOptions& opts, GaugeSlice slice) {
  const auto folds = kfold_split(testset.pairs.size(), k, seed);
  CrossValidationResult out;
  double holdout_sum = 0.0;
  std::size_t holdout_count = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const std::string tag = "#fold" + std::to_string(f);
    const auto train = subset(testset, train_idx, tag + "-train");
    const auto holdout = subset(testset, folds[f], tag + "-holdout");

    FoldResult fold{f, train_idx.size(), folds[f].size(),
                    optimize_diag(base, train, method, opts, slice)};
    try {
      fold.result.holdout_score =
          score_transformed(base, fold.result.lambda_star, holdout, method);
      holdout_sum += *fold.result.holdout_score;
      ++holdout_count;
    } catch (const Error&) {
      fold.result.holdout_score.reset();
    }
    out.folds.push_back(std::move(fold));
  }
  if (holdout_count > 0) {
    out.mean_holdout = holdout_sum / static_cast<double>(holdout_count);
  }
  return out;
}

}  // namespace gaugeword
