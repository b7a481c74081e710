#pragma once

#include <vector>

#include "gaugeword/error.hpp"
#include "gaugeword/factor_pair.hpp"

namespace gaugeword {

// (U, V) -> (U C^{-1}, C V). The product UV is unchanged.
FactorPair apply_transform(const Transform& c, const FactorPair& pair);

// V -> C V, for embeddings distributed without a context factor.
Matrix apply_transform(const Transform& c, const Matrix& v);

/// The unique representative of a solution set {(U C^{-1}, C V)}:
///   V V^T = I_d,
///   U^T U = diag(spectrum) with spectrum non-increasing,
///   the first entry of each column of U above 1e-10 in magnitude is positive.
/// When consecutive spectrum values coincide the representative is only
/// unique up to rotations inside that eigenspace; `degenerate` flags it.
struct CanonicalPair {
  FactorPair pair;
  Vector spectrum;
  // degenerate_gap[i]: spectrum(i) and spectrum(i+1) differ by < 1e-8 relative.
  std::vector<bool> degenerate_gap;
  // zero_column[j]: column j of U had no entry above 1e-10; sign left as is.
  std::vector<bool> zero_column;
  // ||U'V' - UV||_max / ||UV||_max.
  double product_residual = 0.0;
  std::vector<Warning> warnings;

  bool degenerate() const;
};

inline constexpr double kSignTolerance = 1e-10;
inline constexpr double kDegenerateGap = 1e-8;

/// Canonicalize a factor pair by simultaneously diagonalizing V V^T and
/// U^T U. With W = V V^T and S = W^{1/2} (U^T U) W^{1/2} = E Lambda E^T, the
/// transform C = E^T W^{-1/2} gives C V (C V)^T = I and
/// (U C^{-1})^T (U C^{-1}) = Lambda, the generalized eigenvalues of
/// det(U^T U - lambda V V^T). Column signs are then fixed on U.
///
/// Throws RankDeficientV when V V^T is not positive definite.
CanonicalPair canonicalize(const FactorPair& pair);

/// (V V^T)^{-1/2} V. Any two whitenings of gauge-equivalent V lie in the same
/// O(d) orbit.
Matrix whiten(const Matrix& v);

struct TieResult {
  Matrix v_tied;   // C V
  Matrix u_tied;   // U C^{-1} (empty for sum ties)
  Transform c;     // symmetric positive-definite C
  double residual; // ||C^{-T} U^T - C V||_F / ||U^T||_F
};

/// Find the gauge in which U^T = V: solve C^{-T} U^T = C V with C symmetric
/// positive definite, i.e. C^2 = M where M V = U^T. M comes from least
/// squares and is symmetrized before taking its square root; the residual
/// measures how far the pair is from an exactly tied solution.
///
/// Throws NotPositiveDefinite (message lists the eigenvalues of the
/// symmetrized M) when no tied gauge exists.
TieResult symmetric_tie(const FactorPair& pair);

// U^T + V. Requires n == p.
Matrix sum_tie(const FactorPair& pair);

}  // namespace gaugeword
