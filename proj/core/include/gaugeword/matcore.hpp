#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace gaugeword {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// All seeded sampling goes through the 64-bit Mersenne Twister
// (std::mt19937_64). Output is bit-stable for a given seed and standard
// library implementation.
using Rng = std::mt19937_64;

// Relative singular-value threshold below which a square matrix is treated
// as singular.
inline constexpr double kSingularTolerance = 1e-12;

enum class TransformKind {
  general,
  orthogonal,
  upper_triangular,
  diagonal,
  scaled_identity,
};

std::string_view to_string(TransformKind kind);
// Accepts the canonical names above plus the CLI alias "upper".
std::optional<TransformKind> parse_transform_kind(std::string_view name);

// A nonsingular d x d matrix tagged with the subgroup it belongs to. The
// constructor checks the structural invariants of the declared kind and
// throws Error(SingularTransform / InvalidArgument) when they fail.
class Transform {
 public:
  Transform(Matrix matrix, TransformKind kind);

  static Transform identity(Eigen::Index d);
  static Transform diagonal(const Vector& entries);

  const Matrix& matrix() const noexcept { return matrix_; }
  TransformKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  Matrix inverse() const;

 private:
  Matrix matrix_;
  TransformKind kind_;
};

bool all_finite(const Matrix& m);
double max_abs(const Matrix& m);

// Ratio of smallest to largest singular value (0 for the zero matrix).
double inverse_condition(const Matrix& square);

struct QrFactors {
  Transform q;
  Transform r;
};

// QR decomposition with the diagonal of R forced positive. This is the
// unique factorization C = QR with Q orthogonal and R in UT(d).
QrFactors qr_positive(const Matrix& c);

struct ThinSvd {
  Matrix a;      // n x d, orthonormal columns
  Vector sigma;  // d, non-increasing, nonnegative
  Matrix b;      // p x d, orthonormal columns

  Matrix sigma_matrix() const { return sigma.asDiagonal(); }
};

// Leading d singular triplets of x.
ThinSvd svd_thin(const Matrix& x, Eigen::Index d);

struct SymmetricEigen {
  Matrix vectors;  // orthogonal, column i pairs with values(i)
  Vector values;   // non-increasing
};

// Eigendecomposition of a symmetric matrix, eigenvalues in descending order.
// The input is symmetrized as (S + S^T)/2 first.
SymmetricEigen sym_eig_desc(const Matrix& s);

Matrix sym_sqrt(const Matrix& w);
Matrix sym_inv_sqrt(const Matrix& w);

// h(C) = C^T C: constant on left O(d)-orbits {QC} and separates them.
Matrix maximal_invariant(const Matrix& c);

// Returns Q = C1 C2^{-1} when it is orthogonal to `tol` (max-abs deviation of
// Q^T Q from I), i.e. when C1 and C2 lie in the same left O(d)-orbit.
std::optional<Transform> same_orbit(const Matrix& c1, const Matrix& c2,
                                    double tol = 1e-8);

// Random transform of the requested kind; deterministic in `seed`.
//   diagonal          diagonal entries i.i.d. |N(0,1)|
//   upper_triangular  upper triangle (incl. diagonal) i.i.d. |N(0,1)|
//   orthogonal        Q factor of qr_positive on a standard Gaussian matrix
//   general           standard Gaussian entries, redrawn while singular
//   scaled_identity   c I with c = |N(0,1)|
Transform sample_transform(TransformKind kind, Eigen::Index d,
                           std::uint64_t seed);
Transform sample_transform(TransformKind kind, Eigen::Index d, Rng& rng);

// Lambda^alpha for a positive diagonal Lambda.
Transform power_diag(const Transform& lambda, double alpha);

}  // namespace gaugeword
