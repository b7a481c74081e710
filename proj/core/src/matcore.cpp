#include "gaugeword/matcore.hpp"

#include <cmath>
#include <sstream>

#include "gaugeword/error.hpp"

namespace gaugeword {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

bool is_orthogonal(const Matrix& q, double tol) {
  const Matrix gram = q.transpose() * q;
  return max_abs(gram - Matrix::Identity(q.rows(), q.cols())) < tol;
}

void check_kind(const Matrix& m, TransformKind kind) {
  const Eigen::Index d = m.rows();
  switch (kind) {
    case TransformKind::general:
      break;
    case TransformKind::orthogonal:
      if (!is_orthogonal(m, 1e-10)) {
        throw Error(ErrorCode::InvalidArgument,
                    "orthogonal transform violates C^T C = I");
      }
      break;
    case TransformKind::upper_triangular:
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = j + 1; i < d; ++i) {
          if (m(i, j) != 0.0) {
            throw Error(ErrorCode::InvalidArgument,
                        "upper-triangular transform has a nonzero entry "
                        "below the diagonal");
          }
        }
        if (!(m(j, j) > 0.0)) {
          throw Error(ErrorCode::NonpositiveDiagonal,
                      "upper-triangular transform needs a positive diagonal");
        }
      }
      break;
    case TransformKind::diagonal:
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          if (i != j && m(i, j) != 0.0) {
            throw Error(ErrorCode::InvalidArgument,
                        "diagonal transform has an off-diagonal entry");
          }
        }
        if (!(m(j, j) > 0.0)) {
          throw Error(ErrorCode::NonpositiveDiagonal,
                      "diagonal transform needs positive entries");
        }
      }
      break;
    case TransformKind::scaled_identity: {
      const double c = m(0, 0);
      if (c == 0.0 || m != c * Matrix::Identity(d, d)) {
        throw Error(ErrorCode::InvalidArgument,
                    "scaled-identity transform must equal c*I with c != 0");
      }
      break;
    }
  }
}

double abs_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::abs(normal(rng));
}

Matrix gaussian_matrix(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  // Fill in row-major order so the draw sequence does not depend on storage.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = normal(rng);
  }
  return g;
}

Matrix spectral_function(const Matrix& w, double power, const char* op) {
  require_square(w, op);
  const SymmetricEigen eig = sym_eig_desc(w);
  const double largest = eig.values(0);
  const double smallest = eig.values(eig.values.size() - 1);
  if (!(largest > 0.0) || !(smallest > kSingularTolerance * largest)) {
    std::ostringstream os;
    os << op << " needs a positive-definite matrix; eigenvalue range ["
       << smallest << ", " << largest << "]";
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
  }
  const Vector mapped = eig.values.array().pow(power).matrix();
  Matrix out = eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::general: return "general";
    case TransformKind::orthogonal: return "orthogonal";
    case TransformKind::upper_triangular: return "upper_triangular";
    case TransformKind::diagonal: return "diagonal";
    case TransformKind::scaled_identity: return "scaled_identity";
  }
  return "general";
}

std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  if (name == "general") return TransformKind::general;
  if (name == "orthogonal") return TransformKind::orthogonal;
  if (name == "upper" || name == "upper_triangular") {
    return TransformKind::upper_triangular;
  }
  if (name == "diagonal") return TransformKind::diagonal;
  if (name == "scaled_identity") return TransformKind::scaled_identity;
  return std::nullopt;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double inverse_condition(const Matrix& square) {
  const Vector s = square.rows() <= 64
                       ? Vector(Eigen::JacobiSVD<Matrix>(square).singularValues())
                       : Vector(Eigen::BDCSVD<Matrix>(square).singularValues());
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Transform::Transform(Matrix matrix, TransformKind kind)
    : matrix_(std::move(matrix)), kind_(kind) {
  require_square(matrix_, "transform");
  if (!all_finite(matrix_)) {
    throw Error(ErrorCode::InvalidArgument, "transform has non-finite entries");
  }
  check_kind(matrix_, kind_);
  // Triangular and diagonal kinds are nonsingular by their positive diagonal;
  // random upper-triangular draws are routinely too ill-conditioned for the
  // singular-value test while still exactly invertible.
  const bool structural = kind_ == TransformKind::upper_triangular ||
                          kind_ == TransformKind::diagonal ||
                          kind_ == TransformKind::scaled_identity;
  if (!structural && !(inverse_condition(matrix_) > kSingularTolerance)) {
    throw Error(ErrorCode::SingularTransform,
                "transform is singular to tolerance");
  }
}

Transform Transform::identity(Eigen::Index d) {
  return Transform(Matrix::Identity(d, d), TransformKind::diagonal);
}

Transform Transform::diagonal(const Vector& entries) {
  return Transform(Matrix(entries.asDiagonal()), TransformKind::diagonal);
}

Matrix Transform::inverse() const {
  switch (kind_) {
    case TransformKind::orthogonal:
      return matrix_.transpose();
    case TransformKind::diagonal:
      return Matrix(matrix_.diagonal().cwiseInverse().asDiagonal());
    case TransformKind::scaled_identity:
      return (1.0 / matrix_(0, 0)) * Matrix::Identity(dim(), dim());
    case TransformKind::upper_triangular:
      return matrix_.triangularView<Eigen::Upper>().solve(
          Matrix::Identity(dim(), dim()));
    default:
      return matrix_.partialPivLu().inverse();
  }
}

QrFactors qr_positive(const Matrix& c) {
  require_square(c, "qr_positive input");
  if (!(inverse_condition(c) > kSingularTolerance)) {
    throw Error(ErrorCode::SingularInput, "qr_positive: matrix is singular");
  }
  const Eigen::Index d = c.rows();
  Eigen::HouseholderQR<Matrix> qr(c);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (r(i, i) < 0.0) {
      q.col(i) = -q.col(i);
      r.row(i) = -r.row(i);
    }
  }
  // Strip Householder round-off below the diagonal.
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = j + 1; i < d; ++i) r(i, j) = 0.0;
  }
  return QrFactors{Transform(std::move(q), TransformKind::orthogonal),
                   Transform(std::move(r), TransformKind::upper_triangular)};
}

ThinSvd svd_thin(const Matrix& x, Eigen::Index d) {
  const Eigen::Index k = std::min(x.rows(), x.cols());
  if (d < 1 || d > k) {
    std::ostringstream os;
    os << "requested rank " << d << " for a " << x.rows() << "x" << x.cols()
       << " matrix";
    throw Error(ErrorCode::RankRequestTooLarge, os.str());
  }
  if (!all_finite(x)) {
    throw Error(ErrorCode::InvalidArgument, "svd_thin: non-finite input");
  }
  ThinSvd out;
  if (k <= 64) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.a = svd.matrixU().leftCols(d);
    out.sigma = svd.singularValues().head(d);
    out.b = svd.matrixV().leftCols(d);
  } else {
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.a = svd.matrixU().leftCols(d);
    out.sigma = svd.singularValues().head(d);
    out.b = svd.matrixV().leftCols(d);
  }
  return out;
}

SymmetricEigen sym_eig_desc(const Matrix& s) {
  require_square(s, "sym_eig_desc input");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument,
                "symmetric eigensolver did not converge");
  }
  const Eigen::Index d = s.rows();
  SymmetricEigen out{Matrix(d, d), Vector(d)};
  // Eigen returns ascending order; reverse it.
  for (Eigen::Index i = 0; i < d; ++i) {
    out.values(i) = solver.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

Matrix sym_sqrt(const Matrix& w) { return spectral_function(w, 0.5, "sym_sqrt"); }

Matrix sym_inv_sqrt(const Matrix& w) {
  return spectral_function(w, -0.5, "sym_inv_sqrt");
}

Matrix maximal_invariant(const Matrix& c) {
  require_square(c, "maximal_invariant input");
  Matrix h = c.transpose() * c;
  return 0.5 * (h + h.transpose());
}

std::optional<Transform> same_orbit(const Matrix& c1, const Matrix& c2,
                                    double tol) {
  require_square(c1, "same_orbit lhs");
  require_square(c2, "same_orbit rhs");
  if (c1.rows() != c2.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "same_orbit: dimensions differ");
  }
  if (!(inverse_condition(c1) > kSingularTolerance) ||
      !(inverse_condition(c2) > kSingularTolerance)) {
    throw Error(ErrorCode::SingularInput, "same_orbit: singular input");
  }
  // Q = C1 C2^{-1}, computed as the solution of C2^T Q^T = C1^T.
  const Matrix q = c2.transpose().partialPivLu().solve(c1.transpose()).transpose();
  if (!is_orthogonal(q, tol)) return std::nullopt;
  try {
    return Transform(q, TransformKind::general);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Transform sample_transform(TransformKind kind, Eigen::Index d,
                           std::uint64_t seed) {
  Rng rng(seed);
  return sample_transform(kind, d, rng);
}

Transform sample_transform(TransformKind kind, Eigen::Index d, Rng& rng) {
  if (d < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample_transform: d must be >= 1");
  }
  switch (kind) {
    case TransformKind::diagonal: {
      Vector diag(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        double v = 0.0;
        while (!(v > 0.0)) v = abs_normal(rng);
        diag(i) = v;
      }
      return Transform::diagonal(diag);
    }
    case TransformKind::upper_triangular: {
      Matrix r = Matrix::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
          double v = abs_normal(rng);
          while (i == j && !(v > 0.0)) v = abs_normal(rng);
          r(i, j) = v;
        }
      }
      return Transform(std::move(r), TransformKind::upper_triangular);
    }
    case TransformKind::orthogonal: {
      for (;;) {
        Matrix g = gaussian_matrix(d, rng);
        if (inverse_condition(g) > kSingularTolerance) {
          return qr_positive(g).q;
        }
      }
    }
    case TransformKind::general: {
      for (;;) {
        Matrix g = gaussian_matrix(d, rng);
        if (inverse_condition(g) > kSingularTolerance) {
          return Transform(std::move(g), TransformKind::general);
        }
      }
    }
    case TransformKind::scaled_identity: {
      double c = 0.0;
      while (!(c > 0.0)) c = abs_normal(rng);
      return Transform(c * Matrix::Identity(d, d),
                       TransformKind::scaled_identity);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown transform kind");
}

Transform power_diag(const Transform& lambda, double alpha) {
  const Matrix& m = lambda.matrix();
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && m(i, j) != 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "power_diag needs a diagonal transform");
      }
    }
    if (!(m(i, i) > 0.0)) {
      throw Error(ErrorCode::NonpositiveDiagonal,
                  "power_diag needs positive diagonal entries");
    }
  }
  const Vector powered = m.diagonal().array().pow(alpha).matrix();
  return Transform::diagonal(powered);
}

}  // namespace gaugeword
