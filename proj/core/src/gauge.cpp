#include "gaugeword/gauge.hpp"

#include <cmath>
#include <sstream>

namespace gaugeword {
namespace {

Matrix row_gram_checked(const Matrix& v, const char* op) {
  const Matrix w = v * v.transpose();
  const SymmetricEigen eig = sym_eig_desc(w);
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (!(top > 0.0) || !(bottom > kSingularTolerance * top)) {
    std::ostringstream os;
    os << op << ": V (" << v.rows() << "x" << v.cols()
       << ") does not have full row rank; V V^T eigenvalue range [" << bottom
       << ", " << top << "]";
    throw Error(ErrorCode::RankDeficientV, os.str());
  }
  return w;
}

double relative_product_residual(const FactorPair& before,
                                 const FactorPair& after) {
  const Matrix p0 = before.product();
  const double scale = max_abs(p0);
  const double diff = max_abs(after.product() - p0);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

bool CanonicalPair::degenerate() const {
  for (bool g : degenerate_gap) {
    if (g) return true;
  }
  return false;
}

FactorPair apply_transform(const Transform& c, const FactorPair& pair) {
  check_pair_shape(pair);
  if (c.dim() != pair.dim()) {
    throw Error(ErrorCode::ShapeMismatch,
                "transform dimension does not match the pair");
  }
  FactorPair out;
  if (c.kind() == TransformKind::general) {
    // U C^{-1} = (C^{-T} U^T)^T without forming the inverse.
    out.u = c.matrix().transpose().partialPivLu().solve(pair.u.transpose())
                .transpose();
  } else {
    out.u = pair.u * c.inverse();
  }
  out.v = apply_transform(c, pair.v);
  return out;
}

Matrix apply_transform(const Transform& c, const Matrix& v) {
  if (c.dim() != v.rows()) {
    throw Error(ErrorCode::ShapeMismatch,
                "transform dimension does not match V");
  }
  if (c.kind() == TransformKind::diagonal) {
    return c.matrix().diagonal().asDiagonal() * v;
  }
  if (c.kind() == TransformKind::upper_triangular) {
    return c.matrix().triangularView<Eigen::Upper>() * v;
  }
  return c.matrix() * v;
}

CanonicalPair canonicalize(const FactorPair& pair) {
  check_pair_shape(pair);
  const Eigen::Index d = pair.dim();
  const Matrix w = row_gram_checked(pair.v, "canonicalize");
  const Matrix w_half = sym_sqrt(w);
  const Matrix w_inv_half = sym_inv_sqrt(w);

  const Matrix utu = pair.u.transpose() * pair.u;
  const SymmetricEigen eig = sym_eig_desc(w_half * utu * w_half);

  // C = E^T W^{-1/2}, C^{-1} = W^{1/2} E.
  CanonicalPair out;
  out.pair.u = pair.u * (w_half * eig.vectors);
  out.pair.v = eig.vectors.transpose() * (w_inv_half * pair.v);

  out.zero_column.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto col = out.pair.u.col(j);
    Eigen::Index lead = -1;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > kSignTolerance) {
        lead = i;
        break;
      }
    }
    if (lead < 0) {
      out.zero_column[static_cast<std::size_t>(j)] = true;
      out.warnings.push_back(
          {ErrorCode::DegenerateSpectrum,
           "column " + std::to_string(j) + " of U is zero; sign left as is"});
      continue;
    }
    if (col(lead) < 0.0) {
      out.pair.u.col(j) *= -1.0;
      out.pair.v.row(j) *= -1.0;
    }
  }

  out.spectrum = (out.pair.u.transpose() * out.pair.u).diagonal();
  out.degenerate_gap.assign(static_cast<std::size_t>(std::max<Eigen::Index>(d - 1, 0)),
                            false);
  const double scale = std::max(std::abs(eig.values(0)), 1e-300);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    if (std::abs(eig.values(i) - eig.values(i + 1)) < kDegenerateGap * scale) {
      out.degenerate_gap[static_cast<std::size_t>(i)] = true;
    }
  }
  if (out.degenerate()) {
    out.warnings.push_back({ErrorCode::DegenerateSpectrum,
                            "repeated generalized eigenvalues; canonical form "
                            "is not unique within the repeated eigenspace"});
  }
  out.product_residual = relative_product_residual(pair, out.pair);
  return out;
}

Matrix whiten(const Matrix& v) {
  const Matrix w = row_gram_checked(v, "whiten");
  return sym_inv_sqrt(w) * v;
}

TieResult symmetric_tie(const FactorPair& pair) {
  check_pair_shape(pair);
  const Matrix w = row_gram_checked(pair.v, "symmetric_tie");
  const Matrix ut = pair.u.transpose();
  if (ut.cols() != pair.v.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                "symmetric_tie needs n == p so that U^T and V are comparable");
  }

  // Least squares for M V = U^T: M = U^T V^T (V V^T)^{-1}.
  const Matrix rhs = ut * pair.v.transpose();
  Matrix m = w.llt().solve(rhs.transpose()).transpose();
  m = 0.5 * (m + m.transpose());

  const SymmetricEigen eig = sym_eig_desc(m);
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (!(top > 0.0) || !(bottom > kSingularTolerance * top)) {
    std::ostringstream os;
    os << "symmetric_tie: symmetrized M is not positive definite; "
          "eigenvalues [";
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (i) os << ", ";
      os << eig.values(i);
    }
    os << "]";
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
  }

  Matrix c = sym_sqrt(m);
  Matrix c_inv = sym_inv_sqrt(m);
  TieResult out{c * pair.v, pair.u * c_inv,
                Transform(c, TransformKind::general), 0.0};
  // C symmetric, so C^{-T} U^T = C^{-1} U^T = (U C^{-1})^T.
  const double denom = ut.norm();
  const double diff = (out.u_tied.transpose() - out.v_tied).norm();
  out.residual = denom > 0.0 ? diff / denom : diff;
  return out;
}

Matrix sum_tie(const FactorPair& pair) {
  check_pair_shape(pair);
  if (pair.u.rows() != pair.v.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "sum_tie needs n == p");
  }
  return pair.u.transpose() + pair.v;
}

}  // namespace gaugeword
