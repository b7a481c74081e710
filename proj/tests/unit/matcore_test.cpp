#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gaugeword/matcore.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace gw = gaugeword;
using gw::Matrix;
using gw::TransformKind;
using gw::Vector;

namespace {

double orthogonality_error(const Matrix& q) {
  return gw::max_abs(q.transpose() * q - Matrix::Identity(q.cols(), q.cols()));
}

}  // namespace

TEST(Transform, RejectsNonSquareAndNonFinite) {
  EXPECT_GW_ERROR(gw::Transform(Matrix::Ones(2, 3), TransformKind::general),
                  ShapeMismatch);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_GW_ERROR(gw::Transform(m, TransformKind::general), InvalidArgument);
}

TEST(Transform, RejectsSingularGeneral) {
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  EXPECT_GW_ERROR(gw::Transform(m, TransformKind::general), SingularTransform);
}

TEST(Transform, ChecksKindStructure) {
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_NO_THROW(gw::Transform(rot, TransformKind::orthogonal));
  EXPECT_GW_ERROR(gw::Transform(2.0 * rot, TransformKind::orthogonal),
                  InvalidArgument);

  Matrix lower(2, 2);
  lower << 1, 0, 1, 1;
  EXPECT_GW_ERROR(gw::Transform(lower, TransformKind::upper_triangular),
                  InvalidArgument);
  Matrix negdiag(2, 2);
  negdiag << -1, 3, 0, 1;
  EXPECT_GW_ERROR(gw::Transform(negdiag, TransformKind::upper_triangular),
                  NonpositiveDiagonal);
  EXPECT_GW_ERROR(gw::Transform::diagonal(Vector::Constant(3, 0.0)),
                  NonpositiveDiagonal);
  EXPECT_GW_ERROR(gw::Transform(Matrix::Ones(2, 2), TransformKind::diagonal),
                  InvalidArgument);
  EXPECT_GW_ERROR(gw::Transform(Matrix::Zero(2, 2), TransformKind::scaled_identity),
                  InvalidArgument);
  EXPECT_NO_THROW(gw::Transform(-3.0 * Matrix::Identity(3, 3),
                                TransformKind::scaled_identity));
}

TEST(Transform, ParseKindAcceptsUpperAlias) {
  EXPECT_EQ(gw::parse_transform_kind("upper"), TransformKind::upper_triangular);
  EXPECT_EQ(gw::parse_transform_kind("upper_triangular"),
            TransformKind::upper_triangular);
  EXPECT_EQ(gw::parse_transform_kind("orthogonal"), TransformKind::orthogonal);
  EXPECT_FALSE(gw::parse_transform_kind("lower").has_value());
  for (auto k : {TransformKind::general, TransformKind::orthogonal,
                 TransformKind::upper_triangular, TransformKind::diagonal,
                 TransformKind::scaled_identity}) {
    EXPECT_EQ(gw::parse_transform_kind(gw::to_string(k)), k);
  }
}

TEST(Transform, InverseMatchesLuForEveryKind) {
  for (auto kind : {TransformKind::general, TransformKind::orthogonal,
                    TransformKind::upper_triangular, TransformKind::diagonal,
                    TransformKind::scaled_identity}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const gw::Transform t = gw::sample_transform(kind, 5, seed);
      const Matrix prod = t.matrix() * t.inverse();
      EXPECT_LT(gw::max_abs(prod - Matrix::Identity(5, 5)), 1e-8)
          << gw::to_string(kind) << " seed " << seed;
    }
  }
}

TEST(QrPositive, AgreesWithGramSchmidtOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = oracle::uniform_int(rng, 1, 8);
    const Matrix c = oracle::well_conditioned(rng, d);
    const auto [q_ref, r_ref] = oracle::gram_schmidt(c);
    const gw::QrFactors qr = gw::qr_positive(c);
    EXPECT_LT(gw::max_abs(qr.r.matrix() - r_ref), 1e-9 * (1 + gw::max_abs(r_ref)));
    EXPECT_LT(gw::max_abs(qr.q.matrix() - q_ref), 1e-9);
    EXPECT_LT(gw::max_abs(qr.q.matrix() * qr.r.matrix() - c), 1e-12 * d * 10);
    EXPECT_EQ(qr.r.kind(), TransformKind::upper_triangular);
    EXPECT_EQ(qr.q.kind(), TransformKind::orthogonal);
  }
}

TEST(QrPositive, RFactorIsInvariantUnderLeftRotation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = oracle::uniform_int(rng, 1, 8);
    const Matrix c = oracle::well_conditioned(rng, d);
    const Matrix q = oracle::random_orthogonal(rng, d);
    const Matrix r1 = gw::qr_positive(c).r.matrix();
    const Matrix r2 = gw::qr_positive(q * c).r.matrix();
    EXPECT_LT(gw::max_abs(r1 - r2), 1e-8);
  }
}

TEST(QrPositive, RejectsSingular) {
  Matrix m = Matrix::Ones(3, 3);
  EXPECT_GW_ERROR(gw::qr_positive(m), SingularInput);
}

TEST(QrPositive, OneByOneNegative) {
  Matrix m(1, 1);
  m << -4.0;
  const auto qr = gw::qr_positive(m);
  EXPECT_DOUBLE_EQ(qr.r.matrix()(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(qr.q.matrix()(0, 0), -1.0);
}

TEST(MaximalInvariant, ConstantOnOrbitsAndSeparating) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = oracle::uniform_int(rng, 1, 6);
    const Matrix c = oracle::well_conditioned(rng, d);
    const Matrix q = oracle::random_orthogonal(rng, d);
    const Matrix qc = q * c;
    EXPECT_LT(gw::max_abs(gw::maximal_invariant(c) - gw::maximal_invariant(qc)),
              1e-9 * (1 + gw::max_abs(c.transpose() * c)));

    const auto witness = gw::same_orbit(qc, c);
    ASSERT_TRUE(witness.has_value());
    EXPECT_LT(orthogonality_error(witness->matrix()), 1e-8);
    EXPECT_LT(gw::max_abs(witness->matrix() - q), 1e-7);

    // A non-orthogonal perturbation leaves the orbit.
    Matrix scaled = c;
    scaled.row(0) *= 2.0;
    EXPECT_FALSE(gw::same_orbit(scaled, c).has_value());
  }
}

TEST(SameOrbit, RejectsMismatchedOrSingular) {
  EXPECT_GW_ERROR(gw::same_orbit(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  ShapeMismatch);
  EXPECT_GW_ERROR(gw::same_orbit(Matrix::Identity(2, 2), Matrix::Zero(2, 2)),
                  SingularInput);
}

TEST(Svd, SingularValuesMatchJacobiOracle) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 10);
    const int p = oracle::uniform_int(rng, 1, 10);
    const int d = oracle::uniform_int(rng, 1, std::min(n, p));
    const Matrix x = oracle::gaussian(rng, n, p);
    const gw::ThinSvd svd = gw::svd_thin(x, d);
    const Vector ref = oracle::singular_values(x);
    ASSERT_EQ(svd.sigma.size(), d);
    for (int i = 0; i < d; ++i) EXPECT_NEAR(svd.sigma(i), ref(i), 1e-9);
    EXPECT_LT(orthogonality_error(svd.a), 1e-10);
    EXPECT_LT(orthogonality_error(svd.b), 1e-10);
    if (d == std::min(n, p)) {
      EXPECT_LT(gw::max_abs(svd.a * svd.sigma_matrix() * svd.b.transpose() - x), 1e-10);
    }
  }
}

TEST(Svd, RankRequestTooLarge) {
  EXPECT_GW_ERROR(gw::svd_thin(Matrix::Ones(3, 4), 4), RankRequestTooLarge);
  EXPECT_GW_ERROR(gw::svd_thin(Matrix::Ones(3, 4), 0), RankRequestTooLarge);
}

TEST(SymEig, DescendingAndReconstructs) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = oracle::uniform_int(rng, 1, 8);
    const Matrix g = oracle::gaussian(rng, d, d);
    const Matrix s = g + g.transpose();
    const gw::SymmetricEigen e = gw::sym_eig_desc(s);
    const oracle::Eig ref = oracle::jacobi_eigen(s);
    for (int i = 0; i < d; ++i) EXPECT_NEAR(e.values(i), ref.values(i), 1e-10);
    for (int i = 1; i < d; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    EXPECT_LT(gw::max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - s),
              1e-10);
  }
}

TEST(SymSqrt, MatchesOracleAndSquares) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = oracle::uniform_int(rng, 1, 8);
    const Matrix g = oracle::gaussian(rng, d, d + 2);
    const Matrix w = g * g.transpose();
    const Matrix root = gw::sym_sqrt(w);
    const Matrix inv_root = gw::sym_inv_sqrt(w);
    EXPECT_LT(gw::max_abs(root - oracle::spd_sqrt(w)), 1e-9);
    EXPECT_LT(gw::max_abs(root * root - w), 1e-9 * (1 + gw::max_abs(w)));
    EXPECT_LT(gw::max_abs(inv_root * w * inv_root - Matrix::Identity(d, d)), 1e-8);
  }
}

TEST(SymSqrt, RejectsIndefinite) {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  EXPECT_GW_ERROR(gw::sym_inv_sqrt(m), NotPositiveDefinite);
  EXPECT_GW_ERROR(gw::sym_inv_sqrt(Matrix::Zero(2, 2)), NotPositiveDefinite);
}

TEST(SampleTransform, DeterministicAndStructured) {
  for (auto kind : {TransformKind::general, TransformKind::orthogonal,
                    TransformKind::upper_triangular, TransformKind::diagonal,
                    TransformKind::scaled_identity}) {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      const gw::Transform a = gw::sample_transform(kind, 4, seed);
      const gw::Transform b = gw::sample_transform(kind, 4, seed);
      EXPECT_EQ(a.kind(), kind);
      EXPECT_TRUE(a.matrix() == b.matrix());  // bit-identical
    }
    EXPECT_FALSE(gw::sample_transform(kind, 4, 1).matrix() ==
                 gw::sample_transform(kind, 4, 2).matrix());
  }
  const Matrix q = gw::sample_transform(TransformKind::orthogonal, 6, 5).matrix();
  EXPECT_LT(orthogonality_error(q), 1e-12);
  EXPECT_GW_ERROR(gw::sample_transform(TransformKind::general, 0, 1), InvalidArgument);
}

TEST(SampleTransform, LargeUpperTriangularIsAccepted) {
  // Random |N(0,1)| triangular matrices are badly conditioned at this size
  // but still exactly invertible through back substitution.
  const gw::Transform t = gw::sample_transform(TransformKind::upper_triangular, 300, 7);
  EXPECT_EQ(t.kind(), TransformKind::upper_triangular);
  EXPECT_TRUE(gw::all_finite(t.inverse()));
}

TEST(PowerDiag, PowersEntries) {
  Vector diag(3);
  diag << 4.0, 1.0, 0.25;
  const gw::Transform p = gw::power_diag(gw::Transform::diagonal(diag), 0.5);
  EXPECT_DOUBLE_EQ(p.matrix()(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(p.matrix()(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(p.matrix()(2, 2), 0.5);
  const gw::Transform id = gw::power_diag(gw::Transform::diagonal(diag), 0.0);
  EXPECT_TRUE(id.matrix() == Matrix::Identity(3, 3));
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_GW_ERROR(gw::power_diag(gw::Transform(rot, TransformKind::orthogonal), 2.0),
                  InvalidArgument);
}

TEST(InverseCondition, Extremes) {
  EXPECT_DOUBLE_EQ(gw::inverse_condition(Matrix::Identity(4, 4)), 1.0);
  EXPECT_DOUBLE_EQ(gw::inverse_condition(Matrix::Zero(3, 3)), 0.0);
  Vector d(2);
  d << 10.0, 0.1;
  EXPECT_NEAR(gw::inverse_condition(Matrix(d.asDiagonal())), 0.01, 1e-15);
}
