#pragma once

#include "gaugeword/matcore.hpp"

namespace gaugeword {

// Context factor U (n x d) and embedding factor V (d x p). Only the product
// UV is determined by a factorization objective; word j is column j of V.
struct FactorPair {
  Matrix u;
  Matrix v;

  Eigen::Index dim() const noexcept { return v.rows(); }
  Matrix product() const { return u * v; }
};

// Throws ShapeMismatch unless u.cols() == v.rows() and both are non-empty.
void check_pair_shape(const FactorPair& pair);

}  // namespace gaugeword
