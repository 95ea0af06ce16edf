#pragma once

#include <Eigen/Dense>
#include <string>

#include "ffhsi/tensor/errors.hpp"

namespace ffhsi {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Per-sample activation vector. Batched code stores one sample per column.
template <typename Scalar>
using Tensor1 = Vector<Scalar>;

/// Throws NumericError if any coefficient of `m` is NaN or Inf.
template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* op) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite value produced by ") + op);
  }
}

inline void require_dim(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace ffhsi
