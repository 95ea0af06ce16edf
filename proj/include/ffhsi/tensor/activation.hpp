#pragma once

#include <cmath>

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

template <typename Derived>
Matrix<typename Derived::Scalar> relu(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(typename Derived::Scalar(0));
}

/// Masks `grad_out` by the sign of the forward output.
template <typename Scalar>
Matrix<Scalar> relu_backward(const Matrix<Scalar>& out, const Matrix<Scalar>& grad_out) {
  return (out.array() > Scalar(0)).select(grad_out, Scalar(0));
}

/// Column-wise softmax with max subtraction.
template <typename Derived>
Matrix<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = logits;
  for (Index s = 0; s < out.cols(); ++s) {
    auto col = out.col(s);
    col.array() -= col.maxCoeff();
    col = col.array().exp().matrix();
    col /= col.sum();
  }
  require_finite(out, "softmax");
  return out;
}

/// Logistic function, stable for large |t|.
template <typename Scalar>
Scalar sigmoid(Scalar t) {
  if (t >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-t));
  const Scalar e = std::exp(t);
  return e / (Scalar(1) + e);
}

/// log(1 + e^t) without overflow.
template <typename Scalar>
Scalar softplus(Scalar t) {
  return std::max(t, Scalar(0)) + std::log1p(std::exp(-std::abs(t)));
}

}  // namespace ffhsi
