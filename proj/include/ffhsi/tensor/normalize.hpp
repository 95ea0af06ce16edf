#pragma once

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Scales each column to unit L2 norm. Zero columns pass through unchanged.
template <typename Scalar>
Matrix<Scalar> l2_normalize_columns(const Matrix<Scalar>& x) {
  Matrix<Scalar> out = x;
  for (Index s = 0; s < out.cols(); ++s) {
    const Scalar n = out.col(s).norm();
    if (n > Scalar(0)) out.col(s) /= n;
  }
  return out;
}

/// Backward pass of l2_normalize_columns given its input and output.
template <typename Scalar>
Matrix<Scalar> l2_normalize_backward(const Matrix<Scalar>& in, const Matrix<Scalar>& out,
                                     const Matrix<Scalar>& grad_out) {
  Matrix<Scalar> grad_in(grad_out.rows(), grad_out.cols());
  for (Index s = 0; s < in.cols(); ++s) {
    const Scalar n = in.col(s).norm();
    if (n > Scalar(0)) {
      const Scalar proj = out.col(s).dot(grad_out.col(s));
      grad_in.col(s) = (grad_out.col(s) - proj * out.col(s)) / n;
    } else {
      grad_in.col(s) = grad_out.col(s);
    }
  }
  return grad_in;
}

}  // namespace ffhsi
