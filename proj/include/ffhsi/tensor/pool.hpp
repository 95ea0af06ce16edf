#pragma once

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Max-pool output plus the flat input row of each winner, used to route
/// gradients back.
template <typename Scalar>
struct PoolResult {
  Matrix<Scalar> values;
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> argmax;
};

/// Window 2, stride 2 per channel. Output length is floor(length / 2); an odd
/// trailing element is dropped. Ties go to the earlier element.
template <typename Scalar>
PoolResult<Scalar> maxpool1_forward(const Matrix<Scalar>& x, Index channels, Index length) {
  require_dim(x.rows() == channels * length, "maxpool1: input shape mismatch");
  require_dim(length >= 1, "maxpool1: empty input");
  const Index out_len = length / 2;
  PoolResult<Scalar> r;
  r.values.resize(channels * out_len, x.cols());
  r.argmax.resize(channels * out_len, x.cols());
  for (Index s = 0; s < x.cols(); ++s) {
    for (Index c = 0; c < channels; ++c) {
      for (Index t = 0; t < out_len; ++t) {
        const Index a = c * length + 2 * t;
        const Index winner = x(a + 1, s) > x(a, s) ? a + 1 : a;
        r.values(c * out_len + t, s) = x(winner, s);
        r.argmax(c * out_len + t, s) = winner;
      }
    }
  }
  return r;
}

template <typename Scalar>
Matrix<Scalar> maxpool1_backward(const PoolResult<Scalar>& fwd, Index in_rows,
                                 const Matrix<Scalar>& grad_out) {
  Matrix<Scalar> grad_in = Matrix<Scalar>::Zero(in_rows, grad_out.cols());
  for (Index s = 0; s < grad_out.cols(); ++s) {
    for (Index i = 0; i < grad_out.rows(); ++i) grad_in(fwd.argmax(i, s), s) += grad_out(i, s);
  }
  return grad_in;
}

}  // namespace ffhsi
