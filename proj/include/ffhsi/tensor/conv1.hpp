#pragma once

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// 1D convolution kernels. Row f of `weights` holds filter f laid out as
/// [in_channels x kernel_len], channel-major.
template <typename Scalar>
struct Conv1Params {
  Matrix<Scalar> weights;
  Vector<Scalar> bias;
  Index in_channels = 0;
  Index kernel_len = 0;

  Conv1Params() = default;
  Conv1Params(Index channels, Index filters, Index kernel)
      : weights(Matrix<Scalar>::Zero(filters, channels * kernel)),
        bias(Vector<Scalar>::Zero(filters)),
        in_channels(channels),
        kernel_len(kernel) {}

  Index filters() const { return weights.rows(); }
  Index out_length(Index in_length) const { return in_length - kernel_len + 1; }
};

namespace detail {

// Lays out the receptive fields of one sample as [out_len x (C*K)]. Sample
// data is channel-major: element (c, t) sits at c*length + t.
template <typename Scalar>
Matrix<Scalar> im2col(const Scalar* sample, Index channels, Index length, Index kernel) {
  const Index out_len = length - kernel + 1;
  Eigen::Map<const Matrix<Scalar>> series(sample, length, channels);
  Matrix<Scalar> cols(out_len, channels * kernel);
  for (Index c = 0; c < channels; ++c) {
    for (Index j = 0; j < kernel; ++j) {
      cols.col(c * kernel + j) = series.col(c).segment(j, out_len);
    }
  }
  return cols;
}

}  // namespace detail

/// Valid cross-correlation, stride 1, no kernel flip. `x` holds one
/// multichannel series per column ([in_channels * length] rows); the result
/// holds [filters * (length - kernel_len + 1)] rows in the same layout.
template <typename Scalar>
Matrix<Scalar> conv1_forward(const Matrix<Scalar>& x, const Conv1Params<Scalar>& p,
                             Index length) {
  require_dim(x.rows() == p.in_channels * length,
              "conv1_forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                  std::to_string(p.in_channels) + " channels x " + std::to_string(length));
  require_dim(length >= p.kernel_len, "conv1_forward: series length " + std::to_string(length) +
                                          " shorter than kernel " +
                                          std::to_string(p.kernel_len));
  const Index out_len = p.out_length(length);
  Matrix<Scalar> out(p.filters() * out_len, x.cols());
  for (Index s = 0; s < x.cols(); ++s) {
    const Matrix<Scalar> cols = detail::im2col(x.col(s).data(), p.in_channels, length, p.kernel_len);
    Eigen::Map<Matrix<Scalar>> y(out.col(s).data(), out_len, p.filters());
    y.noalias() = cols * p.weights.transpose();
    y.rowwise() += p.bias.transpose();
  }
  require_finite(out, "conv1_forward");
  return out;
}

/// Accumulates kernel/bias gradients; writes dL/dx when `grad_in` is set.
template <typename Scalar>
void conv1_backward(const Matrix<Scalar>& x, const Conv1Params<Scalar>& p, Index length,
                    const Matrix<Scalar>& grad_out, Conv1Params<Scalar>& grads,
                    Matrix<Scalar>* grad_in) {
  const Index out_len = p.out_length(length);
  require_dim(grad_out.rows() == p.filters() * out_len && grad_out.cols() == x.cols(),
              "conv1_backward: gradient shape mismatch");
  if (grad_in != nullptr) grad_in->setZero(x.rows(), x.cols());
  for (Index s = 0; s < x.cols(); ++s) {
    const Matrix<Scalar> cols = detail::im2col(x.col(s).data(), p.in_channels, length, p.kernel_len);
    Eigen::Map<const Matrix<Scalar>> dy(grad_out.col(s).data(), out_len, p.filters());
    grads.weights.noalias() += dy.transpose() * cols;
    grads.bias += dy.colwise().sum().transpose();
    if (grad_in != nullptr) {
      const Matrix<Scalar> dcols = dy * p.weights;
      Eigen::Map<Matrix<Scalar>> dx(grad_in->col(s).data(), length, p.in_channels);
      for (Index c = 0; c < p.in_channels; ++c) {
        for (Index j = 0; j < p.kernel_len; ++j) {
          dx.col(c).segment(j, out_len) += dcols.col(c * p.kernel_len + j);
        }
      }
    }
  }
}

}  // namespace ffhsi
