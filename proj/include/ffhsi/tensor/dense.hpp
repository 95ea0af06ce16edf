#pragma once

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Affine map parameters: weights are [out x in], bias is [out].
template <typename Scalar>
struct DenseParams {
  Matrix<Scalar> weights;
  Vector<Scalar> bias;

  DenseParams() = default;
  DenseParams(Index in_size, Index out_size)
      : weights(Matrix<Scalar>::Zero(out_size, in_size)), bias(Vector<Scalar>::Zero(out_size)) {}

  Index in_size() const { return weights.cols(); }
  Index out_size() const { return weights.rows(); }
};

/// out = W x + b, applied column-wise. `x` holds one sample per column.
template <typename Derived>
Matrix<typename Derived::Scalar> dense_forward(const Eigen::MatrixBase<Derived>& x,
                                               const DenseParams<typename Derived::Scalar>& p) {
  require_dim(x.rows() == p.in_size() && x.cols() > 0,
              "dense_forward: input has " + std::to_string(x.rows()) + " rows, layer expects " +
                  std::to_string(p.in_size()));
  Matrix<typename Derived::Scalar> out = p.weights * x;
  out.colwise() += p.bias;
  require_finite(out, "dense_forward");
  return out;
}

/// Accumulates parameter gradients for a batch and, when `grad_in` is not
/// null, writes dL/dx.
template <typename Scalar>
void dense_backward(const Matrix<Scalar>& x, const DenseParams<Scalar>& p,
                    const Matrix<Scalar>& grad_out, DenseParams<Scalar>& grads,
                    Matrix<Scalar>* grad_in) {
  require_dim(grad_out.rows() == p.out_size() && grad_out.cols() == x.cols(),
              "dense_backward: gradient shape mismatch");
  grads.weights.noalias() += grad_out * x.transpose();
  grads.bias += grad_out.rowwise().sum();
  if (grad_in != nullptr) {
    grad_in->noalias() = p.weights.transpose() * grad_out;
  }
}

}  // namespace ffhsi
