#pragma once

#include <cmath>
#include <cstdint>

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment buffers for one parameter tensor.
template <typename Scalar>
struct AdamState {
  Matrix<Scalar> m;
  Matrix<Scalar> v;
  std::int64_t step_count = 0;
  AdamConfig config;

  AdamState() = default;
  AdamState(Index rows, Index cols, AdamConfig cfg = {})
      : m(Matrix<Scalar>::Zero(rows, cols)), v(Matrix<Scalar>::Zero(rows, cols)), config(cfg) {}
};

/// One bias-corrected Adam update of `params` in place.
template <typename Derived, typename GradDerived>
void adam_step(Eigen::MatrixBase<Derived>& params, const Eigen::MatrixBase<GradDerived>& grads,
               AdamState<typename Derived::Scalar>& state) {
  using Scalar = typename Derived::Scalar;
  require_dim(params.rows() == grads.rows() && params.cols() == grads.cols() &&
                  params.rows() == state.m.rows() && params.cols() == state.m.cols(),
              "adam_step: parameter, gradient and state shapes differ");
  const AdamConfig& c = state.config;
  state.step_count += 1;
  state.m = Scalar(c.beta1) * state.m + Scalar(1 - c.beta1) * grads;
  state.v = Scalar(c.beta2) * state.v + Scalar(1 - c.beta2) * grads.cwiseAbs2();
  const Scalar m_corr = Scalar(1) - std::pow(Scalar(c.beta1), Scalar(state.step_count));
  const Scalar v_corr = Scalar(1) - std::pow(Scalar(c.beta2), Scalar(state.step_count));
  params.array() -= Scalar(c.lr) * (state.m.array() / m_corr) /
                    ((state.v.array() / v_corr).sqrt() + Scalar(c.epsilon));
  require_finite(params, "adam_step");
}

}  // namespace ffhsi
