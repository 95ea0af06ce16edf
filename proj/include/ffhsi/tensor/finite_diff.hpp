#pragma once

#include <cmath>
#include <functional>

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Central-difference gradient of a scalar function, one coordinate at a
/// time. `params` is restored before returning.
template <typename Scalar, typename F>
Vector<Scalar> finite_diff_grad(F&& f, Vector<Scalar>& params, Scalar h) {
  Vector<Scalar> grad(params.size());
  for (Index i = 0; i < params.size(); ++i) {
    const Scalar saved = params[i];
    params[i] = saved + h;
    const Scalar up = f(params);
    params[i] = saved - h;
    const Scalar down = f(params);
    params[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff_grad: function is not finite at coordinate " +
                         std::to_string(i));
    }
    grad[i] = (up - down) / (Scalar(2) * h);
  }
  return grad;
}

/// ||a - b|| / max(||a||, ||b||), or 0 when both vanish.
template <typename A, typename B>
double relative_error(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double denom = std::max(a.norm(), b.norm());
  if (denom == 0.0) return 0.0;
  return (a - b).norm() / denom;
}

}  // namespace ffhsi
