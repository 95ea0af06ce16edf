#pragma once

#include "ffhsi/tensor.hpp"

namespace ffhsi::test {

inline MatrixXd random_matrix(Rng& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

inline VectorXd random_vector(Rng& rng, Index n, double lo = -1.0, double hi = 1.0) {
  return random_matrix(rng, n, 1, lo, hi);
}

}  // namespace ffhsi::test
