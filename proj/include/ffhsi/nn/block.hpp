#pragma once

#include <variant>
#include <vector>

#include "ffhsi/nn/network_spec.hpp"
#include "ffhsi/tensor/adam.hpp"
#include "ffhsi/tensor/conv1.hpp"
#include "ffhsi/tensor/dense.hpp"
#include "ffhsi/tensor/pool.hpp"
#include "ffhsi/tensor/random.hpp"

namespace ffhsi {

using LayerParams = std::variant<DenseParams<double>, Conv1Params<double>>;

MatrixXd& weights_of(LayerParams& p);
const MatrixXd& weights_of(const LayerParams& p);
VectorXd& bias_of(LayerParams& p);
const VectorXd& bias_of(const LayerParams& p);

/// Zero-filled parameters of the same kind and shape.
LayerParams zeros_like(const LayerParams& p);

/// Non-parametric stages applied after a block's activity.
struct TailCache {
  std::vector<MatrixXd> inputs;
  std::vector<PoolResult<double>> pools;
};

/// A parameterized stage (dense or conv, optional ReLU) followed by the
/// pooling/flatten stages up to the next parameterized stage. The block's
/// activity is the post-activation output of its parameterized stage.
struct Block {
  LayerParams params;
  bool relu = true;
  Shape in_shape;
  Shape activity_shape;
  std::vector<Stage> tail;
  std::vector<Shape> tail_shapes;  // shape entering each tail stage

  Shape out_shape() const;

  MatrixXd activity(const MatrixXd& x) const;

  /// Gradients of the parameters given dL/d(activity). Accumulates into
  /// `grads`; writes dL/dx when `grad_in` is set.
  void activity_backward(const MatrixXd& x, const MatrixXd& activity, const MatrixXd& grad_activity,
                         LayerParams& grads, MatrixXd* grad_in) const;

  MatrixXd tail_forward(const MatrixXd& activity, TailCache* cache) const;
  MatrixXd tail_backward(const TailCache& cache, const MatrixXd& grad_out) const;
};

/// Groups the spec's stages into blocks. Standalone relu stages are folded
/// into the preceding parameterized stage.
std::vector<Block> build_blocks(const NetworkSpec& spec);

/// He-uniform weights (limit sqrt(6 / fan_in)), zero biases, drawn in block
/// order from `rng`.
void he_uniform_init(LayerParams& params, Rng& rng);
void init_blocks(std::vector<Block>& blocks, Rng& rng);

/// Adam moments for one block's weights and bias.
struct BlockOptimizer {
  AdamState<double> weights;
  AdamState<double> bias;

  BlockOptimizer() = default;
  BlockOptimizer(const LayerParams& p, const AdamConfig& cfg);
  void step(LayerParams& params, const LayerParams& grads);
};

/// Number of scalar parameters in a set of blocks.
Index parameter_count(const std::vector<Block>& blocks);

/// Parameters packed as [W0, b0, W1, b1, ...], column-major.
VectorXd pack_parameters(const std::vector<LayerParams>& params);
void unpack_parameters(const VectorXd& flat, std::vector<LayerParams>& params);

}  // namespace ffhsi
