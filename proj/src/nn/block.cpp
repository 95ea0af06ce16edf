#include "ffhsi/nn/block.hpp"

#include <cmath>

#include "ffhsi/tensor/activation.hpp"

namespace ffhsi {

MatrixXd& weights_of(LayerParams& p) {
  return std::visit([](auto& v) -> MatrixXd& { return v.weights; }, p);
}
const MatrixXd& weights_of(const LayerParams& p) {
  return std::visit([](const auto& v) -> const MatrixXd& { return v.weights; }, p);
}
VectorXd& bias_of(LayerParams& p) {
  return std::visit([](auto& v) -> VectorXd& { return v.bias; }, p);
}
const VectorXd& bias_of(const LayerParams& p) {
  return std::visit([](const auto& v) -> const VectorXd& { return v.bias; }, p);
}

LayerParams zeros_like(const LayerParams& p) {
  LayerParams z = p;
  weights_of(z).setZero();
  bias_of(z).setZero();
  return z;
}

Shape Block::out_shape() const {
  Shape s = activity_shape;
  for (const auto& st : tail) {
    if (st.kind == StageKind::maxpool) s.length /= 2;
    if (st.kind == StageKind::flatten) s = {1, s.size()};
  }
  return s;
}

MatrixXd Block::activity(const MatrixXd& x) const {
  MatrixXd z;
  if (const auto* d = std::get_if<DenseParams<double>>(&params)) {
    z = dense_forward(x, *d);
  } else {
    z = conv1_forward(x, std::get<Conv1Params<double>>(params), in_shape.length);
  }
  if (relu) z = ffhsi::relu(z);
  return z;
}

void Block::activity_backward(const MatrixXd& x, const MatrixXd& activity,
                              const MatrixXd& grad_activity, LayerParams& grads,
                              MatrixXd* grad_in) const {
  const MatrixXd grad_pre = relu ? relu_backward(activity, grad_activity) : grad_activity;
  if (const auto* d = std::get_if<DenseParams<double>>(&params)) {
    dense_backward(x, *d, grad_pre, std::get<DenseParams<double>>(grads), grad_in);
  } else {
    conv1_backward(x, std::get<Conv1Params<double>>(params), in_shape.length, grad_pre,
                   std::get<Conv1Params<double>>(grads), grad_in);
  }
}

MatrixXd Block::tail_forward(const MatrixXd& activity, TailCache* cache) const {
  MatrixXd cur = activity;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (tail[i].kind != StageKind::maxpool) continue;  // flatten is a layout no-op
    if (cache != nullptr) cache->inputs.push_back(cur);
    auto pooled = maxpool1_forward(cur, tail_shapes[i].channels, tail_shapes[i].length);
    cur = std::move(pooled.values);
    if (cache != nullptr) cache->pools.push_back(std::move(pooled));
  }
  return cur;
}

MatrixXd Block::tail_backward(const TailCache& cache, const MatrixXd& grad_out) const {
  MatrixXd g = grad_out;
  for (std::size_t i = cache.pools.size(); i-- > 0;) {
    g = maxpool1_backward(cache.pools[i], cache.inputs[i].rows(), g);
  }
  return g;
}

std::vector<Block> build_blocks(const NetworkSpec& spec) {
  const auto trace = spec.shape_trace();
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const Stage& st = spec.stages[i];
    const Shape in = trace[i];
    if (st.has_params()) {
      Block b;
      b.in_shape = in;
      b.relu = st.relu;
      b.activity_shape = trace[i + 1];
      if (st.kind == StageKind::dense) {
        b.params = DenseParams<double>(in.size(), st.units);
      } else {
        b.params = Conv1Params<double>(in.channels, st.units, st.kernel);
      }
      blocks.push_back(std::move(b));
      continue;
    }
    if (blocks.empty()) {
      throw ConfigError("stage " + std::to_string(i + 1) + " precedes the first dense/conv stage");
    }
    Block& b = blocks.back();
    if (st.kind == StageKind::relu) {
      if (!b.tail.empty()) throw ConfigError("relu is only supported directly after dense/conv");
      b.relu = true;
      continue;
    }
    b.tail.push_back(st);
    b.tail_shapes.push_back(in);
  }
  if (blocks.empty()) throw ConfigError("network has no dense or conv stage");
  return blocks;
}

void he_uniform_init(LayerParams& params, Rng& rng) {
  MatrixXd& w = weights_of(params);
  const double limit = std::sqrt(6.0 / static_cast<double>(w.cols()));
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-limit, limit);
  bias_of(params).setZero();
}

void init_blocks(std::vector<Block>& blocks, Rng& rng) {
  for (auto& b : blocks) he_uniform_init(b.params, rng);
}

BlockOptimizer::BlockOptimizer(const LayerParams& p, const AdamConfig& cfg)
    : weights(weights_of(p).rows(), weights_of(p).cols(), cfg),
      bias(bias_of(p).rows(), 1, cfg) {}

void BlockOptimizer::step(LayerParams& params, const LayerParams& grads) {
  adam_step(weights_of(params), weights_of(grads), weights);
  adam_step(bias_of(params), bias_of(grads), bias);
}

Index parameter_count(const std::vector<Block>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += weights_of(b.params).size() + bias_of(b.params).size();
  return n;
}

VectorXd pack_parameters(const std::vector<LayerParams>& params) {
  Index n = 0;
  for (const auto& p : params) n += weights_of(p).size() + bias_of(p).size();
  VectorXd flat(n);
  Index at = 0;
  for (const auto& p : params) {
    const auto& w = weights_of(p);
    const auto& b = bias_of(p);
    flat.segment(at, w.size()) = w.reshaped();
    at += w.size();
    flat.segment(at, b.size()) = b;
    at += b.size();
  }
  return flat;
}

void unpack_parameters(const VectorXd& flat, std::vector<LayerParams>& params) {
  Index at = 0;
  for (auto& p : params) {
    auto& w = weights_of(p);
    auto& b = bias_of(p);
    require_dim(at + w.size() + b.size() <= flat.size(), "unpack_parameters: vector too short");
    w.reshaped() = flat.segment(at, w.size());
    at += w.size();
    b = flat.segment(at, b.size());
    at += b.size();
  }
  require_dim(at == flat.size(), "unpack_parameters: vector too long");
}

}  // namespace ffhsi
