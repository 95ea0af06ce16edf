#include "ffhsi/ffa/ff.hpp"

#include <numeric>

#include "ffhsi/tensor/activation.hpp"

namespace ffhsi {

double goodness(const Eigen::Ref<const VectorXd>& activity, int sign) {
  return sign * activity.squaredNorm();
}

VectorXd goodness_batch(const MatrixXd& activity, int sign) {
  return sign * activity.colwise().squaredNorm().transpose();
}

double positive_probability(double g, double theta) { return sigmoid(g - theta); }

double ff_layer_loss(double g_pos, double g_neg, double theta) {
  return softplus(theta - g_pos) + softplus(g_neg - theta);
}

double ff_batch_loss(std::span<const double> g_pos, std::span<const double> g_neg, double theta) {
  require_dim(g_pos.size() == g_neg.size() && !g_pos.empty(), "ff_batch_loss: unpaired batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < g_pos.size(); ++i) sum += ff_layer_loss(g_pos[i], g_neg[i], theta);
  return sum / static_cast<double>(g_pos.size());
}

VectorXd layer_normalize(const Eigen::Ref<const VectorXd>& activity) {
  return l2_normalize_columns<double>(activity);
}

FfNetwork FfNetwork::build(const NetworkSpec& spec, const LabelEncoding& enc,
                           const FfNetworkOptions& opts, Rng& init_rng) {
  FfNetwork net;
  net.spec = spec;
  net.encoding = enc;
  net.normalize_between = opts.normalize_between;
  net.include_first_layer = opts.include_first_layer;
  auto blocks = build_blocks(spec);
  init_blocks(blocks, init_rng);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    FfLayerState layer;
    layer.theta = i < opts.thetas.size() ? opts.thetas[i] : opts.layer.theta;
    layer.goodness_sign = opts.layer.goodness_sign;
    if (layer.goodness_sign != 1 && layer.goodness_sign != -1) {
      throw ConfigError("goodness_sign must be +1 or -1");
    }
    if (layer.goodness_sign == 1 && !(layer.theta > 0.0)) {
      throw ConfigError("theta must be positive for sum-of-squares goodness");
    }
    layer.adam = BlockOptimizer(blocks[i].params, opts.adam);
    layer.block = std::move(blocks[i]);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

MatrixXd FfNetwork::next_input(std::size_t layer, const MatrixXd& activity) const {
  MatrixXd out = layers[layer].block.tail_forward(activity, nullptr);
  return normalize_between ? l2_normalize_columns(out) : out;
}

VectorXd FfNetwork::total_goodness(const MatrixXd& inputs) const {
  VectorXd total = VectorXd::Zero(inputs.cols());
  MatrixXd x = inputs;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const MatrixXd a = layers[i].block.activity(x);
    if (i > 0 || include_first_layer || layers.size() == 1) {
      total += goodness_batch(a, layers[i].goodness_sign);
    }
    if (i + 1 < layers.size()) x = next_input(i, a);
  }
  return total;
}

namespace {

// dL/d(activity) for the mean pair loss: the loss depends on the activity
// only through G = sign * ||a||^2.
MatrixXd loss_grad(const MatrixXd& a, const VectorXd& g, double theta, int sign, bool positive) {
  const double inv_b = 1.0 / static_cast<double>(a.cols());
  VectorXd dg(g.size());
  for (Index s = 0; s < g.size(); ++s) {
    dg[s] = positive ? -sigmoid(theta - g[s]) * inv_b : sigmoid(g[s] - theta) * inv_b;
  }
  return (2.0 * sign) * (a.array().rowwise() * dg.transpose().array()).matrix();
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

FfHistory train_ff(FfNetwork& net, const SampleSet& train, const SampleSet& val,
                   const FfTrainOptions& opts, Rng& rng) {
  const Index code_len = net.encoding.code_len();
  require_dim(code_len + train.bands() == net.input_len(),
              "train_ff: code length + bands = " + std::to_string(code_len + train.bands()) +
                  " but the network expects " + std::to_string(net.input_len()));
  if (opts.batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (!opts.trainable.empty() && opts.trainable.size() != net.layers.size()) {
    throw ConfigError("trainable mask must have one entry per layer");
  }
  const std::size_t n_layers = net.layers.size();
  const auto n = static_cast<std::size_t>(train.size());
  FfHistory history;
  if (n == 0) return history;

  std::vector<std::size_t> order(n);
  std::vector<int> wrong(n);
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < n; ++i) {
      wrong[i] = draw_wrong_label(train.labels[order[i]], train.classes, rng);
    }

    FfEpochLog log;
    log.epoch = epoch;
    log.loss.assign(n_layers, 0.0);
    log.mean_g_pos.assign(n_layers, 0.0);
    log.mean_g_neg.assign(n_layers, 0.0);
    std::size_t batches = 0;

    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(opts.batch_size));
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const SampleSet batch = train.select(idx);
      MatrixXd x_pos = embed_batch(batch.spectra, batch.labels, net.encoding);
      MatrixXd x_neg = embed_batch(batch.spectra, std::span<const int>(wrong.data() + start, idx.size()),
                                   net.encoding);

      for (std::size_t l = 0; l < n_layers; ++l) {
        FfLayerState& layer = net.layers[l];
        MatrixXd a_pos, a_neg;
        try {
          a_pos = layer.block.activity(x_pos);
          a_neg = layer.block.activity(x_neg);
        } catch (const NumericError& e) {
          throw NumericError("train_ff: " + std::string(e.what()) + " at layer " + std::to_string(l + 1) +
                             ", epoch " + std::to_string(epoch));
        }
        const VectorXd g_pos = goodness_batch(a_pos, layer.goodness_sign);
        const VectorXd g_neg = goodness_batch(a_neg, layer.goodness_sign);
        const double loss = ff_batch_loss(std::span<const double>(g_pos.data(), g_pos.size()),
                                          std::span<const double>(g_neg.data(), g_neg.size()),
                                          layer.theta);
        if (!std::isfinite(loss)) {
          throw NumericError("train_ff: non-finite loss at layer " + std::to_string(l + 1) +
                             ", epoch " + std::to_string(epoch));
        }
        log.loss[l] += loss;
        log.mean_g_pos[l] += g_pos.mean();
        log.mean_g_neg[l] += g_neg.mean();

        if (opts.trainable.empty() || opts.trainable[l]) {
          LayerParams grads = zeros_like(layer.block.params);
          layer.block.activity_backward(x_pos, a_pos,
                                        loss_grad(a_pos, g_pos, layer.theta, layer.goodness_sign, true),
                                        grads, nullptr);
          layer.block.activity_backward(x_neg, a_neg,
                                        loss_grad(a_neg, g_neg, layer.theta, layer.goodness_sign, false),
                                        grads, nullptr);
          layer.adam.step(layer.block.params, grads);
        }
        if (l + 1 < n_layers) {
          x_pos = net.next_input(l, a_pos);
          x_neg = net.next_input(l, a_neg);
        }
      }
      ++batches;
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
      log.loss[l] /= static_cast<double>(batches);
      log.mean_g_pos[l] /= static_cast<double>(batches);
      log.mean_g_neg[l] /= static_cast<double>(batches);
    }
    if (opts.validate_every > 0 && val.size() > 0 && epoch % opts.validate_every == 0) {
      log.val_accuracy = accuracy(predict_ff_batch(net, val.spectra), val.labels);
    }
    history.epochs.push_back(std::move(log));
  }
  return history;
}

FfPrediction predict_ff(const FfNetwork& net, const Eigen::Ref<const VectorXd>& spectrum,
                        std::span<const int> candidate_order) {
  const int classes = net.encoding.classes;
  std::vector<int> order(candidate_order.begin(), candidate_order.end());
  if (order.empty()) {
    order.resize(classes);
    std::iota(order.begin(), order.end(), 1);
  }
  FfPrediction out;
  out.scores = VectorXd::Zero(classes);
  for (int c : order) {
    const MatrixXd input = embed_batch(spectrum, std::span<const int>(&c, 1), net.encoding);
    out.scores[c - 1] = net.total_goodness(input)[0];
  }
  out.label = 1;
  for (int c = 2; c <= classes; ++c) {
    if (out.scores[c - 1] > out.scores[out.label - 1]) out.label = c;
  }
  return out;
}

std::vector<int> predict_ff_batch(const FfNetwork& net, const MatrixXd& spectra, MatrixXd* scores) {
  const int classes = net.encoding.classes;
  const Index n = spectra.cols();
  MatrixXd all(classes, n);
  constexpr Index kChunk = 512;
  for (Index start = 0; start < n; start += kChunk) {
    const Index len = std::min(kChunk, n - start);
    const MatrixXd chunk = spectra.middleCols(start, len);
    for (int c = 1; c <= classes; ++c) {
      const std::vector<int> labels(static_cast<std::size_t>(len), c);
      all.row(c - 1).segment(start, len) = net.total_goodness(embed_batch(chunk, labels, net.encoding)).transpose();
    }
  }
  std::vector<int> out(static_cast<std::size_t>(n), 1);
  for (Index s = 0; s < n; ++s) {
    int best = 1;
    for (int c = 2; c <= classes; ++c) {
      if (all(c - 1, s) > all(best - 1, s)) best = c;
    }
    out[static_cast<std::size_t>(s)] = best;
  }
  if (scores != nullptr) *scores = std::move(all);
  return out;
}

}  // namespace ffhsi
