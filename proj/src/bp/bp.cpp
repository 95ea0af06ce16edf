#include "ffhsi/bp/bp.hpp"

#include <cmath>
#include <numeric>

#include "ffhsi/tensor/activation.hpp"
#include "ffhsi/tensor/normalize.hpp"

namespace ffhsi {

std::string to_string(InputMode mode) { return mode == InputMode::raw ? "raw" : "neutral"; }

InputMode parse_input_mode(std::string_view name) {
  if (name == "neutral") return InputMode::neutral;
  if (name == "raw") return InputMode::raw;
  throw ConfigError("unknown input mode \"" + std::string(name) + "\" (expected neutral or raw)");
}

double cross_entropy(const Eigen::Ref<const VectorXd>& probs, int true_label) {
  require_dim(true_label >= 1 && true_label <= probs.size(),
              "cross_entropy: label " + std::to_string(true_label) + " outside [1, " +
                  std::to_string(probs.size()) + "]");
  return -std::log(std::max(probs[true_label - 1], 1e-12));
}

BpNetwork BpNetwork::build(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                           bool normalize_between, const AdamConfig& adam, Rng& init_rng) {
  auto body = build_blocks(spec);
  init_blocks(body, init_rng);
  return from_body(spec, enc, mode, normalize_between, std::move(body), adam, init_rng);
}

BpNetwork BpNetwork::from_body(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                               bool normalize_between, std::vector<Block> body,
                               const AdamConfig& adam, Rng& init_rng) {
  if (spec.head_units < 1) throw ConfigError("network head needs at least one unit");
  BpNetwork net;
  net.spec = spec;
  net.encoding = enc;
  net.input_mode = mode;
  net.normalize_between = normalize_between;
  net.body = std::move(body);
  LayerParams head = DenseParams<double>(net.body.back().out_shape().size(), spec.head_units);
  he_uniform_init(head, init_rng);
  net.head = std::get<DenseParams<double>>(head);
  for (const auto& b : net.body) net.body_adam.emplace_back(b.params, adam);
  net.head_adam = BlockOptimizer(head, adam);
  return net;
}

MatrixXd BpNetwork::inputs_for(const MatrixXd& spectra) const {
  return input_mode == InputMode::raw ? spectra : neutral_batch(spectra, encoding);
}

namespace {

struct BlockCache {
  MatrixXd input;
  MatrixXd activity;
  TailCache tail;
  MatrixXd tail_out;  // before normalization
};

// Forward pass keeping what backward needs; returns head input.
MatrixXd forward_body(const BpNetwork& net, const MatrixXd& inputs, std::vector<BlockCache>* caches) {
  MatrixXd x = inputs;
  for (const auto& block : net.body) {
    BlockCache c;
    c.input = x;
    c.activity = block.activity(x);
    c.tail_out = block.tail_forward(c.activity, caches ? &c.tail : nullptr);
    x = net.normalize_between ? l2_normalize_columns(c.tail_out) : c.tail_out;
    if (caches != nullptr) caches->push_back(std::move(c));
  }
  return x;
}

}  // namespace

MatrixXd BpNetwork::logits(const MatrixXd& inputs) const {
  require_dim(inputs.rows() == input_len(), "BpNetwork: input has " + std::to_string(inputs.rows()) +
                                                " rows, network expects " + std::to_string(input_len()));
  return dense_forward(forward_body(*this, inputs, nullptr), head);
}

MatrixXd BpNetwork::probabilities(const MatrixXd& inputs) const { return softmax(logits(inputs)); }

double bp_loss(const BpNetwork& net, const MatrixXd& inputs, std::span<const int> labels,
               BpGradients* grads) {
  require_dim(static_cast<Index>(labels.size()) == inputs.cols(), "bp_loss: label count mismatch");
  require_dim(inputs.rows() == net.input_len(), "bp_loss: input length mismatch");
  std::vector<BlockCache> caches;
  const MatrixXd head_in = forward_body(net, inputs, grads ? &caches : nullptr);
  const MatrixXd probs = softmax(dense_forward(head_in, net.head));
  const double inv_b = 1.0 / static_cast<double>(inputs.cols());
  double loss = 0.0;
  for (Index s = 0; s < probs.cols(); ++s) loss += cross_entropy(probs.col(s), labels[s]);
  loss *= inv_b;
  if (grads == nullptr) return loss;

  grads->head = DenseParams<double>(net.head.in_size(), net.head.out_size());
  grads->body.clear();
  for (const auto& b : net.body) grads->body.push_back(zeros_like(b.params));

  MatrixXd d_logits = probs;
  for (Index s = 0; s < probs.cols(); ++s) d_logits(labels[s] - 1, s) -= 1.0;
  d_logits *= inv_b;
  MatrixXd g;
  dense_backward(head_in, net.head, d_logits, grads->head, &g);
  for (std::size_t i = net.body.size(); i-- > 0;) {
    const BlockCache& c = caches[i];
    const Block& block = net.body[i];
    if (net.normalize_between) {
      g = l2_normalize_backward(c.tail_out, l2_normalize_columns(c.tail_out), g);
    }
    g = block.tail_backward(c.tail, g);
    MatrixXd g_in;
    block.activity_backward(c.input, c.activity, g, grads->body[i], i > 0 ? &g_in : nullptr);
    g = std::move(g_in);
  }
  return loss;
}

VectorXd pack_parameters(const BpNetwork& net) {
  std::vector<LayerParams> all;
  for (const auto& b : net.body) all.push_back(b.params);
  all.emplace_back(net.head);
  return pack_parameters(all);
}

void unpack_parameters(const VectorXd& flat, BpNetwork& net) {
  std::vector<LayerParams> all;
  for (const auto& b : net.body) all.push_back(b.params);
  all.emplace_back(net.head);
  unpack_parameters(flat, all);
  for (std::size_t i = 0; i < net.body.size(); ++i) net.body[i].params = std::move(all[i]);
  net.head = std::get<DenseParams<double>>(all.back());
}

VectorXd pack_gradients(const BpGradients& grads) {
  std::vector<LayerParams> all = grads.body;
  all.emplace_back(grads.head);
  return pack_parameters(all);
}

BpHistory train_bp(BpNetwork& net, const SampleSet& train, const SampleSet& val,
                   const BpTrainOptions& opts, Rng& rng) {
  if (opts.batch_size <= 0) throw ConfigError("batch_size must be positive");
  const MatrixXd train_inputs = net.inputs_for(train.spectra);
  require_dim(train_inputs.rows() == net.input_len(),
              "train_bp: sample vectors have length " + std::to_string(train_inputs.rows()) +
                  ", network expects " + std::to_string(net.input_len()));
  const auto n = static_cast<std::size_t>(train.size());
  BpHistory history;
  if (n == 0) return history;

  std::vector<std::size_t> order(n);
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(opts.batch_size));
      MatrixXd inputs(train_inputs.rows(), static_cast<Index>(end - start));
      std::vector<int> labels;
      for (std::size_t i = start; i < end; ++i) {
        inputs.col(static_cast<Index>(i - start)) = train_inputs.col(static_cast<Index>(order[i]));
        labels.push_back(train.labels[order[i]]);
      }
      const std::string where = "epoch " + std::to_string(epoch) + ", batch " + std::to_string(batches + 1);
      BpGradients grads;
      double loss = 0.0;
      try {
        loss = bp_loss(net, inputs, labels, &grads);
      } catch (const NumericError& e) {
        throw NumericError("train_bp: " + std::string(e.what()) + " at " + where);
      }
      if (!std::isfinite(loss)) throw NumericError("train_bp: non-finite loss at " + where);
      loss_sum += loss;
      ++batches;
      if (opts.train_body) {
        for (std::size_t i = 0; i < net.body.size(); ++i) net.body_adam[i].step(net.body[i].params, grads.body[i]);
      }
      adam_step(net.head.weights, grads.head.weights, net.head_adam.weights);
      adam_step(net.head.bias, grads.head.bias, net.head_adam.bias);
    }
    BpEpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(batches);
    if (opts.validate_every > 0 && val.size() > 0 && epoch % opts.validate_every == 0) {
      const auto pred = predict_bp_batch(net, val.spectra);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == val.labels[i];
      log.val_accuracy = static_cast<double>(hits) / static_cast<double>(pred.size());
    }
    history.epochs.push_back(log);
  }
  return history;
}

BpPrediction predict_bp(const BpNetwork& net, const Eigen::Ref<const VectorXd>& input) {
  BpPrediction out;
  out.probs = net.probabilities(MatrixXd(input)).col(0);
  out.label = 1;
  for (Index c = 1; c < out.probs.size(); ++c) {
    if (out.probs[c] > out.probs[out.label - 1]) out.label = static_cast<int>(c) + 1;
  }
  return out;
}

std::vector<int> predict_bp_batch(const BpNetwork& net, const MatrixXd& spectra) {
  std::vector<int> out(static_cast<std::size_t>(spectra.cols()), 1);
  constexpr Index kChunk = 1024;
  for (Index start = 0; start < spectra.cols(); start += kChunk) {
    const Index len = std::min(kChunk, spectra.cols() - start);
    const MatrixXd logits = net.probabilities(net.inputs_for(spectra.middleCols(start, len)));
    for (Index s = 0; s < len; ++s) {
      Index best = 0;
      for (Index c = 1; c < logits.rows(); ++c) {
        if (logits(c, s) > logits(best, s)) best = c;
      }
      out[static_cast<std::size_t>(start + s)] = static_cast<int>(best) + 1;
    }
  }
  return out;
}

}  // namespace ffhsi
