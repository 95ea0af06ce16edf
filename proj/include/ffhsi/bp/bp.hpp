#pragma once

#include <span>
#include <string>
#include <vector>

#include "ffhsi/dataset/encoding.hpp"
#include "ffhsi/dataset/samples.hpp"
#include "ffhsi/nn/block.hpp"

namespace ffhsi {

/// How spectra become network inputs for backprop: with a neutral label
/// code prepended (same input length as FF networks) or as raw spectra.
enum class InputMode { neutral, raw };

std::string to_string(InputMode mode);
InputMode parse_input_mode(std::string_view name);

/// -log(probs[label-1]) with probabilities floored at 1e-12.
double cross_entropy(const Eigen::Ref<const VectorXd>& probs, int true_label);

struct BpNetwork {
  NetworkSpec spec;
  LabelEncoding encoding;
  InputMode input_mode = InputMode::neutral;
  bool normalize_between = true;
  std::vector<Block> body;
  DenseParams<double> head;
  std::vector<BlockOptimizer> body_adam;
  BlockOptimizer head_adam;

  /// Body then head initialized from `init_rng`, in that order.
  static BpNetwork build(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                         bool normalize_between, const AdamConfig& adam, Rng& init_rng);

  /// Adopts existing body blocks and draws a fresh head from `init_rng`.
  static BpNetwork from_body(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                             bool normalize_between, std::vector<Block> body,
                             const AdamConfig& adam, Rng& init_rng);

  Index input_len() const { return spec.input_len; }
  int classes() const { return static_cast<int>(head.out_size()); }

  /// Network inputs for a batch of spectra according to `input_mode`.
  MatrixXd inputs_for(const MatrixXd& spectra) const;

  MatrixXd logits(const MatrixXd& inputs) const;
  MatrixXd probabilities(const MatrixXd& inputs) const;
};

/// Gradients for every body block followed by the head.
struct BpGradients {
  std::vector<LayerParams> body;
  DenseParams<double> head;
};

/// Mean cross-entropy over the batch; fills `grads` (zeroed first) when set.
double bp_loss(const BpNetwork& net, const MatrixXd& inputs, std::span<const int> labels,
               BpGradients* grads);

/// All parameters packed [body..., head], matching pack_parameters order.
VectorXd pack_parameters(const BpNetwork& net);
void unpack_parameters(const VectorXd& flat, BpNetwork& net);
VectorXd pack_gradients(const BpGradients& grads);

struct BpTrainOptions {
  int epochs = 250;
  Index batch_size = 128;
  /// When false only the head is updated.
  bool train_body = true;
  int validate_every = 1;
};

struct BpEpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = -1.0;
};

struct BpHistory {
  std::vector<BpEpochLog> epochs;
};

/// Minibatch Adam over full backpropagated gradients. Throws NumericError
/// naming epoch and batch on a non-finite loss.
BpHistory train_bp(BpNetwork& net, const SampleSet& train, const SampleSet& val,
                   const BpTrainOptions& opts, Rng& rng);

struct BpPrediction {
  int label = 1;
  VectorXd probs;
};

/// Argmax of the softmax head for one network input vector; lowest id wins ties.
BpPrediction predict_bp(const BpNetwork& net, const Eigen::Ref<const VectorXd>& input);

/// Batched prediction from raw spectra.
std::vector<int> predict_bp_batch(const BpNetwork& net, const MatrixXd& spectra);

}  // namespace ffhsi
