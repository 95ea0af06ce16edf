#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffhsi/dataset/encoding.hpp"
#include "ffhsi/dataset/samples.hpp"
#include "ffhsi/nn/block.hpp"
#include "ffhsi/tensor/normalize.hpp"

namespace ffhsi {

/// Signed sum of squared activities: sign * sum_j z_j^2.
double goodness(const Eigen::Ref<const VectorXd>& activity, int sign = +1);

/// Per-column goodness of a batch of activities.
VectorXd goodness_batch(const MatrixXd& activity, int sign = +1);

/// sigma(G - theta).
double positive_probability(double goodness, double theta);

/// softplus(theta - G_pos) + softplus(G_neg - theta) for one pos/neg pair.
double ff_layer_loss(double g_pos, double g_neg, double theta);

/// Mean of ff_layer_loss over paired batch entries.
double ff_batch_loss(std::span<const double> g_pos, std::span<const double> g_neg, double theta);

/// Unit L2 norm; the zero vector passes through.
VectorXd layer_normalize(const Eigen::Ref<const VectorXd>& activity);

struct FfLayerConfig {
  double theta = 2.0;
  int goodness_sign = +1;
};

/// One hidden block trained on its own goodness objective.
struct FfLayerState {
  Block block;
  BlockOptimizer adam;
  double theta = 2.0;
  int goodness_sign = +1;
};

struct FfNetworkOptions {
  FfLayerConfig layer;
  /// Per-layer thresholds; overrides `layer.theta` where given.
  std::vector<double> thetas;
  bool normalize_between = true;
  /// Whether the first block's goodness counts toward label scores.
  bool include_first_layer = true;
  AdamConfig adam;
};

struct FfNetwork {
  NetworkSpec spec;
  LabelEncoding encoding;
  bool normalize_between = true;
  bool include_first_layer = true;
  std::vector<FfLayerState> layers;

  /// Body blocks of `spec` (the head is not part of an FF network),
  /// initialized from `init_rng`.
  static FfNetwork build(const NetworkSpec& spec, const LabelEncoding& enc,
                         const FfNetworkOptions& opts, Rng& init_rng);

  Index input_len() const { return spec.input_len; }

  /// Input of layer i+1 given the activity of layer i.
  MatrixXd next_input(std::size_t layer, const MatrixXd& activity) const;

  /// Per-column goodness summed over scoring layers for embedded inputs.
  VectorXd total_goodness(const MatrixXd& inputs) const;
};

struct FfTrainOptions {
  int epochs = 250;
  Index batch_size = 128;
  /// Layers whose optimizer runs; empty means all.
  std::vector<bool> trainable;
  /// Evaluate validation accuracy every N epochs (0 disables).
  int validate_every = 1;
};

struct FfEpochLog {
  int epoch = 0;
  std::vector<double> loss;        // per layer, mean over batches
  std::vector<double> mean_g_pos;  // per layer
  std::vector<double> mean_g_neg;  // per layer
  double val_accuracy = -1.0;      // -1 when not evaluated
};

struct FfHistory {
  std::vector<FfEpochLog> epochs;
};

/// Trains every block on its own loss. Each block sees the normalized,
/// detached output of the block below; no gradient crosses a block boundary.
/// Throws NumericError naming the layer and epoch on a non-finite loss.
FfHistory train_ff(FfNetwork& net, const SampleSet& train, const SampleSet& val,
                   const FfTrainOptions& opts, Rng& rng);

struct FfPrediction {
  int label = 1;
  VectorXd scores;  // accumulated goodness per candidate label
};

/// Scores every candidate label and returns the argmax (lowest id on ties).
/// `candidate_order` only changes evaluation order, never the result.
FfPrediction predict_ff(const FfNetwork& net, const Eigen::Ref<const VectorXd>& spectrum,
                        std::span<const int> candidate_order = {});

/// Batched prediction; `scores`, when given, receives [classes x n].
std::vector<int> predict_ff_batch(const FfNetwork& net, const MatrixXd& spectra,
                                  MatrixXd* scores = nullptr);

}  // namespace ffhsi
