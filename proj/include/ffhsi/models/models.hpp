#pragma once

#include <cstdint>

#include "ffhsi/bp/bp.hpp"
#include "ffhsi/ffa/ff.hpp"
#include "ffhsi/nn/network_spec.hpp"

namespace ffhsi {

/// Fully connected body: dense 784, 500, 500 (ReLU), head N.
NetworkSpec dense_spec(Index bands, int classes, LabelScheme scheme);
NetworkSpec dense_spec_for_input(Index input_len, int classes);

/// 1D conv body: conv 64k64, conv 128k36, conv 256k36, maxpool, conv 256k36,
/// maxpool, flatten, dense 100 (ReLU), head N. Throws ConfigError with the
/// size trace when the input is too short for the kernel chain.
NetworkSpec conv_spec(Index bands, int classes, LabelScheme scheme);
NetworkSpec conv_spec_for_input(Index input_len, int classes);

/// Independent random streams derived from one run seed. Network
/// initialization always uses the same stream, so BP and hybrid runs with
/// the same seed start from identical body parameters.
struct RunStreams {
  std::uint64_t seed = 0;
  Rng init() const { return Rng(seed, 1); }
  Rng ff() const { return Rng(seed, 2); }
  Rng bp() const { return Rng(seed, 3); }
};

struct HybridOptions {
  int ff_epochs = 250;
  int bp_epochs = 250;
  FfNetworkOptions ff_network;
  FfTrainOptions ff_train;
  BpTrainOptions bp_train;
  InputMode input_mode = InputMode::neutral;
};

struct HybridResult {
  BpNetwork network;
  FfHistory ff_history;
  BpHistory bp_history;
};

/// FF pretraining of the body followed by end-to-end backprop fine-tuning
/// of all layers with a freshly initialized head. Phase failures are
/// rethrown with a "[ff phase]" or "[bp phase]" prefix.
HybridResult train_hybrid(const NetworkSpec& spec, const LabelEncoding& enc, const SampleSet& train,
                          const SampleSet& val, const HybridOptions& opts, const RunStreams& streams);

/// Plain backprop from the same initialization path as train_hybrid.
BpNetwork build_bp_network(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                           bool normalize_between, const AdamConfig& adam, const RunStreams& streams);

/// Copies FF body parameters into blocks usable by a BpNetwork.
std::vector<Block> body_from_ff(const FfNetwork& net);

}  // namespace ffhsi
