#include "ffhsi/models/models.hpp"

#include <stdexcept>

namespace ffhsi {

namespace {

// Runs `f`, prefixing any error message with `tag` while keeping its type.
template <class F>
auto tagged(const std::string& tag, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(tag + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(tag + e.what());
  }
}

}  // namespace

NetworkSpec dense_spec_for_input(Index input_len, int classes) {
  NetworkSpec spec;
  spec.input_len = input_len;
  spec.stages = {Stage::dense(784), Stage::dense(500), Stage::dense(500)};
  spec.head_units = classes;
  spec.shape_trace();
  return spec;
}

NetworkSpec dense_spec(Index bands, int classes, LabelScheme scheme) {
  if (classes < 2) throw ConfigError("dense_spec needs at least 2 classes");
  return dense_spec_for_input(LabelEncoding{scheme, classes}.code_len() + bands, classes);
}

NetworkSpec conv_spec_for_input(Index input_len, int classes) {
  NetworkSpec spec;
  spec.input_len = input_len;
  spec.stages = {Stage::conv(64, 64),  Stage::conv(128, 36), Stage::conv(256, 36), Stage::maxpool(),
                 Stage::conv(256, 36), Stage::maxpool(),     Stage::flatten(),     Stage::dense(100)};
  spec.head_units = classes;
  spec.shape_trace();
  return spec;
}

NetworkSpec conv_spec(Index bands, int classes, LabelScheme scheme) {
  if (classes < 2) throw ConfigError("conv_spec needs at least 2 classes");
  return conv_spec_for_input(LabelEncoding{scheme, classes}.code_len() + bands, classes);
}

BpNetwork build_bp_network(const NetworkSpec& spec, const LabelEncoding& enc, InputMode mode,
                           bool normalize_between, const AdamConfig& adam, const RunStreams& streams) {
  Rng init = streams.init();
  return BpNetwork::build(spec, enc, mode, normalize_between, adam, init);
}

std::vector<Block> body_from_ff(const FfNetwork& net) {
  std::vector<Block> body;
  body.reserve(net.layers.size());
  for (const auto& l : net.layers) body.push_back(l.block);
  return body;
}

HybridResult train_hybrid(const NetworkSpec& spec, const LabelEncoding& enc, const SampleSet& train,
                          const SampleSet& val, const HybridOptions& opts, const RunStreams& streams) {
  if (opts.ff_epochs < 0 || opts.bp_epochs < 0) throw ConfigError("epoch counts must be nonnegative");
  if (opts.input_mode != InputMode::neutral) {
    throw ConfigError("hybrid training needs label-embedded inputs (input_mode = neutral)");
  }
  Rng init = streams.init();
  FfNetwork ff;
  FfHistory ff_history = tagged("[ff phase] ", [&] {
    ff = FfNetwork::build(spec, enc, opts.ff_network, init);
    FfTrainOptions ff_opts = opts.ff_train;
    ff_opts.epochs = opts.ff_epochs;
    Rng ff_rng = streams.ff();
    return train_ff(ff, train, val, ff_opts, ff_rng);
  });
  return tagged("[bp phase] ", [&] {
    BpNetwork bp = BpNetwork::from_body(spec, enc, opts.input_mode, opts.ff_network.normalize_between,
                                        body_from_ff(ff), opts.ff_network.adam, init);
    BpTrainOptions bp_opts = opts.bp_train;
    bp_opts.epochs = opts.bp_epochs;
    Rng bp_rng = streams.bp();
    BpHistory bp_history = train_bp(bp, train, val, bp_opts, bp_rng);
    return HybridResult{std::move(bp), std::move(ff_history), std::move(bp_history)};
  });
}

}  // namespace ffhsi
