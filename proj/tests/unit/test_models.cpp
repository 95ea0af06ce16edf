#include <gtest/gtest.h>

#include "ffhsi/cli/synth.hpp"
#include "ffhsi/dataset/split.hpp"
#include "ffhsi/models/models.hpp"
#include "test_util.hpp"

namespace ffhsi {
namespace {

TEST(DenseSpec, InputLengthAndWidths) {
  EXPECT_EQ(dense_spec(204, 16, LabelScheme::one_hot).input_len, 220);
  EXPECT_EQ(dense_spec(200, 16, LabelScheme::one_hot).input_len, 216);
  EXPECT_EQ(dense_spec(204, 16, LabelScheme::binary).input_len, 208);
  EXPECT_EQ(dense_spec(204, 16, LabelScheme::decimal).input_len, 205);
  const NetworkSpec s = dense_spec(204, 16, LabelScheme::one_hot);
  EXPECT_EQ(s.hidden_widths(), (std::vector<Index>{784, 500, 500}));
  EXPECT_EQ(s.head_units, 16);
}

TEST(ConvSpec, EightStagesAndTraceFor220) {
  const NetworkSpec s = conv_spec(204, 16, LabelScheme::one_hot);
  EXPECT_EQ(s.stages.size(), 8u);
  const auto trace = s.shape_trace();
  ASSERT_EQ(trace.size(), 9u);
  const std::vector<Shape> expected{{1, 220}, {64, 157}, {128, 122}, {256, 87}, {256, 43},
                                    {256, 8}, {256, 4},  {1, 1024},  {1, 100}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(trace[i], expected[i]) << "after stage " << i << ": " << trace[i].channels << "x" << trace[i].length;
  }
}

TEST(ConvSpec, TooShortInputNamesStageAndSizes) {
  try {
    conv_spec_for_input(99, 16);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    // 99 -> 36 -> 1 -> 1 - 35 at the third stage.
    EXPECT_NE(msg.find("stage 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("36"), std::string::npos) << msg;
  }
}

// Independent length arithmetic for the conv body.
Index conv_flat_size(Index len) {
  len = len - 63;
  len = len - 35;
  len = len - 35;
  len = len / 2;
  len = len - 35;
  len = len / 2;
  return len;
}

TEST(ConvSpec, SizeDerivationMatchesRuntimeShapes) {
  Rng rng(1);
  for (Index len = 100; len <= 300; ++len) {
    SCOPED_TRACE("input_len " + std::to_string(len));
    const Index tail = conv_flat_size(len);
    if (len - 63 < 1 || len - 98 < 1 || len - 133 < 1 || tail < 1) {
      EXPECT_THROW(conv_spec_for_input(len, 4), ConfigError);
      continue;
    }
    EXPECT_GE(len, 207);
    const NetworkSpec spec = conv_spec_for_input(len, 4);
    const auto trace = spec.shape_trace();
    EXPECT_EQ(trace[7].size(), 256 * tail);
    // Run the real layers on a random input only at a sample of lengths;
    // the forward pass is costly and the trace above covers every length.
    if (len % 10 != 7 && len != 300) continue;
    auto blocks = build_blocks(spec);
    init_blocks(blocks, rng);
    MatrixXd x = test::random_matrix(rng, len, 1);
    std::size_t stage = 0;
    for (const auto& b : blocks) {
      ASSERT_EQ(x.rows(), b.in_shape.size());
      const MatrixXd a = b.activity(x);
      ++stage;
      EXPECT_EQ(a.rows(), trace[stage].size());
      x = b.tail_forward(a, nullptr);
      stage += b.tail.size();
      EXPECT_EQ(x.rows(), trace[stage].size());
    }
    EXPECT_EQ(x.rows(), 100);
  }
}

TEST(NetworkSpecText, RoundTrip) {
  for (const NetworkSpec& s : {dense_spec(204, 16, LabelScheme::one_hot), conv_spec(210, 16, LabelScheme::binary)}) {
    EXPECT_EQ(NetworkSpec::parse(s.to_text()), s) << s.to_text();
  }
  EXPECT_EQ(dense_spec(204, 16, LabelScheme::one_hot).to_text(),
            "input 220; dense 784 relu; dense 500 relu; dense 500 relu; head 16");
  EXPECT_THROW(NetworkSpec::parse("input 10; bogus 3; head 2"), ConfigError);
}

TEST(NetworkSpecText, StandaloneReluFoldsIntoBlock) {
  const NetworkSpec s = NetworkSpec::parse("input 10; dense 4; relu; dense 3 relu; head 2");
  const auto blocks = build_blocks(s);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_TRUE(blocks[0].relu);
}

TEST(Blocks, HeUniformInitWithinLimitAndZeroBias) {
  Rng rng(2);
  auto blocks = build_blocks(dense_spec(20, 3, LabelScheme::one_hot));
  init_blocks(blocks, rng);
  const double limit = std::sqrt(6.0 / 23.0);
  EXPECT_LE(weights_of(blocks[0].params).cwiseAbs().maxCoeff(), limit);
  EXPECT_GT(weights_of(blocks[0].params).cwiseAbs().maxCoeff(), 0.9 * limit);
  EXPECT_TRUE(bias_of(blocks[0].params).isZero(0));
}

// Shared synthetic fixture: 3 classes, 20 bands, 300 pixels.
struct Synthetic {
  SampleSet train, val, test;
  Synthetic() {
    SynthOptions so;
    so.height = 15;
    so.width = 20;
    const HsiCube cube = normalize_bands(make_synthetic_cube(so));
    const auto split = stratified_split(cube, 1);
    train = gather_samples(cube, split.train);
    val = gather_samples(cube, split.val);
    test = gather_samples(cube, split.test);
  }
};

const Synthetic& synthetic() {
  static const Synthetic s;
  return s;
}

const LabelEncoding kEnc{LabelScheme::one_hot, 3};

double test_accuracy(const std::vector<int>& pred) {
  const auto& truth = synthetic().test.labels;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += pred[i] == truth[i];
  return double(hits) / double(truth.size());
}

TEST(Hybrid, ZeroFfEpochsEqualsPlainBackprop) {
  const auto& d = synthetic();
  const NetworkSpec spec = dense_spec_for_input(23, 3);
  const RunStreams streams{7};
  HybridOptions opts;
  opts.ff_epochs = 0;
  opts.bp_epochs = 3;
  const HybridResult h = train_hybrid(spec, kEnc, d.train, d.val, opts, streams);

  BpNetwork bp = build_bp_network(spec, kEnc, InputMode::neutral, true, AdamConfig{}, streams);
  BpTrainOptions bo;
  bo.epochs = 3;
  Rng rng = streams.bp();
  train_bp(bp, d.train, d.val, bo, rng);
  EXPECT_EQ(pack_parameters(h.network), pack_parameters(bp));
}

TEST(Hybrid, ZeroBpEpochsCopiesFfBodyExactly) {
  const auto& d = synthetic();
  const NetworkSpec spec = NetworkSpec{23, {Stage::dense(16), Stage::dense(8)}, 3};
  const RunStreams streams{8};
  HybridOptions opts;
  opts.ff_epochs = 3;
  opts.bp_epochs = 0;
  const HybridResult h = train_hybrid(spec, kEnc, d.train, d.val, opts, streams);

  Rng init = streams.init();
  FfNetwork ff = FfNetwork::build(spec, kEnc, {}, init);
  FfTrainOptions fo;
  fo.epochs = 3;
  Rng rng = streams.ff();
  train_ff(ff, d.train, d.val, fo, rng);
  ASSERT_EQ(h.network.body.size(), ff.layers.size());
  for (std::size_t l = 0; l < ff.layers.size(); ++l) {
    EXPECT_EQ(weights_of(h.network.body[l].params), weights_of(ff.layers[l].block.params));
    EXPECT_EQ(bias_of(h.network.body[l].params), bias_of(ff.layers[l].block.params));
  }
  EXPECT_EQ(h.ff_history.epochs.size(), 3u);
  EXPECT_TRUE(h.bp_history.epochs.empty());
}

TEST(Hybrid, BodyCopyRoundTripsBitExactly) {
  Rng init(9);
  const NetworkSpec spec = conv_spec_for_input(220, 4);
  const FfNetwork ff = FfNetwork::build(spec, LabelEncoding{LabelScheme::one_hot, 4}, {}, init);
  const auto body = body_from_ff(ff);
  std::vector<LayerParams> a, b;
  for (const auto& l : ff.layers) a.push_back(l.block.params);
  for (const auto& blk : body) b.push_back(blk.params);
  EXPECT_EQ(pack_parameters(a), pack_parameters(b));
}

TEST(Hybrid, RejectsRawInputAndTagsPhaseErrors) {
  const auto& d = synthetic();
  HybridOptions opts;
  opts.ff_epochs = 1;
  opts.bp_epochs = 1;
  opts.input_mode = InputMode::raw;
  EXPECT_THROW(train_hybrid(dense_spec_for_input(23, 3), kEnc, d.train, d.val, opts, RunStreams{1}), ConfigError);

  opts.input_mode = InputMode::neutral;
  try {
    train_hybrid(dense_spec_for_input(30, 3), kEnc, d.train, d.val, opts, RunStreams{1});
    FAIL() << "expected an input-length error";
  } catch (const DimensionError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("[ff phase]", 0), 0u) << e.what();
  }
}

TEST(Hybrid, PretrainedStartNoWorseThanHeadOnlyRandomBody) {
  const auto& d = synthetic();
  const NetworkSpec spec = dense_spec_for_input(23, 3);
  const RunStreams streams{3};
  HybridOptions opts;
  opts.ff_epochs = 20;
  opts.bp_epochs = 1;
  opts.ff_train.validate_every = 0;
  const HybridResult h = train_hybrid(spec, kEnc, d.train, d.val, opts, streams);

  BpNetwork random_body = build_bp_network(spec, kEnc, InputMode::neutral, true, AdamConfig{}, streams);
  BpTrainOptions bo;
  bo.epochs = 1;
  bo.train_body = false;
  Rng rng = streams.bp();
  const BpHistory head_only = train_bp(random_body, d.train, d.val, bo, rng);
  EXPECT_LE(h.bp_history.epochs.front().train_loss, head_only.epochs.front().train_loss);
}

TEST(Hybrid, SyntheticThreeWayComparison) {
  const auto& d = synthetic();
  const NetworkSpec spec = dense_spec_for_input(23, 3);
  const RunStreams streams{1};

  Rng init = streams.init();
  FfNetwork ff = FfNetwork::build(spec, kEnc, {}, init);
  FfTrainOptions fo;
  fo.epochs = 100;
  fo.validate_every = 0;
  Rng ff_rng = streams.ff();
  train_ff(ff, d.train, d.val, fo, ff_rng);
  const double ff_acc = test_accuracy(predict_ff_batch(ff, d.test.spectra));

  BpNetwork bp = build_bp_network(spec, kEnc, InputMode::neutral, true, AdamConfig{}, streams);
  BpTrainOptions bo;
  bo.epochs = 100;
  bo.validate_every = 0;
  Rng bp_rng = streams.bp();
  train_bp(bp, d.train, d.val, bo, bp_rng);
  const double bp_acc = test_accuracy(predict_bp_batch(bp, d.test.spectra));

  HybridOptions ho;
  ho.ff_epochs = 100;
  ho.bp_epochs = 100;
  ho.ff_train.validate_every = 0;
  ho.bp_train.validate_every = 0;
  const HybridResult h = train_hybrid(spec, kEnc, d.train, d.val, ho, streams);
  const double hy_acc = test_accuracy(predict_bp_batch(h.network, d.test.spectra));

  EXPECT_GE(hy_acc, ff_acc);
  EXPECT_GE(hy_acc, bp_acc - 0.02);
  EXPECT_GE(hy_acc, 0.95);
}

}  // namespace
}  // namespace ffhsi
