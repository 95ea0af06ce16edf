#include "ffhsi/io/checkpoint.hpp"

#include "ffhsi/io/binary.hpp"
#include "ffhsi/io/crc32.hpp"

namespace ffhsi {

namespace {

constexpr std::string_view kMagic = "FFCK";

void put_matrix(ByteWriter& out, const MatrixXd& m) {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
  out.put_array(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

MatrixXd get_matrix(ByteReader& in, Index rows, Index cols) {
  const auto r = in.get<std::uint32_t>();
  const auto c = in.get<std::uint32_t>();
  if (r != rows || c != cols) {
    in.fail("parameter block is " + std::to_string(r) + "x" + std::to_string(c) + ", architecture expects " +
            std::to_string(rows) + "x" + std::to_string(cols));
  }
  MatrixXd m(rows, cols);
  in.get_array(std::span<double>(m.data(), static_cast<std::size_t>(m.size())));
  return m;
}

void put_params(ByteWriter& out, const LayerParams& p) {
  put_matrix(out, weights_of(p));
  put_matrix(out, bias_of(p));
}

void get_params(ByteReader& in, LayerParams& p) {
  MatrixXd& w = weights_of(p);
  VectorXd& b = bias_of(p);
  w = get_matrix(in, w.rows(), w.cols());
  b = get_matrix(in, b.rows(), 1);
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  ByteWriter out;
  out.put_raw(kMagic);
  out.put<std::uint32_t>(kCheckpointVersion);
  const bool is_ff = std::holds_alternative<FfNetwork>(ckpt.model);
  out.put<std::uint32_t>(is_ff ? 0 : 1);
  std::visit(
      [&](const auto& net) {
        out.put_string(net.spec.to_text());
        out.put<std::uint32_t>(static_cast<std::uint32_t>(net.encoding.scheme));
      },
      ckpt.model);
  if (is_ff) {
    const auto& net = std::get<FfNetwork>(ckpt.model);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(InputMode::neutral));
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.encoding.classes));
    out.put<std::uint32_t>(ckpt.bands);
    out.put<std::int32_t>(net.layers.empty() ? 1 : net.layers.front().goodness_sign);
    out.put<std::uint8_t>(net.normalize_between);
    out.put<std::uint8_t>(net.include_first_layer);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) out.put<double>(l.theta);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) put_params(out, l.block.params);
  } else {
    const auto& net = std::get<BpNetwork>(ckpt.model);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.input_mode));
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.classes()));
    out.put<std::uint32_t>(ckpt.bands);
    out.put<std::int32_t>(1);
    out.put<std::uint8_t>(net.normalize_between);
    out.put<std::uint8_t>(1);
    out.put<std::uint32_t>(0);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(net.body.size() + 1));
    for (const auto& b : net.body) put_params(out, b.params);
    put_params(out, LayerParams(net.head));
  }
  out.put_string(ckpt.config);
  out.put<std::uint32_t>(crc32(out.bytes()));
  return std::move(out.bytes());
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("checkpoint too short", 0);
  const std::size_t crc_at = bytes.size() - 4;
  {
    ByteReader tail(bytes.subspan(crc_at));
    const auto stored = tail.get<std::uint32_t>();
    const auto actual = crc32(bytes.first(crc_at));
    if (stored != actual) throw FormatError("checkpoint CRC-32 mismatch", crc_at);
  }
  ByteReader in(bytes.first(crc_at));
  if (in.get_raw(kMagic.size()) != kMagic) throw FormatError("bad magic, expected \"FFCK\"", 0);
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version), 4);
  const auto kind = in.get<std::uint32_t>();
  if (kind > 1) in.fail("unknown model kind " + std::to_string(kind));
  NetworkSpec spec;
  try {
    spec = NetworkSpec::parse(in.get_string());
  } catch (const ConfigError& e) {
    in.fail(e.what());
  }
  const auto scheme = in.get<std::uint32_t>();
  if (scheme > 2) in.fail("unknown label scheme " + std::to_string(scheme));
  const auto mode = in.get<std::uint32_t>();
  if (mode > 1) in.fail("unknown input mode " + std::to_string(mode));
  const auto classes = in.get<std::uint32_t>();
  const LabelEncoding enc{static_cast<LabelScheme>(scheme), static_cast<int>(classes)};

  Checkpoint ckpt;
  ckpt.bands = in.get<std::uint32_t>();
  const auto sign = in.get<std::int32_t>();
  const bool normalize = in.get<std::uint8_t>() != 0;
  const bool include_first = in.get<std::uint8_t>() != 0;
  std::vector<double> thetas(in.get<std::uint32_t>());
  for (auto& t : thetas) t = in.get<double>();
  const auto n_blocks = in.get<std::uint32_t>();

  std::vector<Block> blocks = build_blocks(spec);
  const std::size_t expected_blocks = blocks.size() + (kind == 1 ? 1 : 0);
  if (n_blocks != expected_blocks) {
    in.fail("checkpoint has " + std::to_string(n_blocks) + " parameter blocks, architecture needs " +
            std::to_string(expected_blocks));
  }
  for (auto& b : blocks) get_params(in, b.params);

  if (kind == 0) {
    if (thetas.size() != blocks.size()) in.fail("theta count does not match layer count");
    FfNetwork net;
    net.spec = spec;
    net.encoding = enc;
    net.normalize_between = normalize;
    net.include_first_layer = include_first;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      FfLayerState layer;
      layer.theta = thetas[i];
      layer.goodness_sign = sign;
      layer.adam = BlockOptimizer(blocks[i].params, AdamConfig{});
      layer.block = std::move(blocks[i]);
      net.layers.push_back(std::move(layer));
    }
    ckpt.model = std::move(net);
  } else {
    Rng unused(0);
    BpNetwork net = BpNetwork::from_body(spec, enc, static_cast<InputMode>(mode), normalize,
                                         std::move(blocks), AdamConfig{}, unused);
    LayerParams head = net.head;
    get_params(in, head);
    net.head = std::get<DenseParams<double>>(head);
    ckpt.model = std::move(net);
  }
  ckpt.config = in.get_string();
  if (in.remaining() != 0) in.fail("unexpected bytes before checksum");
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace ffhsi
