#include "ffhsi/dataset/hsic.hpp"

#include "ffhsi/io/binary.hpp"
#include "ffhsi/io/crc32.hpp"

namespace ffhsi {

namespace {

constexpr std::string_view kMagic = "HSIC";

struct Decoded {
  HsiCube cube;
  HsicHeader header;
};

Decoded decode(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (bytes.size() < kMagic.size() || in.get_raw(kMagic.size()) != kMagic) {
    throw FormatError("bad magic, expected \"HSIC\"", 0);
  }
  Decoded d;
  HsicHeader& h = d.header;
  h.file_size = bytes.size();
  h.version = in.get<std::uint32_t>();
  if (h.version != kHsicVersion) {
    throw FormatError("unsupported HSIC version " + std::to_string(h.version), 4);
  }
  h.height = in.get<std::uint32_t>();
  h.width = in.get<std::uint32_t>();
  h.bands = in.get<std::uint32_t>();
  h.classes = in.get<std::uint32_t>();

  const std::uint64_t pixels = std::uint64_t(h.height) * h.width;
  const std::uint64_t expected = 24 + pixels * h.bands * 4 + pixels * 2 + std::uint64_t(h.classes) * 3 + 4;
  if (bytes.size() < expected) {
    throw FormatError("truncated container: header declares " + std::to_string(expected) +
                          " bytes, file has " + std::to_string(bytes.size()),
                      bytes.size());
  }
  if (bytes.size() > expected) {
    throw FormatError("trailing bytes after checksum", expected);
  }

  HsiCube& c = d.cube;
  c.height = h.height;
  c.width = h.width;
  c.bands = h.bands;
  c.class_count = h.classes;
  c.reflectance.resize(pixels * h.bands);
  in.get_array(std::span<float>(c.reflectance));
  c.labels.resize(pixels);
  const std::size_t label_offset = in.offset();
  in.get_array(std::span<std::uint16_t>(c.labels));
  c.palette.resize(h.classes);
  for (auto& rgb : c.palette) {
    rgb.r = in.get<std::uint8_t>();
    rgb.g = in.get<std::uint8_t>();
    rgb.b = in.get<std::uint8_t>();
  }
  const std::size_t crc_offset = in.offset();
  h.crc = in.get<std::uint32_t>();
  const std::uint32_t actual = crc32(bytes.first(crc_offset));
  if (actual != h.crc) {
    throw FormatError("CRC-32 mismatch: stored " + std::to_string(h.crc) + ", computed " +
                          std::to_string(actual),
                      crc_offset);
  }
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    if (c.labels[i] > h.classes) {
      throw FormatError("label " + std::to_string(c.labels[i]) + " exceeds class count",
                        label_offset + 2 * i);
    }
  }
  c.validate();
  return d;
}

}  // namespace

std::vector<std::uint8_t> encode_cube(const HsiCube& cube) {
  cube.validate();
  ByteWriter out;
  out.put_raw(kMagic);
  out.put<std::uint32_t>(kHsicVersion);
  out.put<std::uint32_t>(cube.height);
  out.put<std::uint32_t>(cube.width);
  out.put<std::uint32_t>(cube.bands);
  out.put<std::uint32_t>(cube.class_count);
  out.put_array(std::span<const float>(cube.reflectance));
  out.put_array(std::span<const std::uint16_t>(cube.labels));
  for (const auto& rgb : cube.palette) {
    out.put(rgb.r);
    out.put(rgb.g);
    out.put(rgb.b);
  }
  out.put<std::uint32_t>(crc32(out.bytes()));
  return std::move(out.bytes());
}

HsiCube decode_cube(std::span<const std::uint8_t> bytes) { return decode(bytes).cube; }

void save_cube(const std::string& path, const HsiCube& cube) { write_file(path, encode_cube(cube)); }

HsiCube load_cube(const std::string& path) { return decode_cube(read_file(path)); }

HsicHeader inspect_cube(const std::string& path) { return decode(read_file(path)).header; }

}  // namespace ffhsi
