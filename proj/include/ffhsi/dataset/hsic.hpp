#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ffhsi/dataset/cube.hpp"

namespace ffhsi {

/// HSIC v1 container, little-endian:
///   "HSIC" | u32 version=1 | u32 H | u32 W | u32 B | u32 N
///   | f32[H*W*B] reflectance | u16[H*W] labels | u8[N*3] palette
///   | u32 CRC-32 over every preceding byte (magic included).
inline constexpr std::uint32_t kHsicVersion = 1;

struct HsicHeader {
  std::uint32_t version = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t bands = 0;
  std::uint32_t classes = 0;
  std::uint32_t crc = 0;
  std::uint64_t file_size = 0;
};

std::vector<std::uint8_t> encode_cube(const HsiCube& cube);
HsiCube decode_cube(std::span<const std::uint8_t> bytes);

void save_cube(const std::string& path, const HsiCube& cube);
HsiCube load_cube(const std::string& path);

/// Header fields plus the stored checksum, after full validation.
HsicHeader inspect_cube(const std::string& path);

}  // namespace ffhsi
