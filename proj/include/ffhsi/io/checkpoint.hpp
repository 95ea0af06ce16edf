#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffhsi/bp/bp.hpp"
#include "ffhsi/ffa/ff.hpp"

namespace ffhsi {

/// Model checkpoint, little-endian:
///   "FFCK" | u32 version=1 | u32 kind (0 = FF body, 1 = BP body + head)
///   | string architecture (canonical NetworkSpec text) | u32 label scheme
///   | u32 input mode | u32 classes | u32 bands | i32 goodness sign
///   | u8 normalize_between | u8 include_first_layer
///   | u32 n_thetas | f64 theta...
///   | u32 n_blocks | per block: u32 rows | u32 cols | f64[rows*cols] column-major
///   | string config echo | u32 CRC-32 over every preceding byte.
/// Strings are u32 length + bytes. Optimizer state is not stored.
inline constexpr std::uint32_t kCheckpointVersion = 1;

using Model = std::variant<FfNetwork, BpNetwork>;

struct Checkpoint {
  Model model;
  std::uint32_t bands = 0;
  std::string config;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ffhsi
