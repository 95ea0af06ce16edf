#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ffhsi {

/// CRC-32 (IEEE 802.3, as in zlib/PNG) of a byte range.
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace ffhsi
