#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ffhsi/dataset/cube.hpp"

namespace ffhsi {

struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<Rgb> pixels;  // row-major

  Rgb at(std::uint32_t row, std::uint32_t col) const { return pixels[std::size_t(row) * width + col]; }
  friend bool operator==(const Image&, const Image&) = default;
};

struct ClassMaps {
  Image ground_truth;
  Image prediction;
  std::size_t ignored_predictions = 0;  // predictions on background pixels
};

/// Paints labels with palette[class - 1]; label 0 is black.
Image render_labels(std::uint32_t height, std::uint32_t width, std::span<const std::uint16_t> labels,
                    std::span<const Rgb> palette);

/// Ground-truth and prediction maps. `predictions` is a full-scene label map
/// (0 = no prediction); entries on background pixels are ignored and counted
/// in `ignored_predictions`. Uses the cube palette, or the default one when
/// the cube has none.
ClassMaps render_map(const HsiCube& cube, std::span<const std::uint16_t> predictions);

/// Binary PPM (P6).
std::vector<std::uint8_t> encode_ppm(const Image& image);
void write_ppm(const std::string& path, const Image& image);

}  // namespace ffhsi
