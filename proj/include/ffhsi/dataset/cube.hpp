#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ffhsi {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Hyperspectral cube: reflectance is [H x W x B], pixel-major with bands
/// contiguous per pixel. Label 0 marks background.
struct HsiCube {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t bands = 0;
  std::uint32_t class_count = 0;
  std::vector<float> reflectance;
  std::vector<std::uint16_t> labels;
  std::vector<std::string> class_names;
  std::vector<Rgb> palette;

  std::size_t pixel_count() const { return std::size_t(height) * width; }

  std::span<const float> spectrum(std::size_t pixel) const {
    return {reflectance.data() + pixel * bands, bands};
  }

  /// Indices of pixels with a nonzero label, in raster order.
  std::vector<std::size_t> labeled_pixels() const;

  /// Labeled-pixel count per class; index 0 is class 1.
  std::vector<std::size_t> class_histogram() const;

  /// Throws ConfigError on size mismatch, out-of-range labels or non-finite
  /// reflectance.
  void validate() const;
};

/// Fixed 16-color table, extended cyclically with darker shades past 16.
std::vector<Rgb> default_palette(std::uint32_t classes);

/// Per-band min-max scaling to [0, 1]; constant bands map to 0.
HsiCube normalize_bands(HsiCube cube);

}  // namespace ffhsi
