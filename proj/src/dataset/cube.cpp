#include "ffhsi/dataset/cube.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ffhsi/tensor/errors.hpp"

namespace ffhsi {

std::vector<std::size_t> HsiCube::labeled_pixels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> HsiCube::class_histogram() const {
  std::vector<std::size_t> h(class_count, 0);
  for (auto l : labels) {
    if (l != 0 && l <= class_count) ++h[l - 1];
  }
  return h;
}

void HsiCube::validate() const {
  if (reflectance.size() != pixel_count() * bands) {
    throw ConfigError("cube reflectance has " + std::to_string(reflectance.size()) +
                      " values, expected H*W*B = " + std::to_string(pixel_count() * bands));
  }
  if (labels.size() != pixel_count()) {
    throw ConfigError("cube label map has " + std::to_string(labels.size()) +
                      " entries, expected " + std::to_string(pixel_count()));
  }
  if (palette.size() != class_count) {
    throw ConfigError("palette has " + std::to_string(palette.size()) + " colors for " +
                      std::to_string(class_count) + " classes");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > class_count) {
      throw ConfigError("pixel " + std::to_string(i) + " has label " + std::to_string(labels[i]) +
                        " outside [1, " + std::to_string(class_count) + "]");
    }
  }
  for (float v : reflectance) {
    if (!std::isfinite(v)) throw ConfigError("cube reflectance contains a non-finite value");
  }
}

std::vector<Rgb> default_palette(std::uint32_t classes) {
  static constexpr std::array<Rgb, 16> kBase{{
      {230, 25, 75},   {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
      {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
      {210, 245, 60},  {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
      {170, 110, 40},  {255, 250, 200}, {128, 0, 0},    {170, 255, 195},
  }};
  std::vector<Rgb> out;
  out.reserve(classes);
  for (std::uint32_t c = 0; c < classes; ++c) {
    Rgb base = kBase[c % kBase.size()];
    const unsigned shade = c / kBase.size();
    auto darken = [shade](std::uint8_t v) {
      return static_cast<std::uint8_t>(v >> std::min(shade, 7u));
    };
    out.push_back({darken(base.r), darken(base.g), darken(base.b)});
  }
  return out;
}

HsiCube normalize_bands(HsiCube cube) {
  const std::size_t pixels = cube.pixel_count();
  for (std::uint32_t b = 0; b < cube.bands; ++b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t p = 0; p < pixels; ++p) {
      const double v = cube.reflectance[p * cube.bands + b];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double range = hi - lo;
    for (std::size_t p = 0; p < pixels; ++p) {
      float& v = cube.reflectance[p * cube.bands + b];
      v = range > 0.0 ? static_cast<float>((v - lo) / range) : 0.0f;
    }
  }
  return cube;
}

}  // namespace ffhsi
