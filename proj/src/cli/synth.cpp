#include "ffhsi/cli/synth.hpp"

#include <cmath>
#include <numbers>

#include "ffhsi/tensor/errors.hpp"
#include "ffhsi/tensor/random.hpp"
#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

HsiCube make_synthetic_cube(const SynthOptions& o) {
  if (o.classes < 2) throw ConfigError("classes: at least 2 are required");
  if (o.bands < 1 || o.height < 1 || o.width < o.classes) {
    throw ConfigError("bands/height/width: grid must be nonempty and at least one column per class");
  }
  Rng rng(o.seed, 0x5717);
  VectorXd base(o.bands);
  for (int b = 0; b < o.bands; ++b) base[b] = 0.5 + 0.25 * std::sin(2.0 * std::numbers::pi * b / o.bands);
  std::vector<VectorXd> means;
  for (int c = 0; c < o.classes; ++c) {
    VectorXd dir(o.bands);
    for (int b = 0; b < o.bands; ++b) dir[b] = rng.normal();
    means.push_back(base + 0.3 * o.separation * dir.normalized());
  }

  HsiCube cube;
  cube.height = static_cast<std::uint32_t>(o.height);
  cube.width = static_cast<std::uint32_t>(o.width);
  cube.bands = static_cast<std::uint32_t>(o.bands);
  cube.class_count = static_cast<std::uint32_t>(o.classes);
  cube.palette = default_palette(cube.class_count);
  cube.reflectance.resize(cube.pixel_count() * cube.bands);
  cube.labels.resize(cube.pixel_count());
  for (int r = 0; r < o.height; ++r) {
    for (int col = 0; col < o.width; ++col) {
      const std::size_t p = std::size_t(r) * o.width + col;
      const int c = col * o.classes / o.width;
      cube.labels[p] = static_cast<std::uint16_t>(c + 1);
      for (int b = 0; b < o.bands; ++b) {
        cube.reflectance[p * o.bands + b] = static_cast<float>(means[c][b] + o.noise * rng.normal());
      }
    }
  }
  return cube;
}

}  // namespace ffhsi
