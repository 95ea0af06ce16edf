#pragma once

#include <cstdint>

#include "ffhsi/dataset/cube.hpp"

namespace ffhsi {

struct SynthOptions {
  int classes = 3;
  int bands = 20;
  int height = 30;
  int width = 30;
  /// Scale of the class-mean offsets; 0 makes every class identically
  /// distributed.
  double separation = 1.0;
  double noise = 0.05;
  std::uint64_t seed = 1;
};

/// Gaussian class-conditional spectra on an H x W grid. Classes occupy
/// vertical stripes of equal width; every pixel is labeled.
HsiCube make_synthetic_cube(const SynthOptions& opts);

}  // namespace ffhsi
