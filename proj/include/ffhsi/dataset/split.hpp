#pragma once

#include <cstdint>
#include <vector>

#include "ffhsi/dataset/cube.hpp"

namespace ffhsi {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

/// Disjoint pixel index lists covering every labeled pixel.
struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

/// Per class: shuffle, then val and test take max(1, floor(count * ratio))
/// each and train takes the remainder. Background is excluded.
SplitAssignment stratified_split(const HsiCube& cube, std::uint64_t seed,
                                 SplitRatios ratios = {});

}  // namespace ffhsi
