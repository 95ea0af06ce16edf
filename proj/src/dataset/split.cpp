#include "ffhsi/dataset/split.hpp"

#include <cmath>

#include "ffhsi/tensor/errors.hpp"
#include "ffhsi/tensor/random.hpp"

namespace ffhsi {

SplitAssignment stratified_split(const HsiCube& cube, std::uint64_t seed, SplitRatios ratios) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be nonnegative and sum to 1");
  }
  std::vector<std::vector<std::size_t>> by_class(cube.class_count);
  for (std::size_t p = 0; p < cube.labels.size(); ++p) {
    if (cube.labels[p] != 0) by_class[cube.labels[p] - 1].push_back(p);
  }

  SplitAssignment out;
  out.seed = seed;
  out.ratios = ratios;
  Rng rng(seed, 0x5eed5);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& pixels = by_class[c];
    if (pixels.empty()) continue;
    if (pixels.size() < 3) {
      throw ConfigError("class " + std::to_string(c + 1) + " has only " +
                        std::to_string(pixels.size()) + " labeled pixels; at least 3 are needed");
    }
    rng.shuffle(pixels);
    const auto take = [&](double r) {
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(pixels.size() * r)));
    };
    const std::size_t n_val = take(ratios.val);
    const std::size_t n_test = take(ratios.test);
    const std::size_t n_train = pixels.size() - n_val - n_test;
    out.train.insert(out.train.end(), pixels.begin(), pixels.begin() + n_train);
    out.val.insert(out.val.end(), pixels.begin() + n_train, pixels.begin() + n_train + n_val);
    out.test.insert(out.test.end(), pixels.begin() + n_train + n_val, pixels.end());
  }
  return out;
}

}  // namespace ffhsi
