#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffhsi/bp/bp.hpp"
#include "ffhsi/dataset/encoding.hpp"
#include "ffhsi/dataset/split.hpp"

namespace ffhsi {

enum class Method { bp, ffa_dense, ffa_conv, ffa_bp };

std::string to_string(Method m);
Method parse_method(std::string_view name);

/// Everything that determines a run. Defaults are the reference setup
/// (250 epochs, Adam lr 1e-3, 8:1:1 split, three seeds).
struct ExperimentConfig {
  std::string dataset;
  Method method = Method::ffa_bp;
  std::vector<Method> methods{Method::bp, Method::ffa_dense, Method::ffa_conv, Method::ffa_bp};
  /// Architecture for bp and ffa_bp: "dense" or "conv".
  std::string arch = "dense";
  LabelScheme encoding = LabelScheme::one_hot;
  InputMode input_mode = InputMode::neutral;
  double theta = 2.0;
  int goodness_sign = 1;
  int epochs = 250;
  int ff_epochs = 250;
  int bp_epochs = 250;
  long batch_size = 128;
  double lr = 1e-3;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  SplitRatios ratios;
  bool normalize_between = true;
  bool include_first_layer = true;
  bool normalize_bands = true;
  /// "test" (test split only) or "all" (every labeled pixel).
  std::string eval_scope = "test";
  int validate_every = 1;
  std::string out = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Flat "key = value" text accepted back by --config.
  std::string to_text() const;
};

}  // namespace ffhsi
