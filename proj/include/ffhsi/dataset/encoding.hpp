#pragma once

#include <string>
#include <string_view>

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

enum class LabelScheme { one_hot, binary, decimal };

std::string to_string(LabelScheme scheme);
LabelScheme parse_label_scheme(std::string_view name);

/// Label scheme bound to a class count.
struct LabelEncoding {
  LabelScheme scheme = LabelScheme::one_hot;
  int classes = 0;

  /// one_hot: N; binary: ceil(log2 N); decimal: 1.
  Index code_len() const;

  /// Code for a 1-based label.
  VectorXd encode(int label) const;
  int decode(const Eigen::Ref<const VectorXd>& code) const;

  /// Label-free code used for inputs that carry no class hypothesis.
  VectorXd neutral() const;
};

}  // namespace ffhsi
