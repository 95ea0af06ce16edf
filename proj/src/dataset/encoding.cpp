#include "ffhsi/dataset/encoding.hpp"

#include <cmath>

namespace ffhsi {

std::string to_string(LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::one_hot: return "one_hot";
    case LabelScheme::binary: return "binary";
    case LabelScheme::decimal: return "decimal";
  }
  return "?";
}

LabelScheme parse_label_scheme(std::string_view name) {
  if (name == "one_hot") return LabelScheme::one_hot;
  if (name == "binary") return LabelScheme::binary;
  if (name == "decimal") return LabelScheme::decimal;
  throw ConfigError("unknown label encoding \"" + std::string(name) +
                    "\" (expected one_hot, binary or decimal)");
}

namespace {

Index bit_count(int classes) {
  Index bits = 0;
  while ((Index(1) << bits) < classes) ++bits;
  return bits;
}

}  // namespace

Index LabelEncoding::code_len() const {
  switch (scheme) {
    case LabelScheme::one_hot: return classes;
    case LabelScheme::binary: return bit_count(classes);
    case LabelScheme::decimal: return 1;
  }
  return 0;
}

VectorXd LabelEncoding::encode(int label) const {
  if (label < 1 || label > classes) {
    throw ConfigError("label " + std::to_string(label) + " outside [1, " +
                      std::to_string(classes) + "]");
  }
  VectorXd code = VectorXd::Zero(code_len());
  switch (scheme) {
    case LabelScheme::one_hot:
      code[label - 1] = 1.0;
      break;
    case LabelScheme::binary: {
      const Index bits = code.size();
      for (Index i = 0; i < bits; ++i) code[i] = ((label - 1) >> (bits - 1 - i)) & 1;
      break;
    }
    case LabelScheme::decimal:
      code[0] = classes > 1 ? double(label - 1) / double(classes - 1) : 0.0;
      break;
  }
  return code;
}

int LabelEncoding::decode(const Eigen::Ref<const VectorXd>& code) const {
  require_dim(code.size() == code_len(), "decode: code length mismatch");
  switch (scheme) {
    case LabelScheme::one_hot: {
      Index best = 0;
      code.maxCoeff(&best);
      return static_cast<int>(best) + 1;
    }
    case LabelScheme::binary: {
      int value = 0;
      for (Index i = 0; i < code.size(); ++i) value = (value << 1) | (code[i] >= 0.5 ? 1 : 0);
      return value + 1;
    }
    case LabelScheme::decimal:
      if (classes <= 1) return 1;
      return static_cast<int>(std::lround(code[0] * (classes - 1))) + 1;
  }
  return 0;
}

VectorXd LabelEncoding::neutral() const {
  switch (scheme) {
    case LabelScheme::one_hot: return VectorXd::Constant(code_len(), 1.0 / classes);
    case LabelScheme::binary:
    case LabelScheme::decimal: return VectorXd::Constant(code_len(), 0.5);
  }
  return {};
}

}  // namespace ffhsi
