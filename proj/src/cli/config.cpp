#include "ffhsi/cli/config.hpp"

#include <cmath>
#include <sstream>

namespace ffhsi {

std::string to_string(Method m) {
  switch (m) {
    case Method::bp: return "bp";
    case Method::ffa_dense: return "ffa_dense";
    case Method::ffa_conv: return "ffa_conv";
    case Method::ffa_bp: return "ffa_bp";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "bp") return Method::bp;
  if (name == "ffa_dense") return Method::ffa_dense;
  if (name == "ffa_conv") return Method::ffa_conv;
  if (name == "ffa_bp") return Method::ffa_bp;
  throw ConfigError("method: unknown value \"" + std::string(name) +
                    "\" (expected bp, ffa_dense, ffa_conv or ffa_bp)");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
  };
  if (arch != "dense" && arch != "conv") fail("arch", "expected dense or conv");
  if (goodness_sign != 1 && goodness_sign != -1) fail("goodness_sign", "expected 1 or -1");
  if (goodness_sign == 1 && !(theta > 0.0)) fail("theta", "must be positive for sum-of-squares goodness");
  if (!std::isfinite(theta)) fail("theta", "must be finite");
  if (epochs < 0) fail("epochs", "must be nonnegative");
  if (ff_epochs < 0) fail("ff_epochs", "must be nonnegative");
  if (bp_epochs < 0) fail("bp_epochs", "must be nonnegative");
  if (batch_size <= 0) fail("batch_size", "must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) fail("lr", "must be a nonnegative number");
  if (seeds.empty()) fail("seeds", "at least one seed is required");
  if (methods.empty()) fail("methods", "at least one method is required");
  if (ratios.train <= 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    fail("train_ratio/val_ratio/test_ratio", "must be nonnegative and sum to 1");
  }
  if (eval_scope != "test" && eval_scope != "all") fail("eval_scope", "expected test or all");
  if (validate_every < 0) fail("validate_every", "must be nonnegative");
  if (input_mode == InputMode::raw && (method == Method::ffa_dense || method == Method::ffa_conv || method == Method::ffa_bp)) {
    fail("input_mode", "raw input is only available for method bp");
  }
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out.precision(17);
  auto join = [](const auto& items, auto fmt) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + fmt(items[i]);
    return s + "]";
  };
  out << "dataset = \"" << dataset << "\"\n"
      << "method = \"" << to_string(method) << "\"\n"
      << "methods = " << join(methods, [](Method m) { return "\"" + to_string(m) + "\""; }) << "\n"
      << "arch = \"" << arch << "\"\n"
      << "encoding = \"" << to_string(encoding) << "\"\n"
      << "input_mode = \"" << to_string(input_mode) << "\"\n"
      << "theta = " << theta << "\n"
      << "goodness_sign = " << goodness_sign << "\n"
      << "epochs = " << epochs << "\n"
      << "ff_epochs = " << ff_epochs << "\n"
      << "bp_epochs = " << bp_epochs << "\n"
      << "batch_size = " << batch_size << "\n"
      << "lr = " << lr << "\n"
      << "seeds = " << join(seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n"
      << "train_ratio = " << ratios.train << "\n"
      << "val_ratio = " << ratios.val << "\n"
      << "test_ratio = " << ratios.test << "\n"
      << "normalize_between = " << (normalize_between ? "true" : "false") << "\n"
      << "include_first_layer = " << (include_first_layer ? "true" : "false") << "\n"
      << "normalize_bands = " << (normalize_bands ? "true" : "false") << "\n"
      << "eval_scope = \"" << eval_scope << "\"\n"
      << "validate_every = " << validate_every << "\n";
  return out.str();
}

}  // namespace ffhsi
