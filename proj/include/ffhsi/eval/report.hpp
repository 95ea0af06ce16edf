#pragma once

#include <json.hpp>

#include "ffhsi/eval/metrics.hpp"

namespace ffhsi {

/// Confusion matrix, aggregate metrics and per-run values. Classes absent
/// from the evaluated pixels report a null accuracy.
nlohmann::json report_to_json(const EvalReport& report);

}  // namespace ffhsi
