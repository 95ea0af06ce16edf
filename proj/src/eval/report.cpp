#include "ffhsi/eval/report.hpp"

namespace ffhsi {

namespace {

nlohmann::json per_class(const VectorXd& acc, const std::vector<bool>& present) {
  nlohmann::json out = nlohmann::json::array();
  for (Index k = 0; k < acc.size(); ++k) {
    out.push_back(present[static_cast<std::size_t>(k)] ? nlohmann::json(acc[k]) : nlohmann::json(nullptr));
  }
  return out;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json confusion = nlohmann::json::array();
  for (Index i = 0; i < r.confusion.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < r.confusion.cols(); ++j) row.push_back(r.confusion(i, j));
    confusion.push_back(std::move(row));
  }
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"seed", run.seed},
                    {"oa", run.oa},
                    {"aa", run.aa},
                    {"kappa", run.kappa},
                    {"per_class_accuracy", per_class(run.per_class_acc, run.class_present)}});
  }
  return {{"oa", r.oa},
          {"aa", r.aa},
          {"kappa", r.kappa},
          {"per_class_accuracy", per_class(r.per_class_acc, r.class_present)},
          {"n_runs", r.n_runs},
          {"confusion", std::move(confusion)},
          {"runs", std::move(runs)}};
}

}  // namespace ffhsi
