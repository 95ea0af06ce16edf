#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Rows are true classes, columns predicted classes (class c at index c-1).
using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int classes);

struct Metrics {
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
  VectorXd per_class_acc;           // 0 for classes absent from the rows
  std::vector<bool> class_present;  // row sum > 0
};

/// OA = trace / total; AA = mean accuracy over present classes;
/// kappa = (p_o - p_e) / (1 - p_e), taken as 1 when p_e = p_o = 1 and 0 for
/// any other degenerate p_e = 1 case.
Metrics compute_metrics(const ConfusionMatrix& confusion);

struct RunMetrics {
  std::uint64_t seed = 0;
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
  VectorXd per_class_acc;
  std::vector<bool> class_present;
};

/// Confusion matrix, metrics and (after aggregation) the runs behind them.
struct EvalReport {
  ConfusionMatrix confusion;
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
  VectorXd per_class_acc;
  std::vector<bool> class_present;
  int n_runs = 1;
  std::vector<RunMetrics> runs;
};

EvalReport make_report(const ConfusionMatrix& confusion, std::uint64_t seed = 0);

/// Arithmetic means of OA, AA, kappa and per-class accuracy (over runs in
/// which the class was present). Confusion matrices are summed; per-run
/// values are kept. Throws ConfigError on mismatched class counts.
EvalReport aggregate_runs(std::span<const EvalReport> reports);

}  // namespace ffhsi
