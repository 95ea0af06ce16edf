#include "ffhsi/eval/metrics.hpp"

namespace ffhsi {

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int classes) {
  require_dim(truth.size() == predicted.size(), "confusion_matrix: length mismatch");
  ConfusionMatrix m = ConfusionMatrix::Zero(classes, classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    require_dim(truth[i] >= 1 && truth[i] <= classes && predicted[i] >= 1 && predicted[i] <= classes,
                "confusion_matrix: label out of range");
    ++m(truth[i] - 1, predicted[i] - 1);
  }
  return m;
}

Metrics compute_metrics(const ConfusionMatrix& confusion) {
  require_dim(confusion.rows() == confusion.cols() && confusion.rows() > 0,
              "compute_metrics: confusion matrix must be square and nonempty");
  const MatrixXd c = confusion.cast<double>();
  const double total = c.sum();
  if (total <= 0.0) throw DimensionError("compute_metrics: confusion matrix has no samples");

  const Index n = c.rows();
  const VectorXd rows = c.rowwise().sum();
  const VectorXd cols = c.colwise().sum().transpose();
  Metrics m;
  m.oa = c.trace() / total;
  m.per_class_acc = VectorXd::Zero(n);
  m.class_present.assign(static_cast<std::size_t>(n), false);
  double acc_sum = 0.0;
  int present = 0;
  for (Index k = 0; k < n; ++k) {
    if (rows[k] > 0.0) {
      m.per_class_acc[k] = c(k, k) / rows[k];
      m.class_present[static_cast<std::size_t>(k)] = true;
      acc_sum += m.per_class_acc[k];
      ++present;
    }
  }
  m.aa = acc_sum / present;
  const double p_e = rows.dot(cols) / (total * total);
  if (1.0 - p_e > 0.0) {
    m.kappa = (m.oa - p_e) / (1.0 - p_e);
  } else {
    m.kappa = m.oa == 1.0 ? 1.0 : 0.0;
  }
  return m;
}

EvalReport make_report(const ConfusionMatrix& confusion, std::uint64_t seed) {
  const Metrics m = compute_metrics(confusion);
  EvalReport r;
  r.confusion = confusion;
  r.oa = m.oa;
  r.aa = m.aa;
  r.kappa = m.kappa;
  r.per_class_acc = m.per_class_acc;
  r.class_present = m.class_present;
  r.n_runs = 1;
  r.runs.push_back({seed, m.oa, m.aa, m.kappa, m.per_class_acc, m.class_present});
  return r;
}

EvalReport aggregate_runs(std::span<const EvalReport> reports) {
  if (reports.empty()) throw ConfigError("aggregate_runs: no reports");
  const Index n = reports.front().confusion.rows();
  EvalReport out;
  out.confusion = ConfusionMatrix::Zero(n, n);
  VectorXd acc_sum = VectorXd::Zero(n);
  VectorXd acc_count = VectorXd::Zero(n);
  for (const auto& r : reports) {
    if (r.confusion.rows() != n) {
      throw ConfigError("aggregate_runs: reports have different class counts (" + std::to_string(n) +
                        " vs " + std::to_string(r.confusion.rows()) + ")");
    }
    out.confusion += r.confusion;
    for (const auto& run : r.runs) {
      out.runs.push_back(run);
      out.oa += run.oa;
      out.aa += run.aa;
      out.kappa += run.kappa;
      for (Index k = 0; k < n; ++k) {
        if (run.class_present[static_cast<std::size_t>(k)]) {
          acc_sum[k] += run.per_class_acc[k];
          acc_count[k] += 1.0;
        }
      }
    }
  }
  const double runs = static_cast<double>(out.runs.size());
  out.n_runs = static_cast<int>(out.runs.size());
  out.oa /= runs;
  out.aa /= runs;
  out.kappa /= runs;
  out.per_class_acc = VectorXd::Zero(n);
  out.class_present.assign(static_cast<std::size_t>(n), false);
  for (Index k = 0; k < n; ++k) {
    if (acc_count[k] > 0.0) {
      out.per_class_acc[k] = acc_sum[k] / acc_count[k];
      out.class_present[static_cast<std::size_t>(k)] = true;
    }
  }
  return out;
}

}  // namespace ffhsi
