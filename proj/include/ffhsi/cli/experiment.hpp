#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffhsi/cli/config.hpp"
#include "ffhsi/dataset/cube.hpp"
#include "ffhsi/eval/metrics.hpp"
#include "ffhsi/io/checkpoint.hpp"

namespace ffhsi {

/// Loads the configured dataset, normalizing bands when requested.
HsiCube load_dataset(const ExperimentConfig& cfg);

/// Architecture the method trains, for a cube with the given bands/classes.
NetworkSpec method_spec(const ExperimentConfig& cfg, Method method, Index bands, int classes);

struct RunResult {
  Method method = Method::bp;
  std::uint64_t seed = 0;
  EvalReport report;
  Checkpoint checkpoint;
  std::string history_csv;
  nlohmann::json report_json;
};

/// One (method, seed) run on an already loaded cube: split with the seed,
/// train, evaluate on the configured scope.
RunResult run_experiment(const ExperimentConfig& cfg, const HsiCube& cube, Method method,
                         std::uint64_t seed);

/// Writes model.ffck, report.json, history.csv and config.toml under `dir`.
void write_run(const RunResult& run, const std::string& dir);

struct TableRow {
  Method method = Method::bp;
  EvalReport aggregate;
  std::vector<EvalReport> runs;
};

/// All configured methods x seeds, aggregated per method in config order.
/// Runs execute on up to `threads` workers; results do not depend on it.
std::vector<TableRow> run_reproduce(const ExperimentConfig& cfg, const HsiCube& cube, unsigned threads,
                                    const std::string& runs_dir = {});

std::string table_markdown(const std::vector<TableRow>& rows, const std::string& scope);
nlohmann::json table_json(const std::vector<TableRow>& rows, const ExperimentConfig& cfg);

/// Predicted label per pixel for every labeled pixel (0 elsewhere).
std::vector<std::uint16_t> predict_scene(const Model& model, const HsiCube& cube);

/// Throws ConfigError listing expected vs found when the checkpoint does
/// not fit the cube.
void check_compatible(const Checkpoint& ckpt, const HsiCube& cube);

/// Worker cap from FFA_HSI_THREADS (default: hardware concurrency).
unsigned worker_threads();

}  // namespace ffhsi
