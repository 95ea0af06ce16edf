#include "ffhsi/cli/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "ffhsi/dataset/hsic.hpp"
#include "ffhsi/eval/report.hpp"
#include "ffhsi/models/models.hpp"

namespace ffhsi {

HsiCube load_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigError("dataset: no dataset path given");
  HsiCube cube = load_cube(cfg.dataset);
  return cfg.normalize_bands ? normalize_bands(std::move(cube)) : cube;
}

NetworkSpec method_spec(const ExperimentConfig& cfg, Method method, Index bands, int classes) {
  const LabelEncoding enc{cfg.encoding, classes};
  const Index input_len = (method == Method::bp && cfg.input_mode == InputMode::raw)
                              ? bands
                              : enc.code_len() + bands;
  const bool conv = method == Method::ffa_conv ||
                    ((method == Method::bp || method == Method::ffa_bp) && cfg.arch == "conv");
  return conv ? conv_spec_for_input(input_len, classes) : dense_spec_for_input(input_len, classes);
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

void append_ff_history(std::string& csv, const std::string& phase, const FfHistory& h) {
  for (const auto& e : h.epochs) {
    for (std::size_t l = 0; l < e.loss.size(); ++l) {
      csv += phase + "," + std::to_string(e.epoch) + "," + std::to_string(l + 1) + "," + fmt(e.loss[l]) + "," +
             fmt(e.mean_g_pos[l]) + "," + fmt(e.mean_g_neg[l]) + "," +
             (e.val_accuracy >= 0 ? fmt(e.val_accuracy) : "") + "\n";
    }
  }
}

void append_bp_history(std::string& csv, const std::string& phase, const BpHistory& h) {
  for (const auto& e : h.epochs) {
    csv += phase + "," + std::to_string(e.epoch) + ",head," + fmt(e.train_loss) + ",,," +
           (e.val_accuracy >= 0 ? fmt(e.val_accuracy) : "") + "\n";
  }
}

std::vector<int> predict_model(const Model& model, const MatrixXd& spectra) {
  if (const auto* ff = std::get_if<FfNetwork>(&model)) return predict_ff_batch(*ff, spectra);
  return predict_bp_batch(std::get<BpNetwork>(model), spectra);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const HsiCube& cube, Method method,
                         std::uint64_t seed) {
  ExperimentConfig run_cfg = cfg;
  run_cfg.method = method;
  run_cfg.validate();
  const int classes = static_cast<int>(cube.class_count);
  if (classes < 2) throw ConfigError("dataset: at least 2 classes are required");
  const LabelEncoding enc{cfg.encoding, classes};
  const NetworkSpec spec = method_spec(run_cfg, method, cube.bands, classes);

  const SplitAssignment split = stratified_split(cube, seed, cfg.ratios);
  const SampleSet train = gather_samples(cube, split.train);
  const SampleSet val = gather_samples(cube, split.val);

  const RunStreams streams{seed};
  AdamConfig adam;
  adam.lr = cfg.lr;
  FfNetworkOptions ff_net;
  ff_net.layer = {cfg.theta, cfg.goodness_sign};
  ff_net.normalize_between = cfg.normalize_between;
  ff_net.include_first_layer = cfg.include_first_layer;
  ff_net.adam = adam;
  FfTrainOptions ff_train;
  ff_train.epochs = cfg.epochs;
  ff_train.batch_size = cfg.batch_size;
  ff_train.validate_every = cfg.validate_every;
  BpTrainOptions bp_train;
  bp_train.epochs = cfg.epochs;
  bp_train.batch_size = cfg.batch_size;
  bp_train.validate_every = cfg.validate_every;

  RunResult r;
  r.method = method;
  r.seed = seed;
  r.history_csv = "phase,epoch,layer,loss,mean_g_pos,mean_g_neg,val_accuracy\n";
  switch (method) {
    case Method::bp: {
      BpNetwork net = build_bp_network(spec, enc, cfg.input_mode, cfg.normalize_between, adam, streams);
      Rng rng = streams.bp();
      append_bp_history(r.history_csv, "bp", train_bp(net, train, val, bp_train, rng));
      r.checkpoint.model = std::move(net);
      break;
    }
    case Method::ffa_dense:
    case Method::ffa_conv: {
      Rng init = streams.init();
      FfNetwork net = FfNetwork::build(spec, enc, ff_net, init);
      Rng rng = streams.ff();
      append_ff_history(r.history_csv, "ff", train_ff(net, train, val, ff_train, rng));
      r.checkpoint.model = std::move(net);
      break;
    }
    case Method::ffa_bp: {
      HybridOptions h;
      h.ff_epochs = cfg.ff_epochs;
      h.bp_epochs = cfg.bp_epochs;
      h.ff_network = ff_net;
      h.ff_train = ff_train;
      h.bp_train = bp_train;
      HybridResult res = train_hybrid(spec, enc, train, val, h, streams);
      append_ff_history(r.history_csv, "ff", res.ff_history);
      append_bp_history(r.history_csv, "bp", res.bp_history);
      r.checkpoint.model = std::move(res.network);
      break;
    }
  }
  r.checkpoint.bands = cube.bands;
  r.checkpoint.config = run_cfg.to_text() + "seed = " + std::to_string(seed) + "\n";

  const std::vector<std::size_t> eval_pixels = cfg.eval_scope == "all" ? cube.labeled_pixels() : split.test;
  const SampleSet eval = gather_samples(cube, eval_pixels);
  const auto predicted = predict_model(r.checkpoint.model, eval.spectra);
  r.report = make_report(confusion_matrix(eval.labels, predicted, classes), seed);

  r.report_json = {{"method", to_string(method)},
                   {"seed", seed},
                   {"eval_scope", cfg.eval_scope},
                   {"evaluated_pixels", eval_pixels.size()},
                   {"split", {{"train", split.train.size()}, {"val", split.val.size()}, {"test", split.test.size()}}},
                   {"architecture", spec.to_text()},
                   {"metrics", report_to_json(r.report)},
                   {"config", r.checkpoint.config}};
  return r;
}

void write_run(const RunResult& run, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_checkpoint(dir + "/model.ffck", run.checkpoint);
  std::ofstream(dir + "/report.json") << run.report_json.dump(2) << "\n";
  std::ofstream(dir + "/history.csv") << run.history_csv;
  std::ofstream(dir + "/config.toml") << run.checkpoint.config;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FFA_HSI_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<TableRow> run_reproduce(const ExperimentConfig& cfg, const HsiCube& cube, unsigned threads,
                                    const std::string& runs_dir) {
  cfg.validate();
  struct Job {
    std::size_t row;
    std::uint64_t seed;
    EvalReport report;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (auto seed : cfg.seeds) jobs.push_back({m, seed, {}});
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const Method method = cfg.methods[jobs[j].row];
        RunResult run = run_experiment(cfg, cube, method, jobs[j].seed);
        if (!runs_dir.empty()) {
          write_run(run, runs_dir + "/" + to_string(method) + "/seed_" + std::to_string(jobs[j].seed));
        }
        jobs[j].report = std::move(run.report);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<TableRow> rows(cfg.methods.size());
  for (std::size_t m = 0; m < rows.size(); ++m) rows[m].method = cfg.methods[m];
  for (auto& j : jobs) rows[j.row].runs.push_back(std::move(j.report));
  for (auto& row : rows) row.aggregate = aggregate_runs(row.runs);
  return rows;
}

std::string table_markdown(const std::vector<TableRow>& rows, const std::string& scope) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "| Method | OA | AA | Kappa | Runs |\n|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << to_string(r.method) << " | " << r.aggregate.oa << " | " << r.aggregate.aa << " | "
        << r.aggregate.kappa << " | " << r.aggregate.n_runs << " |\n";
  }
  out << "\nMetrics on the " << (scope == "all" ? "full labeled scene" : "test split")
      << ", averaged over runs.\n";
  return out.str();
}

nlohmann::json table_json(const std::vector<TableRow>& rows, const ExperimentConfig& cfg) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : rows) {
    table.push_back({{"method", to_string(r.method)}, {"metrics", report_to_json(r.aggregate)}});
  }
  return {{"eval_scope", cfg.eval_scope}, {"seeds", cfg.seeds}, {"config", cfg.to_text()}, {"rows", table}};
}

std::vector<std::uint16_t> predict_scene(const Model& model, const HsiCube& cube) {
  const auto pixels = cube.labeled_pixels();
  const SampleSet samples = gather_samples(cube, pixels);
  const auto predicted = predict_model(model, samples.spectra);
  std::vector<std::uint16_t> scene(cube.pixel_count(), 0);
  for (std::size_t i = 0; i < pixels.size(); ++i) scene[pixels[i]] = static_cast<std::uint16_t>(predicted[i]);
  return scene;
}

void check_compatible(const Checkpoint& ckpt, const HsiCube& cube) {
  const auto [classes, scheme] = std::visit(
      [](const auto& net) { return std::pair{net.encoding.classes, net.encoding.scheme}; }, ckpt.model);
  if (static_cast<std::uint32_t>(classes) != cube.class_count || ckpt.bands != cube.bands) {
    throw ConfigError("checkpoint expects N=" + std::to_string(classes) + ", B=" + std::to_string(ckpt.bands) +
                      " (encoding " + to_string(scheme) + "); dataset has N=" +
                      std::to_string(cube.class_count) + ", B=" + std::to_string(cube.bands));
  }
}

}  // namespace ffhsi
