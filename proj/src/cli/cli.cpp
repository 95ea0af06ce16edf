#include "ffhsi/cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ffhsi/cli/experiment.hpp"
#include "ffhsi/cli/synth.hpp"
#include "ffhsi/dataset/hsic.hpp"
#include "ffhsi/eval/render.hpp"
#include "ffhsi/eval/report.hpp"
#include "ffhsi/io/crc32.hpp"

namespace ffhsi {

namespace {

const std::vector<std::string> kMethods{"bp", "ffa_dense", "ffa_conv", "ffa_bp"};

struct RawOptions {
  std::string method = "ffa_bp";
  std::vector<std::string> methods{"bp", "ffa_dense", "ffa_conv", "ffa_bp"};
  std::string encoding = "one_hot";
  std::string input_mode = "neutral";
  std::optional<std::uint64_t> seed;
  std::string checkpoint;
  std::string inspect_path;
  SynthOptions synth;
};

ExperimentConfig finish(ExperimentConfig cfg, const RawOptions& raw) {
  cfg.method = parse_method(raw.method);
  cfg.methods.clear();
  for (const auto& m : raw.methods) cfg.methods.push_back(parse_method(m));
  cfg.encoding = parse_label_scheme(raw.encoding);
  cfg.input_mode = parse_input_mode(raw.input_mode);
  cfg.validate();
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_train(const ExperimentConfig& cfg, const RawOptions& raw) {
  const std::uint64_t seed = raw.seed.value_or(cfg.seeds.front());
  const HsiCube cube = load_dataset(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult run = run_experiment(cfg, cube, cfg.method, seed);
  write_run(run, cfg.out);
  std::cout << to_string(cfg.method) << " seed " << seed << ": OA " << run.report.oa << "  AA "
            << run.report.aa << "  kappa " << run.report.kappa << "  (" << seconds_since(t0) << " s)\n"
            << "wrote " << cfg.out << "/{model.ffck,report.json,history.csv,config.toml}\n";
  return 0;
}

int cmd_reproduce(const ExperimentConfig& cfg) {
  const HsiCube cube = load_dataset(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_reproduce(cfg, cube, worker_threads(), cfg.out + "/runs");
  const std::string md = table_markdown(rows, cfg.eval_scope);
  std::filesystem::create_directories(cfg.out);
  std::ofstream(cfg.out + "/table.md") << md;
  std::ofstream(cfg.out + "/table.json") << table_json(rows, cfg).dump(2) << "\n";
  std::ofstream(cfg.out + "/config.toml") << cfg.to_text();
  std::cout << md << "(" << seconds_since(t0) << " s)\n";
  return 0;
}

int cmd_map(const ExperimentConfig& cfg, const RawOptions& raw) {
  if (raw.checkpoint.empty()) throw ConfigError("checkpoint: no checkpoint path given");
  const Checkpoint ckpt = load_checkpoint(raw.checkpoint);
  const HsiCube cube = load_dataset(cfg);
  check_compatible(ckpt, cube);
  const ClassMaps maps = render_map(cube, predict_scene(ckpt.model, cube));
  std::filesystem::create_directories(cfg.out);
  write_ppm(cfg.out + "/ground_truth.ppm", maps.ground_truth);
  write_ppm(cfg.out + "/prediction.ppm", maps.prediction);
  std::ofstream(cfg.out + "/map_config.toml") << "checkpoint = \"" << raw.checkpoint << "\"\n" << ckpt.config;
  std::cout << "wrote " << cfg.out << "/ground_truth.ppm and " << cfg.out << "/prediction.ppm ("
            << cube.width << "x" << cube.height << ")\n";
  return 0;
}

int cmd_synth(const ExperimentConfig& cfg, RawOptions raw) {
  if (raw.seed) raw.synth.seed = *raw.seed;
  const HsiCube cube = make_synthetic_cube(raw.synth);
  const auto bytes = encode_cube(cube);
  const std::string path = cfg.out == "out" ? "synthetic.hsic" : cfg.out;
  if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  save_cube(path, cube);
  std::cout << "wrote " << path << ": " << cube.height << "x" << cube.width << "x" << cube.bands << ", "
            << cube.class_count << " classes, separation " << raw.synth.separation << ", seed "
            << raw.synth.seed << ", crc32 " << crc32(std::span(bytes).first(bytes.size() - 4)) << "\n";
  return 0;
}

int cmd_split(const ExperimentConfig& cfg, const RawOptions& raw) {
  const std::uint64_t seed = raw.seed.value_or(cfg.seeds.front());
  const HsiCube cube = load_cube(cfg.dataset);
  const SplitAssignment split = stratified_split(cube, seed, cfg.ratios);
  std::vector<std::array<std::size_t, 3>> counts(cube.class_count, {0, 0, 0});
  const std::vector<std::size_t>* parts[3] = {&split.train, &split.val, &split.test};
  for (int k = 0; k < 3; ++k) {
    for (auto p : *parts[k]) ++counts[cube.labels[p] - 1][k];
  }
  std::cout << "class,train,val,test\n";
  for (std::size_t c = 0; c < counts.size(); ++c) {
    std::cout << c + 1 << "," << counts[c][0] << "," << counts[c][1] << "," << counts[c][2] << "\n";
  }
  std::cout << "total," << split.train.size() << "," << split.val.size() << "," << split.test.size() << "\n";
  if (cfg.out != "out") {
    std::ofstream csv(cfg.out);
    csv << "# seed = " << seed << "\npixel,split\n";
    const char* names[3] = {"train", "val", "test"};
    for (int k = 0; k < 3; ++k) {
      for (auto p : *parts[k]) csv << p << "," << names[k] << "\n";
    }
  }
  return 0;
}

int cmd_inspect(const RawOptions& raw) {
  const HsicHeader h = inspect_cube(raw.inspect_path);
  const HsiCube cube = load_cube(raw.inspect_path);
  std::cout << "format   HSIC v" << h.version << "\n"
            << "height   " << h.height << "\n"
            << "width    " << h.width << "\n"
            << "bands    " << h.bands << "\n"
            << "classes  " << h.classes << "\n"
            << "bytes    " << h.file_size << "\n"
            << "crc32    " << h.crc << "\n"
            << "labeled  " << cube.labeled_pixels().size() << "\n";
  const auto hist = cube.class_histogram();
  for (std::size_t c = 0; c < hist.size(); ++c) {
    std::cout << "class " << c + 1 << "  " << hist[c] << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Forward-Forward and backprop training for hyperspectral pixel classification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value configuration file");
  app.fallthrough();

  ExperimentConfig cfg;
  RawOptions raw;
  app.add_option("--dataset", cfg.dataset, "HSIC v1 dataset file");
  app.add_option("--method", raw.method, "Training method")->check(CLI::IsMember(kMethods));
  app.add_option("--methods", raw.methods, "Methods for reproduce, in table order")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethods));
  app.add_option("--arch", cfg.arch, "Architecture for bp and ffa_bp")->check(CLI::IsMember({"dense", "conv"}));
  app.add_option("--encoding", raw.encoding, "Label encoding")->check(CLI::IsMember({"one_hot", "binary", "decimal"}));
  app.add_option("--input_mode", raw.input_mode, "Backprop input: neutral label slots or raw spectra")
      ->check(CLI::IsMember({"neutral", "raw"}));
  app.add_option("--theta", cfg.theta, "Goodness threshold");
  app.add_option("--goodness_sign", cfg.goodness_sign, "+1 sum of squares, -1 negative sum of squares");
  app.add_option("--epochs", cfg.epochs, "Epochs for bp, ffa_dense and ffa_conv");
  app.add_option("--ff_epochs", cfg.ff_epochs, "Hybrid FF pretraining epochs");
  app.add_option("--bp_epochs", cfg.bp_epochs, "Hybrid backprop fine-tuning epochs");
  app.add_option("--batch_size", cfg.batch_size);
  app.add_option("--lr", cfg.lr, "Adam learning rate");
  app.add_option("--seeds", cfg.seeds, "Seeds for reproduce")->delimiter(',');
  app.add_option("--seed", raw.seed, "Seed for train, split and synth");
  app.add_option("--train_ratio", cfg.ratios.train);
  app.add_option("--val_ratio", cfg.ratios.val);
  app.add_option("--test_ratio", cfg.ratios.test);
  app.add_option("--normalize_between", cfg.normalize_between, "L2-normalize activity between layers");
  app.add_option("--include_first_layer", cfg.include_first_layer, "Count first-layer goodness at inference");
  app.add_option("--normalize_bands", cfg.normalize_bands, "Min-max scale each band on load");
  app.add_option("--eval_scope", cfg.eval_scope, "Evaluate on the test split or all labeled pixels")
      ->check(CLI::IsMember({"test", "all"}));
  app.add_option("--validate_every", cfg.validate_every, "Validation interval in epochs (0 = never)");
  app.add_option("--out", cfg.out, "Output directory (synth/split: output file)");

  auto* train = app.add_subcommand("train", "Train one method with one seed");
  auto* reproduce = app.add_subcommand("reproduce", "All methods x all seeds, aggregated table");
  auto* map = app.add_subcommand("map", "Render ground-truth and prediction maps");
  map->add_option("--checkpoint", raw.checkpoint, "Model checkpoint")->required();
  auto* synth = app.add_subcommand("synth", "Write a synthetic HSIC fixture");
  synth->add_option("--classes", raw.synth.classes);
  synth->add_option("--bands", raw.synth.bands);
  synth->add_option("--height", raw.synth.height);
  synth->add_option("--width", raw.synth.width);
  synth->add_option("--separation", raw.synth.separation);
  synth->add_option("--noise", raw.synth.noise);
  auto* split = app.add_subcommand("split", "Print the stratified split for a seed");
  auto* inspect = app.add_subcommand("inspect", "Print an HSIC header and class histogram");
  inspect->add_option("file", raw.inspect_path, "HSIC file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(raw);
    const ExperimentConfig full = finish(cfg, raw);
    if (train->parsed()) return cmd_train(full, raw);
    if (reproduce->parsed()) return cmd_reproduce(full);
    if (map->parsed()) return cmd_map(full, raw);
    if (synth->parsed()) return cmd_synth(full, raw);
    if (split->parsed()) return cmd_split(full, raw);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ffhsi
