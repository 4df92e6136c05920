// Command-line front end: synthetic dataset generation, single-condition
// runs, full sweeps, PDC degradation validation, and dataset diagnostics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prefrank/harness.hpp"

namespace {

using namespace prefrank;

LabelerKind parse_kind(const std::string& name) {
  if (name == "deterministic") return LabelerKind::Deterministic;
  if (name == "stochastic") return LabelerKind::StochasticBT;
  if (name == "ddm") return LabelerKind::DDM;
  throw CLI::ValidationError("--kind", "unknown dataset kind: " + name);
}

std::vector<LearnerKind> parse_learners(const std::string& csv) {
  std::vector<LearnerKind> learners;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    const auto kind = learner_from_string(token);
    if (!kind) throw CLI::ValidationError("--learners", "unknown learner: " + token);
    learners.push_back(*kind);
  }
  if (learners.empty()) throw CLI::ValidationError("--learners", "empty learner list");
  return learners;
}

nlohmann::json item_json(const Item& item) { return nlohmann::json(item); }

int cmd_generate(const std::string& kind_name, bool variability, std::size_t train_size,
                 std::size_t test_size, std::size_t features, std::uint64_t seed,
                 const std::string& out_path) {
  LabelerConfig labeler;
  labeler.kind = parse_kind(kind_name);
  DatasetSizes sizes{train_size, test_size, features};
  const Dataset ds = build_dataset(labeler, sizes, variability, seed);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  nlohmann::json header{{"kind", kind_name},
                        {"variability", variability},
                        {"train_size", train_size},
                        {"test_size", test_size},
                        {"features", features},
                        {"seed", seed},
                        {"num_strata", labeler.num_strata}};
  out << header.dump() << "\n";
  auto dump_split = [&](const std::vector<Comparison>& comps, const char* split) {
    for (const auto& c : comps) {
      nlohmann::json row{{"a", item_json(c.a)},       {"b", item_json(c.b)},
                         {"pref", to_string(c.preference)}, {"strength", c.strength},
                         {"stratum", c.stratum_id},   {"split", split}};
      out << row.dump() << "\n";
    }
  };
  dump_split(ds.train, "train");
  dump_split(ds.test, "test");

  // Sidecar: ground-truth utilities of the test items, for metric computation.
  nlohmann::json truth;
  truth["diff_scale"] = ds.ground_truth.diff_scale;
  auto& pairs = truth["test_pairs"] = nlohmann::json::array();
  for (const auto& c : ds.test) {
    pairs.push_back({{"u_a", ds.ground_truth.value(c.a)},
                     {"u_b", ds.ground_truth.value(c.b)}});
  }
  std::ofstream sidecar(out_path + ".truth.json", std::ios::binary);
  sidecar << truth.dump(2) << "\n";
  std::cout << "wrote " << ds.train.size() + ds.test.size() << " comparisons to "
            << out_path << "\n";
  return 0;
}

void dump_model(const UtilityNet& net, const std::string& path) {
  nlohmann::json model;
  model["layer_sizes"] = net.layer_sizes;
  model["weights"] = net.weights;
  model["biases"] = net.biases;
  std::ofstream out(path, std::ios::binary);
  out << model.dump(2) << "\n";
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_dir, int threads,
            const std::string& dump_model_path) {
  const std::string prefix = std::string(to_string(cfg.kind)) +
                             (cfg.variability ? "_var" : "_novar");
  run_condition(cfg, out_dir, prefix, threads);
  if (!dump_model_path.empty()) {
    // Fit the first configured learner on the full trial-0 training set.
    const std::uint64_t trial_seed = derive_seed(cfg.base_seed, 0);
    LabelerConfig labeler = cfg.labeler;
    labeler.kind = cfg.kind;
    const Dataset ds = build_dataset(labeler, cfg.sizes, cfg.variability,
                                     substream(trial_seed, 1));
    const UtilityNet net =
        fit(cfg.learners.front(), ds.train, cfg.train, substream(trial_seed, 3 + 64));
    dump_model(net, dump_model_path);
  }
  std::cout << "results in " << out_dir << "/" << prefix << "_results.csv\n";
  return 0;
}

int cmd_analyze(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  std::filesystem::create_directories(out_dir);
  const std::string prefix = std::string(to_string(cfg.kind)) +
                             (cfg.variability ? "_var" : "_novar");
  const auto rows = dataset_diagnostics(cfg, cfg.trials, threads);
  write_diagnostics_csv(out_dir + "/" + prefix + "_diagnostics.csv", cfg, rows);

  // Per-stratum partition statistics of the trial-0 training set.
  LabelerConfig labeler = cfg.labeler;
  labeler.kind = cfg.kind;
  const Dataset ds =
      build_dataset(labeler, cfg.sizes, cfg.variability, substream(derive_seed(cfg.base_seed, 0), 1));
  std::ofstream out(out_dir + "/" + prefix + "_strata.csv", std::ios::binary);
  out << "stratum,size,num_tie_groups,largest_tie_group,num_partitions\n";
  const auto strata = stratify(ds.train);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    std::map<double, std::size_t> tie_groups;
    std::vector<NormalizedComparison> normalized;
    for (const auto& c : strata[s]) {
      ++tie_groups[c.strength];
      normalized.push_back(normalize(c));
    }
    std::size_t largest = 0;
    for (const auto& [strength, count] : tie_groups) largest = std::max(largest, count);
    out << s << ',' << strata[s].size() << ',' << tie_groups.size() << ',' << largest
        << ',' << partition_tie_aware(normalized).size() << "\n";
  }
  std::cout << "diagnostics in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference-strength reward learning experiments"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  std::size_t trials = 100;
  std::string out_dir = "out";
  int threads = 0;  // 0: all hardware threads
  app.add_option("--seed", seed, "Base RNG seed");
  app.add_option("--trials", trials, "Number of seeded trials");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0 = hardware, 1 = serial)");

  std::string kind_name = "deterministic";
  bool variability = true;
  std::size_t train_size = 50, test_size = 200, features = 20;
  std::string learners_csv = "bt,rr,rr-pool,rr-perm,rtreg,rtreg-perm";
  std::string out_path = "dataset.jsonl";
  std::string dump_model_path;

  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset as JSON-lines");
  gen->add_option("--kind", kind_name, "deterministic|stochastic|ddm");
  gen->add_flag("--variability,!--no-variability", variability, "Inter-stratum RT variability");
  gen->add_option("--train-size", train_size);
  gen->add_option("--test-size", test_size);
  gen->add_option("--features", features);
  gen->add_option("--out", out_path, "Output JSONL path");

  auto* run = app.add_subcommand("run", "Run one dataset condition across learners");
  run->add_option("--kind", kind_name, "deterministic|stochastic|ddm");
  run->add_flag("--variability,!--no-variability", variability);
  run->add_option("--train-size", train_size);
  run->add_option("--test-size", test_size);
  run->add_option("--features", features);
  run->add_option("--learners", learners_csv, "Comma-separated learner list");
  run->add_option("--dump-model", dump_model_path, "Dump the first learner's trial-0 model as JSON");

  auto* sweep = app.add_subcommand("sweep", "Run all three dataset kinds");
  sweep->add_flag("--variability,!--no-variability", variability);
  sweep->add_option("--train-size", train_size);
  sweep->add_option("--test-size", test_size);
  sweep->add_option("--features", features);
  sweep->add_option("--learners", learners_csv, "Comma-separated learner list");

  std::size_t grid_items = 1000, grid_pairs = 50000, grid_steps = 11;
  std::string grid_out = "pdc_grid.csv";
  auto* pdcv = app.add_subcommand("pdc-validate", "PDC/TCE degradation grid");
  pdcv->add_option("--items", grid_items);
  pdcv->add_option("--pairs", grid_pairs);
  pdcv->add_option("--grid-steps", grid_steps);
  pdcv->add_option("--out", grid_out, "Output CSV path");

  auto* analyze = app.add_subcommand("analyze", "Dataset diagnostics and partition stats");
  analyze->add_option("--kind", kind_name, "deterministic|stochastic|ddm");
  analyze->add_flag("--variability,!--no-variability", variability);
  analyze->add_option("--train-size", train_size);
  analyze->add_option("--test-size", test_size);
  analyze->add_option("--features", features);

  // Let global flags appear after the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    auto make_config = [&]() {
      ExperimentConfig cfg;
      cfg.kind = parse_kind(kind_name);
      cfg.variability = variability;
      cfg.learners = parse_learners(learners_csv);
      cfg.trials = trials;
      cfg.base_seed = seed;
      cfg.sizes = DatasetSizes{train_size, test_size, features};
      return cfg;
    };

    if (gen->parsed()) {
      return cmd_generate(kind_name, variability, train_size, test_size, features, seed,
                          out_path);
    }
    if (run->parsed()) {
      return cmd_run(make_config(), out_dir, threads, dump_model_path);
    }
    if (sweep->parsed()) {
      for (const char* kind : {"deterministic", "stochastic", "ddm"}) {
        kind_name = kind;
        const ExperimentConfig cfg = make_config();
        run_condition(cfg, out_dir, std::string(kind) + (variability ? "_var" : "_novar"),
                      threads);
        std::cout << "finished " << kind << "\n";
      }
      return 0;
    }
    if (pdcv->parsed()) {
      const auto grid = pdc_degradation_grid(grid_items, grid_pairs, grid_steps, seed, threads);
      write_pdc_grid_csv(grid_out, grid);
      std::cout << "wrote " << grid.size() << " cells to " << grid_out << "\n";
      return 0;
    }
    if (analyze->parsed()) {
      return cmd_analyze(make_config(), out_dir, threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
