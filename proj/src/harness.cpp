#include "prefrank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prefrank {

namespace {

constexpr std::uint64_t kRoleDataset = 1;
constexpr std::uint64_t kRoleShuffle = 2;
constexpr std::uint64_t kRoleFit = 3;

std::vector<std::size_t> shuffled_train_order(std::size_t n, std::uint64_t trial_seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(substream(trial_seed, kRoleShuffle));
  rng.shuffle(order);
  return order;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  const std::uint64_t trial_seed = derive_seed(cfg.base_seed, trial_index);

  LabelerConfig labeler = cfg.labeler;
  labeler.kind = cfg.kind;
  const Dataset ds = build_dataset(labeler, cfg.sizes, cfg.variability,
                                   substream(trial_seed, kRoleDataset));

  // Prefix-stable fraction subsetting over one per-trial shuffle.
  const auto order = shuffled_train_order(ds.train.size(), trial_seed);

  std::vector<double> true_abs;
  true_abs.reserve(ds.test.size());
  for (const auto& c : ds.test) {
    true_abs.push_back(std::abs(ds.ground_truth.value(c.a) - ds.ground_truth.value(c.b)));
  }

  TrialResult result;
  result.trial_index = trial_index;
  result.cells.resize(cfg.learners.size() * cfg.fractions.size());

  TrainConfig train_cfg = cfg.train;
  train_cfg.num_strata = labeler.num_strata;

  for (std::size_t li = 0; li < cfg.learners.size(); ++li) {
    for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
      const double fraction = cfg.fractions[fi];
      const auto count = static_cast<std::size_t>(
          std::ceil(fraction * static_cast<double>(ds.train.size())));
      std::vector<Comparison> subset;
      subset.reserve(count);
      for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
        subset.push_back(ds.train[order[i]]);
      }

      const std::uint64_t fit_seed =
          substream(trial_seed, kRoleFit + 64 * (li + 1) + fi);
      const UtilityNet net = fit(cfg.learners[li], subset, train_cfg, fit_seed);

      CellResult& cell = result.cells[li * cfg.fractions.size() + fi];
      cell.accuracy = choice_accuracy(net, ds.test);
      std::vector<double> pred_abs;
      pred_abs.reserve(ds.test.size());
      for (const auto& c : ds.test) {
        pred_abs.push_back(std::abs(strength_score(net, c.a, c.b)));
      }
      try {
        cell.pdc = pdc(true_abs, pred_abs);
        cell.pdc_defined = true;
      } catch (const std::runtime_error&) {
        cell.pdc_defined = false;  // zero-variance predictions
      }
    }
  }
  return result;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& cfg, int threads) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  std::vector<TrialResult> results(cfg.trials);
  if (threads <= 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, t);
    return results;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long t = 0; t < static_cast<long long>(cfg.trials); ++t) {
    results[static_cast<std::size_t>(t)] = run_trial(cfg, static_cast<std::size_t>(t));
  }
#else
  for (std::size_t t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, t);
#endif
  return results;
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw std::invalid_argument("aggregate: need at least 2 values");
  }
  Aggregate agg;
  agg.n = values.size();
  const double n = static_cast<double>(agg.n);
  agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
  agg.std = std::sqrt(ss / (n - 1.0));
  agg.ci = 1.96 * agg.std / std::sqrt(n);
  return agg;
}

std::vector<double> collect_metric(const ExperimentConfig& cfg,
                                   const std::vector<TrialResult>& results,
                                   LearnerKind learner, std::size_t fraction_index,
                                   bool accuracy) {
  const auto it = std::find(cfg.learners.begin(), cfg.learners.end(), learner);
  if (it == cfg.learners.end()) {
    throw std::invalid_argument("collect_metric: learner not in config");
  }
  const std::size_t li = static_cast<std::size_t>(it - cfg.learners.begin());
  std::vector<double> values;
  values.reserve(results.size());
  for (const auto& r : results) {
    const CellResult& cell = r.cells[li * cfg.fractions.size() + fraction_index];
    if (accuracy) {
      values.push_back(cell.accuracy);
    } else if (cell.pdc_defined) {
      values.push_back(cell.pdc);
    }
  }
  return values;
}

std::optional<double> breakeven(const std::vector<std::pair<double, double>>& curve,
                                double baseline) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].second >= baseline) {
      if (i == 0 || curve[i].second == baseline) return curve[i].first;
      const auto& [x0, y0] = curve[i - 1];
      const auto& [x1, y1] = curve[i];
      if (y1 == y0) return x1;
      return x0 + (baseline - y0) / (y1 - y0) * (x1 - x0);
    }
  }
  return std::nullopt;
}

std::vector<DiagnosticsRow> dataset_diagnostics(const ExperimentConfig& cfg,
                                                std::size_t trials, int threads) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  std::vector<DiagnosticsRow> rows(trials);
  auto one = [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(cfg.base_seed, t);
    LabelerConfig labeler = cfg.labeler;
    labeler.kind = cfg.kind;
    const Dataset ds = build_dataset(labeler, cfg.sizes, cfg.variability,
                                     substream(trial_seed, kRoleDataset));
    DiagnosticsRow row;
    row.trial_index = t;
    auto count_split = [&](const std::vector<Comparison>& comps) {
      for (const auto& c : comps) {
        const double du = ds.ground_truth.value(c.a) - ds.ground_truth.value(c.b);
        const bool label_a = c.preference == Preference::A;
        if ((du >= 0.0) == label_a) {
          ++row.correct;
        } else {
          ++row.wrong;
        }
      }
    };
    count_split(ds.train);
    count_split(ds.test);

    std::vector<double> strengths, true_abs;
    for (const auto& c : ds.train) {
      strengths.push_back(c.strength);
      true_abs.push_back(std::abs(ds.ground_truth.value(c.a) - ds.ground_truth.value(c.b)));
    }
    row.kendall = kendall_tau(strengths, true_abs);
    rows[t] = row;
  };
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) one(t);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
      one(static_cast<std::size_t>(t));
    }
#else
    for (std::size_t t = 0; t < trials; ++t) one(t);
#endif
  }
  return rows;
}

std::vector<PdcGridCell> pdc_degradation_grid(std::size_t num_items, std::size_t num_pairs,
                                              std::size_t grid_steps, std::uint64_t seed,
                                              int threads) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  // Random normal utilities over num_items items; pairs are uniform index
  // pairs. True signed diffs are fixed; degradation happens per cell.
  Rng base_rng(substream(seed, 0xDA7A));
  std::vector<double> utilities(num_items);
  for (auto& u : utilities) u = base_rng.normal();
  std::vector<double> true_signed(num_pairs);
  for (auto& d : true_signed) {
    const std::size_t i = base_rng.uniform_index(num_items);
    std::size_t j = base_rng.uniform_index(num_items);
    while (j == i) j = base_rng.uniform_index(num_items);
    d = utilities[i] - utilities[j];
  }
  std::vector<double> true_abs(num_pairs), true_lik(num_pairs);
  for (std::size_t p = 0; p < num_pairs; ++p) {
    true_abs[p] = std::abs(true_signed[p]);
    true_lik[p] = 1.0 / (1.0 + std::exp(-true_signed[p]));
  }

  const std::size_t cells_per_scaling = grid_steps * grid_steps;
  std::vector<PdcGridCell> grid(2 * cells_per_scaling);

  auto one = [&](std::size_t idx) {
    const bool affine = idx >= cells_per_scaling;
    const std::size_t cell = idx % cells_per_scaling;
    const std::size_t si = cell / grid_steps;
    const std::size_t mi = cell % grid_steps;
    const double f_sign = static_cast<double>(si) / static_cast<double>(grid_steps - 1);
    const double f_mag = static_cast<double>(mi) / static_cast<double>(grid_steps - 1);

    // Same degradation sub-stream for raw and affine, so affine invariance
    // is testable cell by cell.
    Rng cell_rng(substream(seed, 0x1000 + cell));
    std::vector<double> pred = true_signed;
    if (affine) {
      for (auto& d : pred) d *= 2.0;  // (2u + 5) differences
    }
    degrade(pred, {f_sign, f_mag}, cell_rng);

    std::vector<double> pred_abs(num_pairs), pred_conf(num_pairs);
    for (std::size_t p = 0; p < num_pairs; ++p) {
      pred_abs[p] = std::abs(pred[p]);
      pred_conf[p] = 1.0 / (1.0 + std::exp(-pred[p]));
    }
    grid[idx] = PdcGridCell{f_sign, f_mag, affine, pdc(true_abs, pred_abs),
                            tce(pred_conf, true_lik)};
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) one(i);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(grid.size()); ++i) {
      one(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < grid.size(); ++i) one(i);
#endif
  }
  return grid;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void write_config_header(std::ofstream& out, const ExperimentConfig& cfg) {
  out << "# dataset=" << to_string(cfg.kind)
      << " variability=" << (cfg.variability ? 1 : 0)
      << " trials=" << cfg.trials << " base_seed=" << cfg.base_seed
      << " train_size=" << cfg.sizes.train << " test_size=" << cfg.sizes.test
      << " features=" << cfg.sizes.features << "\n";
  out << "# learners=";
  for (std::size_t i = 0; i < cfg.learners.size(); ++i) {
    out << (i ? "," : "") << to_string(cfg.learners[i]);
  }
  out << " fractions=";
  for (std::size_t i = 0; i < cfg.fractions.size(); ++i) {
    out << (i ? "," : "") << fmt(cfg.fractions[i]);
  }
  out << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_results_csv(const std::string& path, const ExperimentConfig& cfg,
                       const std::vector<TrialResult>& results) {
  auto out = open_out(path);
  write_config_header(out, cfg);
  out << "dataset,variability,learner,fraction,metric,mean,std,ci,n\n";
  for (std::size_t li = 0; li < cfg.learners.size(); ++li) {
    for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
      for (bool accuracy : {false, true}) {
        const auto values =
            collect_metric(cfg, results, cfg.learners[li], fi, accuracy);
        out << to_string(cfg.kind) << ',' << (cfg.variability ? 1 : 0) << ','
            << to_string(cfg.learners[li]) << ',' << fmt(cfg.fractions[fi]) << ','
            << (accuracy ? "accuracy" : "pdc") << ',';
        if (values.size() >= 2) {
          const Aggregate agg = aggregate(values);
          out << fmt(agg.mean) << ',' << fmt(agg.std) << ',' << fmt(agg.ci) << ','
              << agg.n;
        } else {
          out << ",,," << values.size();
        }
        out << "\n";
      }
    }
  }
}

void write_trials_jsonl(const std::string& path, const ExperimentConfig& cfg,
                        const std::vector<TrialResult>& results) {
  auto out = open_out(path);
  for (const auto& r : results) {
    for (std::size_t li = 0; li < cfg.learners.size(); ++li) {
      for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
        const CellResult& cell = r.cells[li * cfg.fractions.size() + fi];
        nlohmann::json row{{"trial", r.trial_index},
                           {"dataset", to_string(cfg.kind)},
                           {"variability", cfg.variability},
                           {"learner", to_string(cfg.learners[li])},
                           {"fraction", cfg.fractions[fi]},
                           {"accuracy", cell.accuracy}};
        if (cell.pdc_defined) {
          row["pdc"] = cell.pdc;
        } else {
          row["pdc"] = nullptr;
        }
        out << row.dump() << "\n";
      }
    }
  }
}

void write_breakeven_csv(const std::string& path, const ExperimentConfig& cfg,
                         const std::vector<TrialResult>& results) {
  auto out = open_out(path);
  write_config_header(out, cfg);
  out << "dataset,variability,learner,metric,baseline_learner,baseline,breakeven\n";
  if (cfg.fractions.empty()) return;

  // Baseline: BT mean at the largest fraction.
  const std::size_t last = cfg.fractions.size() - 1;
  for (bool accuracy : {false, true}) {
    if (std::find(cfg.learners.begin(), cfg.learners.end(), LearnerKind::BT) ==
        cfg.learners.end()) {
      continue;
    }
    const auto bt_values = collect_metric(cfg, results, LearnerKind::BT, last, accuracy);
    if (bt_values.size() < 2) continue;
    const double baseline = aggregate(bt_values).mean;
    for (LearnerKind learner : cfg.learners) {
      if (learner == LearnerKind::BT) continue;
      std::vector<std::pair<double, double>> curve;
      for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
        const auto values = collect_metric(cfg, results, learner, fi, accuracy);
        if (values.size() >= 2) {
          curve.emplace_back(cfg.fractions[fi], aggregate(values).mean);
        }
      }
      const auto be = breakeven(curve, baseline);
      out << to_string(cfg.kind) << ',' << (cfg.variability ? 1 : 0) << ','
          << to_string(learner) << ',' << (accuracy ? "accuracy" : "pdc") << ",bt,"
          << fmt(baseline) << ',' << (be ? fmt(*be) : "") << "\n";
    }
  }
}

void write_pdc_grid_csv(const std::string& path, const std::vector<PdcGridCell>& grid) {
  auto out = open_out(path);
  out << "f_sign,f_mag,scaling,pdc,tce\n";
  for (const auto& cell : grid) {
    out << fmt(cell.f_sign) << ',' << fmt(cell.f_mag) << ','
        << (cell.affine ? "affine" : "raw") << ',' << fmt(cell.pdc) << ','
        << fmt(cell.tce) << "\n";
  }
}

void write_diagnostics_csv(const std::string& path, const ExperimentConfig& cfg,
                           const std::vector<DiagnosticsRow>& rows) {
  auto out = open_out(path);
  write_config_header(out, cfg);
  out << "trial,correct,wrong,error_rate,kendall_tau\n";
  for (const auto& row : rows) {
    const double total = static_cast<double>(row.correct + row.wrong);
    out << row.trial_index << ',' << row.correct << ',' << row.wrong << ','
        << fmt(static_cast<double>(row.wrong) / total) << ',' << fmt(row.kendall)
        << "\n";
  }
}

void run_condition(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& prefix, int threads) {
  std::filesystem::create_directories(out_dir);
  const auto results = run_trials(cfg, threads);
  const std::string base = out_dir + "/" + prefix;
  write_results_csv(base + "_results.csv", cfg, results);
  write_trials_jsonl(base + "_trials.jsonl", cfg, results);
  write_breakeven_csv(base + "_breakeven.csv", cfg, results);
}

}  // namespace prefrank
