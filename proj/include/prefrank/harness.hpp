#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prefrank/learners.hpp"
#include "prefrank/metrics.hpp"
#include "prefrank/synth.hpp"

namespace prefrank {

// One experimental condition: a dataset kind x variability setting, swept
// over learners and training-set fractions across seeded trials.
struct ExperimentConfig {
  LabelerKind kind = LabelerKind::Deterministic;
  bool variability = true;
  std::vector<double> fractions = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<LearnerKind> learners = all_learners();
  std::size_t trials = 100;
  std::uint64_t base_seed = 42;
  DatasetSizes sizes;
  LabelerConfig labeler;
  TrainConfig train;
};

// PDC can be undefined (zero variance in predictions); such cells are
// recorded as missing rather than aborting the trial.
struct CellResult {
  bool pdc_defined = false;
  double pdc = 0.0;
  double accuracy = 0.0;
};

struct TrialResult {
  std::size_t trial_index = 0;
  // Indexed learner-major: cells[l * fractions.size() + f].
  std::vector<CellResult> cells;
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;
  double ci = 0.0;  // 1.96 * std / sqrt(n)
  std::size_t n = 0;
};

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

// Executes all trials. threads <= 1 runs the plain serial loop (the
// reference path); larger values use an OpenMP work pool. Results are
// identical regardless of thread count.
std::vector<TrialResult> run_trials(const ExperimentConfig& cfg, int threads);

// Sample mean, sample std (n-1), normal-approximation 95% CI half-width.
Aggregate aggregate(const std::vector<double>& values);

// Collects the defined values of one (learner, fraction) metric.
std::vector<double> collect_metric(const ExperimentConfig& cfg,
                                   const std::vector<TrialResult>& results,
                                   LearnerKind learner, std::size_t fraction_index,
                                   bool accuracy);

// Smallest fraction where the linearly interpolated curve first reaches the
// baseline; nullopt when it never does.
std::optional<double> breakeven(const std::vector<std::pair<double, double>>& curve,
                                double baseline);

// Per-trial dataset diagnostics: choice confusion counts against the true
// utility ordering and Kendall tau between the training strengths and true
// |utility difference|s.
struct DiagnosticsRow {
  std::size_t trial_index = 0;
  long correct = 0;  // labels agreeing with the true utility argmax
  long wrong = 0;
  double kendall = 0.0;
};

std::vector<DiagnosticsRow> dataset_diagnostics(const ExperimentConfig& cfg,
                                                std::size_t trials, int threads);

// PDC/TCE degradation grid over (f_sign, f_mag) for raw and affine-scaled
// (2u + 5) predicted utilities.
struct PdcGridCell {
  double f_sign = 0.0;
  double f_mag = 0.0;
  bool affine = false;
  double pdc = 0.0;
  double tce = 0.0;
};

std::vector<PdcGridCell> pdc_degradation_grid(std::size_t num_items, std::size_t num_pairs,
                                              std::size_t grid_steps, std::uint64_t seed,
                                              int threads);

// Output writers (CSV with a '#' config header block; JSON-lines raw trials).
void write_results_csv(const std::string& path, const ExperimentConfig& cfg,
                       const std::vector<TrialResult>& results);
void write_trials_jsonl(const std::string& path, const ExperimentConfig& cfg,
                        const std::vector<TrialResult>& results);
void write_breakeven_csv(const std::string& path, const ExperimentConfig& cfg,
                         const std::vector<TrialResult>& results);
void write_pdc_grid_csv(const std::string& path, const std::vector<PdcGridCell>& grid);
void write_diagnostics_csv(const std::string& path, const ExperimentConfig& cfg,
                           const std::vector<DiagnosticsRow>& rows);

// Runs one condition and writes results/trials/breakeven files into out_dir
// with the given file prefix.
void run_condition(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& prefix, int threads);

}  // namespace prefrank
