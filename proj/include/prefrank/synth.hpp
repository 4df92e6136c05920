#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "prefrank/data.hpp"
#include "prefrank/net.hpp"
#include "prefrank/rng.hpp"

namespace prefrank {

// Ground-truth utility: a random two-hidden-layer network plus the divisor
// that normalizes utility differences over the trial's query set to SD 1.
struct GroundTruth {
  UtilityNet net;
  double diff_scale = 1.0;

  double value(const Item& item) const { return utility(net, item); }
  // Normalized difference u(a) - u(b), SD ~1 over the query set.
  double normalized_diff(const Item& a, const Item& b) const {
    return (value(a) - value(b)) / diff_scale;
  }
};

struct Dataset {
  std::vector<Comparison> train;
  std::vector<Comparison> test;
  GroundTruth ground_truth;
  std::vector<double> stratum_multipliers;
};

struct DatasetSizes {
  std::size_t train = 50;
  std::size_t test = 200;
  std::size_t features = 20;
};

std::vector<Item> gen_items(std::size_t n, std::size_t d, Rng& rng);

// Random d->64->64->1 ReLU net; diff_scale is left at 1 (the caller sets it
// after query generation, see build_dataset).
GroundTruth gen_ground_truth(std::size_t d, Rng& rng);

// Labelers. The utility difference fed to each model is normalized by
// gt.diff_scale. Returned strength is a response time in seconds.
std::pair<Preference, double> label_deterministic(const Item& a, const Item& b,
                                                  const GroundTruth& gt,
                                                  const LabelerConfig& cfg);
std::pair<Preference, double> label_stochastic_bt(const Item& a, const Item& b,
                                                  const GroundTruth& gt,
                                                  const LabelerConfig& cfg, Rng& rng);
std::pair<Preference, double> label_ddm(const Item& a, const Item& b,
                                        const GroundTruth& gt,
                                        const LabelerConfig& cfg, Rng& rng);

// One Euler-Maruyama first-passage simulation with boundaries at
// +-threshold/2 around a start of 0. Returns (hit upper boundary, decision
// time excluding non-decision time).
std::pair<bool, double> simulate_ddm(double drift, const LabelerConfig& cfg, Rng& rng);

// Multiplies every comparison's strength by |N(1, stratum_rt_sd)| of its
// stratum. With stratum_rt_sd = 0 all multipliers are exactly 1.
void apply_stratum_variability(Dataset& dataset, const LabelerConfig& cfg, Rng& rng);

// Full pipeline: items, ground truth (with diff_scale from the query set),
// labels, strata, optional variability. Pure function of (config, seed).
Dataset build_dataset(const LabelerConfig& cfg, const DatasetSizes& sizes,
                      bool variability, std::uint64_t seed);

}  // namespace prefrank
