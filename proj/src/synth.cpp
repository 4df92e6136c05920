#include "prefrank/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "prefrank/losses.hpp"

namespace prefrank {

std::vector<Item> gen_items(std::size_t n, std::size_t d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("gen_items: d must be >= 1");
  std::vector<Item> items(n);
  for (auto& item : items) {
    item.resize(d);
    for (auto& x : item) x = rng.uniform();
  }
  return items;
}

GroundTruth gen_ground_truth(std::size_t d, Rng& rng) {
  GroundTruth gt;
  gt.net = init_net({d, 64, 64, 1}, rng);
  gt.diff_scale = 1.0;
  return gt;
}

std::pair<Preference, double> label_deterministic(const Item& a, const Item& b,
                                                  const GroundTruth& gt,
                                                  const LabelerConfig& cfg) {
  const double du = gt.normalized_diff(a, b);
  // Exact tie breaks toward A (measure zero under continuous utilities).
  const Preference pref = du >= 0.0 ? Preference::A : Preference::B;
  const double rt = link(du, {cfg.rt_min, cfg.rt_max});
  return {pref, rt};
}

std::pair<Preference, double> label_stochastic_bt(const Item& a, const Item& b,
                                                  const GroundTruth& gt,
                                                  const LabelerConfig& cfg, Rng& rng) {
  // This labeler normalizes utilities (not differences) to unit SD, so the
  // effective difference scale is sqrt(2); with theta = 0.2 this calibrates
  // the label error rate near 8%.
  const double du = gt.normalized_diff(a, b) * std::sqrt(2.0);
  const double p = 1.0 / (1.0 + std::exp(-du / cfg.choice_temperature));
  const Preference pref = rng.bernoulli(p) ? Preference::A : Preference::B;
  // Log-normal with mean equal to the link value and SD rt_sd (in seconds).
  const double mean_rt = link(du, {cfg.rt_min, cfg.rt_max});
  const double sigma2 =
      std::log(1.0 + cfg.rt_sd * cfg.rt_sd / (mean_rt * mean_rt));
  const double mu = std::log(mean_rt) - 0.5 * sigma2;
  const double rt = std::exp(mu + std::sqrt(sigma2) * rng.normal());
  return {pref, rt};
}

std::pair<bool, double> simulate_ddm(double drift, const LabelerConfig& cfg, Rng& rng) {
  // Threshold is the boundary separation: absorbing boundaries at +-a/2.
  const double bound = 0.5 * cfg.ddm_threshold;
  const double step_drift = drift * cfg.ddm_dt;
  const double step_sd = cfg.ddm_noise_sd * std::sqrt(cfg.ddm_dt);
  constexpr std::size_t kStepCap = 1'000'000;

  for (int attempt = 0; attempt < 2; ++attempt) {
    double x = 0.0;
    for (std::size_t step = 1; step <= kStepCap; ++step) {
      x += step_drift + step_sd * rng.normal();
      if (x >= bound) return {true, static_cast<double>(step) * cfg.ddm_dt};
      if (x <= -bound) return {false, static_cast<double>(step) * cfg.ddm_dt};
    }
    // Step cap exceeded: resample once, then clamp with the evidence sign.
    if (attempt == 1) {
      return {x >= 0.0, static_cast<double>(kStepCap) * cfg.ddm_dt};
    }
  }
  return {true, 0.0};  // unreachable
}

std::pair<Preference, double> label_ddm(const Item& a, const Item& b,
                                        const GroundTruth& gt,
                                        const LabelerConfig& cfg, Rng& rng) {
  const double drift = cfg.ddm_drift_mult * gt.normalized_diff(a, b);
  const auto [upper, decision_time] = simulate_ddm(drift, cfg, rng);
  return {upper ? Preference::A : Preference::B, cfg.ddm_nondecision + decision_time};
}

void apply_stratum_variability(Dataset& dataset, const LabelerConfig& cfg, Rng& rng) {
  dataset.stratum_multipliers.assign(static_cast<std::size_t>(cfg.num_strata), 1.0);
  if (cfg.stratum_rt_sd > 0.0) {
    for (auto& m : dataset.stratum_multipliers) {
      m = std::abs(rng.normal(1.0, cfg.stratum_rt_sd));
    }
  }
  auto scale = [&](std::vector<Comparison>& comps) {
    for (auto& c : comps) {
      c.strength *= dataset.stratum_multipliers[static_cast<std::size_t>(c.stratum_id)];
    }
  };
  scale(dataset.train);
  scale(dataset.test);
}

namespace {

std::pair<Preference, double> label(const Item& a, const Item& b, const GroundTruth& gt,
                                    const LabelerConfig& cfg, Rng& rng) {
  switch (cfg.kind) {
    case LabelerKind::Deterministic: return label_deterministic(a, b, gt, cfg);
    case LabelerKind::StochasticBT: return label_stochastic_bt(a, b, gt, cfg, rng);
    case LabelerKind::DDM: return label_ddm(a, b, gt, cfg, rng);
  }
  throw std::logic_error("label: unknown labeler kind");
}

}  // namespace

Dataset build_dataset(const LabelerConfig& cfg, const DatasetSizes& sizes,
                      bool variability, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = sizes.train + sizes.test;

  Dataset ds;
  std::vector<Item> as, bs;
  constexpr int kMaxRegenerations = 10;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kMaxRegenerations) {
      throw std::runtime_error(
          "build_dataset: degenerate ground-truth network after 10 regenerations");
    }
    ds.ground_truth = gen_ground_truth(sizes.features, rng);
    as = gen_items(n, sizes.features, rng);
    bs = gen_items(n, sizes.features, rng);

    // diff_scale = population SD of u(a) - u(b) over the query set.
    std::vector<double> diffs(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diffs[i] = ds.ground_truth.value(as[i]) - ds.ground_truth.value(bs[i]);
      mean += diffs[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : diffs) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n);
    if (var > 1e-24) {
      ds.ground_truth.diff_scale = std::sqrt(var);
      break;
    }
  }

  auto make_split = [&](std::size_t begin, std::size_t count) {
    std::vector<Comparison> comps;
    comps.reserve(count);
    for (std::size_t i = begin; i < begin + count; ++i) {
      Comparison c;
      c.a = as[i];
      c.b = bs[i];
      auto [pref, rt] = label(c.a, c.b, ds.ground_truth, cfg, rng);
      c.preference = pref;
      c.strength = rt;
      c.stratum_id = static_cast<int>(rng.uniform_index(
          static_cast<std::size_t>(cfg.num_strata)));
      comps.push_back(std::move(c));
    }
    return comps;
  };
  ds.train = make_split(0, sizes.train);
  ds.test = make_split(sizes.train, sizes.test);

  if (variability) {
    apply_stratum_variability(ds, cfg, rng);
  } else {
    ds.stratum_multipliers.assign(static_cast<std::size_t>(cfg.num_strata), 1.0);
  }
  return ds;
}

}  // namespace prefrank
