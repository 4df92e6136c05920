#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prefrank/losses.hpp"
#include "prefrank/net.hpp"
#include "prefrank/rank.hpp"
#include "prefrank/synth.hpp"

namespace prefrank {

enum class LearnerKind { BT, RR, RR_Pool, RR_Perm, RtReg, RtReg_Perm };

const char* to_string(LearnerKind k);
std::optional<LearnerKind> learner_from_string(const std::string& name);
std::vector<LearnerKind> all_learners();

struct RegressionExample {
  Item a;
  Item b;
  double target = 0.0;  // signed utility-difference target
};

// Per-learner training targets. Exactly one of the containers is populated.
struct PreparedData {
  LearnerKind kind = LearnerKind::BT;
  std::vector<NormalizedComparison> pairs;   // BT
  std::vector<RankingTarget> rankings;       // RR variants
  std::vector<RegressionExample> regression; // RtReg variants
  std::size_t num_comparisons = 0;
};

struct TrainConfig {
  std::size_t steps = 200;
  AdamWConfig adamw;
  std::size_t hidden = 64;
  LinkConfig link;                       // for RtReg targets
  std::size_t pool_batch_size = 0;       // 0: ceil(train / num_strata)
  int num_strata = 5;                    // used only for the pool default
};

PreparedData prepare(LearnerKind kind, const std::vector<Comparison>& train,
                     const TrainConfig& cfg, Rng& rng);

// Loss of `net` on prepared data plus gradients accumulated into `grads`
// (which must be zeroed by the caller). Losses are normalized by the number
// of comparisons.
double loss_and_grads(const PreparedData& prepared, const UtilityNet& net,
                      NetGrads& grads);

double loss_only(const PreparedData& prepared, const UtilityNet& net);

// Prepare once, then full-batch AdamW for cfg.steps steps. Deterministic per
// (kind, train, cfg, seed). Throws on non-finite loss mid-training.
UtilityNet fit(LearnerKind kind, const std::vector<Comparison>& train,
               const TrainConfig& cfg, std::uint64_t seed);

}  // namespace prefrank
