#include "prefrank/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace prefrank {

const char* to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::BT: return "bt";
    case LearnerKind::RR: return "rr";
    case LearnerKind::RR_Pool: return "rr-pool";
    case LearnerKind::RR_Perm: return "rr-perm";
    case LearnerKind::RtReg: return "rtreg";
    case LearnerKind::RtReg_Perm: return "rtreg-perm";
  }
  return "?";
}

std::optional<LearnerKind> learner_from_string(const std::string& name) {
  for (LearnerKind k : all_learners()) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::vector<LearnerKind> all_learners() {
  return {LearnerKind::BT,      LearnerKind::RR,    LearnerKind::RR_Pool,
          LearnerKind::RR_Perm, LearnerKind::RtReg, LearnerKind::RtReg_Perm};
}

namespace {

std::vector<RankingTarget> build_rankings_stratified(const std::vector<Comparison>& train) {
  std::vector<RankingTarget> rankings;
  for (const auto& stratum : stratify(train)) {
    std::vector<NormalizedComparison> normalized;
    normalized.reserve(stratum.size());
    for (const auto& c : stratum) normalized.push_back(normalize(c));
    for (const auto& partition : partition_tie_aware(normalized)) {
      rankings.push_back(sort_by_strength(partition));
    }
  }
  return rankings;
}

std::vector<RankingTarget> build_rankings_pooled(const std::vector<Comparison>& train,
                                                 std::size_t batch_size, Rng& rng) {
  // Single global stratum: shuffle, then size-capped tie-aware partitions.
  std::vector<NormalizedComparison> pool;
  pool.reserve(train.size());
  for (const auto& c : train) pool.push_back(normalize(c));
  rng.shuffle(pool);
  std::vector<RankingTarget> rankings;
  for (const auto& partition : partition_tie_aware(pool, batch_size)) {
    if (!partition.empty()) rankings.push_back(sort_by_strength(partition));
  }
  return rankings;
}

std::vector<RegressionExample> build_regression(const std::vector<Comparison>& train,
                                                const LinkConfig& link_cfg) {
  std::vector<RegressionExample> examples;
  examples.reserve(train.size());
  for (const auto& c : train) {
    RegressionExample e;
    e.a = c.a;
    e.b = c.b;
    e.target = rt_regression_target(c.preference == Preference::A, c.strength, link_cfg);
    examples.push_back(std::move(e));
  }
  return examples;
}

}  // namespace

PreparedData prepare(LearnerKind kind, const std::vector<Comparison>& train,
                     const TrainConfig& cfg, Rng& rng) {
  PreparedData prepared;
  prepared.kind = kind;
  prepared.num_comparisons = train.size();

  std::vector<Comparison> working = train;
  if (kind == LearnerKind::RR_Perm || kind == LearnerKind::RtReg_Perm) {
    permute_strengths(working, rng);
  }

  switch (kind) {
    case LearnerKind::BT:
      prepared.pairs.reserve(working.size());
      for (const auto& c : working) prepared.pairs.push_back(normalize(c));
      break;
    case LearnerKind::RR:
    case LearnerKind::RR_Perm:
      prepared.rankings = build_rankings_stratified(working);
      break;
    case LearnerKind::RR_Pool: {
      std::size_t b = cfg.pool_batch_size;
      if (b == 0) {
        b = (working.size() + static_cast<std::size_t>(cfg.num_strata) - 1) /
            static_cast<std::size_t>(cfg.num_strata);
      }
      prepared.rankings = build_rankings_pooled(working, b, rng);
      break;
    }
    case LearnerKind::RtReg:
    case LearnerKind::RtReg_Perm:
      prepared.regression = build_regression(working, cfg.link);
      break;
  }
  return prepared;
}

namespace {

// Shared loss/grad core. When grads is null only the loss is computed.
double evaluate(const PreparedData& prepared, const UtilityNet& net, NetGrads* grads) {
  const double inv_n = 1.0 / static_cast<double>(prepared.num_comparisons);
  double loss = 0.0;

  auto backprop_pair = [&](const Item& first, const Item& second, double g) {
    ForwardCache cw, cl;
    utility(net, first, cw);
    utility(net, second, cl);
    backward(net, cw, g, *grads);
    backward(net, cl, -g, *grads);
  };

  switch (prepared.kind) {
    case LearnerKind::BT:
      for (const auto& p : prepared.pairs) {
        const double s = strength_score(net, p.winner, p.loser);
        loss += bt_bce(s, true) * inv_n;
        if (grads) backprop_pair(p.winner, p.loser, bt_bce_grad(s, true) * inv_n);
      }
      break;
    case LearnerKind::RR:
    case LearnerKind::RR_Pool:
    case LearnerKind::RR_Perm:
      for (const auto& ranking : prepared.rankings) {
        std::vector<double> scores;
        scores.reserve(ranking.ordered.size());
        for (const auto& q : ranking.ordered) {
          scores.push_back(strength_score(net, q.winner, q.loser));
        }
        loss += pl_nll(scores) * inv_n;
        if (grads) {
          const auto gs = pl_nll_grad(scores);
          for (std::size_t j = 0; j < gs.size(); ++j) {
            backprop_pair(ranking.ordered[j].winner, ranking.ordered[j].loser,
                          gs[j] * inv_n);
          }
        }
      }
      break;
    case LearnerKind::RtReg:
    case LearnerKind::RtReg_Perm:
      for (const auto& e : prepared.regression) {
        const double s = strength_score(net, e.a, e.b);
        loss += mse(s, e.target) * inv_n;
        if (grads) backprop_pair(e.a, e.b, mse_grad(s, e.target) * inv_n);
      }
      break;
  }
  return loss;
}

}  // namespace

double loss_and_grads(const PreparedData& prepared, const UtilityNet& net,
                      NetGrads& grads) {
  return evaluate(prepared, net, &grads);
}

double loss_only(const PreparedData& prepared, const UtilityNet& net) {
  return evaluate(prepared, net, nullptr);
}

UtilityNet fit(LearnerKind kind, const std::vector<Comparison>& train,
               const TrainConfig& cfg, std::uint64_t seed) {
  if (train.empty()) throw std::invalid_argument("fit: empty training set");
  Rng prep_rng(substream(seed, 0x70726570));  // "prep"
  Rng init_rng(substream(seed, 0x696e6974));  // "init"

  const PreparedData prepared = prepare(kind, train, cfg, prep_rng);
  UtilityNet net = init_net({train.front().a.size(), cfg.hidden, 1}, init_rng);

  NetGrads grads = make_grads_like(net);
  AdamWState state = make_adamw_state(net, cfg.adamw);
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    grads.zero();
    const double loss = loss_and_grads(prepared, net, grads);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("fit: non-finite loss at step " + std::to_string(step));
    }
    adamw_step(net, grads, state);
  }
  return net;
}

}  // namespace prefrank
