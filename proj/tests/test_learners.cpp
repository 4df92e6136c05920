#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "prefrank/learners.hpp"
#include "test_util.hpp"

using namespace prefrank;

namespace {

std::vector<Comparison> tie_free_comparisons(std::size_t n, std::size_t d, Rng& rng) {
  auto comps = testing::random_comparisons(n, d, 5, rng);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    comps[i].strength = 1.0 + static_cast<double>(i) * 0.01 + rng.uniform(0.0, 0.005);
  }
  return comps;
}

std::size_t count_comparisons(const PreparedData& p) {
  switch (p.kind) {
    case LearnerKind::BT:
      return p.pairs.size();
    case LearnerKind::RtReg:
    case LearnerKind::RtReg_Perm:
      return p.regression.size();
    default: {
      std::size_t n = 0;
      for (const auto& r : p.rankings) n += r.ordered.size();
      return n;
    }
  }
}

}  // namespace

TEST_CASE("learner names round-trip") {
  for (LearnerKind k : all_learners()) {
    const auto back = learner_from_string(to_string(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK(!learner_from_string("nope").has_value());
}

TEST_CASE("prepare conserves comparisons for every learner") {
  Rng rng(1);
  const auto train = tie_free_comparisons(50, 4, rng);
  TrainConfig cfg;
  for (LearnerKind k : all_learners()) {
    Rng prng(2);
    const auto prepared = prepare(k, train, cfg, prng);
    CHECK(prepared.num_comparisons == 50);
    CHECK(count_comparisons(prepared) == 50);
  }
}

TEST_CASE("prepare BT pairs are normalized") {
  Rng rng(3);
  auto train = testing::random_comparisons(20, 3, 1, rng);
  TrainConfig cfg;
  Rng prng(4);
  const auto prepared = prepare(LearnerKind::BT, train, cfg, prng);
  REQUIRE(prepared.pairs.size() == 20);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& expect_winner = train[i].preference == Preference::A ? train[i].a : train[i].b;
    CHECK(prepared.pairs[i].winner == expect_winner);
  }
}

TEST_CASE("prepare RR rankings are strength-sorted and tie-free") {
  Rng rng(5);
  const auto tied = testing::random_comparisons(50, 4, 5, rng, /*allow_ties=*/true);
  const auto tie_free = tie_free_comparisons(50, 4, rng);
  TrainConfig cfg;
  for (LearnerKind k : {LearnerKind::RR, LearnerKind::RR_Pool, LearnerKind::RR_Perm}) {
    // Heavily tied strengths would exceed the pooled batch cap by design.
    const auto& train = k == LearnerKind::RR_Pool ? tie_free : tied;
    Rng prng(6);
    const auto prepared = prepare(k, train, cfg, prng);
    CHECK(!prepared.rankings.empty());
    for (const auto& r : prepared.rankings) {
      for (std::size_t j = 1; j < r.ordered.size(); ++j) {
        CHECK(r.ordered[j - 1].strength < r.ordered[j].strength);
      }
    }
  }
}

TEST_CASE("pooled rankings respect the batch-size cap") {
  Rng rng(7);
  const auto train = tie_free_comparisons(50, 3, rng);
  TrainConfig cfg;  // default cap: ceil(50 / 5) = 10
  Rng prng(8);
  const auto prepared = prepare(LearnerKind::RR_Pool, train, cfg, prng);
  CHECK(prepared.rankings.size() == 5);
  for (const auto& r : prepared.rankings) CHECK(r.ordered.size() <= 10);

  TrainConfig cfg2;
  cfg2.pool_batch_size = 7;
  Rng prng2(8);
  const auto prepared2 = prepare(LearnerKind::RR_Pool, train, cfg2, prng2);
  for (const auto& r : prepared2.rankings) CHECK(r.ordered.size() <= 7);
}

TEST_CASE("perm variants keep items and labels, permute strengths") {
  Rng rng(9);
  const auto train = tie_free_comparisons(30, 3, rng);
  TrainConfig cfg;

  Rng prng(10);
  const auto prepared = prepare(LearnerKind::RtReg_Perm, train, cfg, prng);
  REQUIRE(prepared.regression.size() == 30);
  std::multiset<double> targets_perm, targets_orig;
  bool any_moved = false;
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(prepared.regression[i].a == train[i].a);
    CHECK(prepared.regression[i].b == train[i].b);
    const double orig_target = rt_regression_target(
        train[i].preference == Preference::A, train[i].strength, cfg.link);
    // Signs come from the unpermuted labels.
    CHECK(std::signbit(prepared.regression[i].target) == std::signbit(orig_target));
    targets_orig.insert(std::abs(orig_target));
    targets_perm.insert(std::abs(prepared.regression[i].target));
    any_moved = any_moved || prepared.regression[i].target != orig_target;
  }
  CHECK(targets_orig == targets_perm);
  CHECK(any_moved);

  Rng prng2(11);
  const auto rr_perm = prepare(LearnerKind::RR_Perm, train, cfg, prng2);
  std::multiset<double> strengths_in, strengths_out;
  for (const auto& c : train) strengths_in.insert(c.strength);
  for (const auto& r : rr_perm.rankings) {
    for (const auto& q : r.ordered) strengths_out.insert(q.strength);
  }
  CHECK(strengths_in == strengths_out);
}

TEST_CASE("zero net losses have closed forms") {
  Rng rng(12);
  const auto train = tie_free_comparisons(25, 3, rng);
  TrainConfig cfg;

  UtilityNet zero;
  zero.layer_sizes = {3, 2, 1};
  zero.weights = {std::vector<double>(6, 0.0), std::vector<double>(2, 0.0)};
  zero.biases = {{0.0, 0.0}, {0.0}};

  // BT: every score 0 -> mean loss ln 2.
  Rng prng(13);
  const auto bt = prepare(LearnerKind::BT, train, cfg, prng);
  CHECK(loss_only(bt, zero) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // RtReg: mean of target^2.
  Rng prng2(14);
  const auto rt = prepare(LearnerKind::RtReg, train, cfg, prng2);
  double expect = 0.0;
  for (const auto& e : rt.regression) expect += e.target * e.target;
  expect /= static_cast<double>(rt.regression.size());
  CHECK(loss_only(rt, zero) == doctest::Approx(expect).epsilon(1e-12));

  // RR: sum over rankings of the all-zero-scores closed form, / n.
  Rng prng3(15);
  const auto rr = prepare(LearnerKind::RR, train, cfg, prng3);
  double expect_rr = 0.0;
  for (const auto& r : rr.rankings) {
    for (std::size_t j = r.ordered.size(); j >= 1; --j) {
      expect_rr += std::log(static_cast<double>(j) + 1.0);
    }
  }
  expect_rr /= static_cast<double>(train.size());
  CHECK(loss_only(rr, zero) == doctest::Approx(expect_rr).epsilon(1e-12));
}

TEST_CASE("loss_and_grads matches finite differences for every learner") {
  Rng rng(16);
  const auto train = tie_free_comparisons(12, 3, rng);
  TrainConfig cfg;
  for (LearnerKind k : all_learners()) {
    Rng prng(17);
    const auto prepared = prepare(k, train, cfg, prng);
    auto net = init_net({3, 5, 1}, rng);
    auto grads = make_grads_like(net);
    loss_and_grads(prepared, net, grads);
    const auto analytic = testing::flat_grads(grads);
    const auto numeric =
        testing::fd_net_gradient(net, [&] { return loss_only(prepared, net); });
    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      CHECK(std::abs(analytic[i] - numeric[i]) < 1e-5);
    }
  }
}

TEST_CASE("singleton-ranking RR matches BT") {
  // One comparison per stratum: every ranking is a singleton, so the ranking
  // loss reduces to BT. Trajectories agree to numerical noise.
  Rng rng(18);
  auto train = tie_free_comparisons(10, 3, rng);
  for (std::size_t i = 0; i < train.size(); ++i) {
    train[i].stratum_id = static_cast<int>(i);
  }
  TrainConfig cfg;
  cfg.steps = 50;
  cfg.hidden = 8;

  const auto net_bt = fit(LearnerKind::BT, train, cfg, 77);
  const auto net_rr = fit(LearnerKind::RR, train, cfg, 77);

  Rng prng(19);
  const auto bt = prepare(LearnerKind::BT, train, cfg, prng);
  Rng prng2(20);
  const auto rr = prepare(LearnerKind::RR, train, cfg, prng2);
  UtilityNet probe = net_bt;
  CHECK(std::abs(loss_only(bt, probe) - loss_only(rr, probe)) < 1e-12);

  double max_diff = 0.0;
  for (std::size_t l = 0; l < net_bt.weights.size(); ++l) {
    for (std::size_t i = 0; i < net_bt.weights[l].size(); ++i) {
      max_diff = std::max(max_diff, std::abs(net_bt.weights[l][i] - net_rr.weights[l][i]));
    }
  }
  CHECK(max_diff < 1e-9);
}

TEST_CASE("fit is deterministic per seed and sensitive to it") {
  Rng rng(21);
  const auto train = tie_free_comparisons(15, 3, rng);
  TrainConfig cfg;
  cfg.steps = 30;
  cfg.hidden = 8;

  const auto n1 = fit(LearnerKind::RR, train, cfg, 5);
  const auto n2 = fit(LearnerKind::RR, train, cfg, 5);
  CHECK(n1.weights == n2.weights);
  CHECK(n1.biases == n2.biases);

  const auto n3 = fit(LearnerKind::RR, train, cfg, 6);
  CHECK(n1.weights != n3.weights);
}

TEST_CASE("training reduces the loss") {
  Rng rng(22);
  int improved = 0;
  const int runs = 20;
  for (int run = 0; run < runs; ++run) {
    const auto train = tie_free_comparisons(20, 4, rng);
    const LearnerKind k = all_learners()[static_cast<std::size_t>(run) % 6];
    TrainConfig cfg;
    cfg.steps = 100;
    cfg.hidden = 16;

    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(run);
    Rng prep_rng(substream(seed, 0x70726570));
    Rng init_rng(substream(seed, 0x696e6974));
    const auto prepared = prepare(k, train, cfg, prep_rng);
    const auto net0 = init_net({4, cfg.hidden, 1}, init_rng);
    const double before = loss_only(prepared, net0);

    const auto net = fit(k, train, cfg, seed);
    const double after = loss_only(prepared, net);
    improved += after < before;
  }
  CHECK(improved >= 19);

  CHECK_THROWS(fit(LearnerKind::BT, {}, TrainConfig{}, 1));
}
