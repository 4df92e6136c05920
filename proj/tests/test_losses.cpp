#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prefrank/losses.hpp"
#include "prefrank/rng.hpp"
#include "test_util.hpp"

using namespace prefrank;

namespace {

// Brute-force oracle: probability of the given order (anchor included as
// score 0 at its position) under the sequential-softmax model.
double ordering_probability(const std::vector<double>& scores_with_anchor) {
  double prob = 1.0;
  double remaining = 0.0;
  for (double s : scores_with_anchor) remaining += std::exp(s);
  for (double s : scores_with_anchor) {
    prob *= std::exp(s) / remaining;
    remaining -= std::exp(s);
  }
  return prob;
}

}  // namespace

TEST_CASE("pl_nll hand values") {
  CHECK(pl_nll({0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(pl_nll({0.0, 0.0}) == doctest::Approx(std::log(3.0) + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("pl_nll equals brute-force sequential product") {
  Rng rng(7);
  for (int k = 1; k <= 5; ++k) {
    std::vector<double> scores(k);
    for (auto& s : scores) s = rng.uniform(-3.0, 3.0);
    std::vector<double> with_anchor = scores;
    with_anchor.push_back(0.0);
    CHECK(pl_nll(scores) ==
          doctest::Approx(-std::log(ordering_probability(with_anchor))).epsilon(1e-10));
  }
}

TEST_CASE("pl probabilities over all orderings sum to 1") {
  Rng rng(11);
  for (int k = 1; k <= 5; ++k) {
    std::vector<double> with_anchor(k + 1);
    for (int i = 0; i < k; ++i) with_anchor[i] = rng.uniform(-2.0, 2.0);
    with_anchor[k] = 0.0;

    std::vector<std::size_t> idx(with_anchor.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end());
    double total = 0.0;
    do {
      std::vector<double> perm;
      for (std::size_t i : idx) perm.push_back(with_anchor[i]);
      total += ordering_probability(perm);
    } while (std::next_permutation(idx.begin(), idx.end()));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pl_nll_grad hand value and finite differences") {
  CHECK(pl_nll_grad({0.0})[0] == doctest::Approx(-0.5).epsilon(1e-12));

  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 1 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> scores(k);
    for (auto& s : scores) s = rng.uniform(-4.0, 4.0);
    const auto grad = pl_nll_grad(scores);
    for (int j = 0; j < k; ++j) {
      std::vector<double> work = scores;
      const double num = testing::fd(
          [&](double x) {
            work[j] = x;
            return pl_nll(work);
          },
          scores[j]);
      CHECK(testing::rel_err(grad[j], num) < 1e-6);
    }
  }
}

TEST_CASE("pl_nll_grad sum matches stage-weight identity") {
  Rng rng(5);
  std::vector<double> scores{0.3, -1.2, 0.7, 2.1};
  const auto grad = pl_nll_grad(scores);
  const double grad_sum = std::accumulate(grad.begin(), grad.end(), 0.0);
  // Each stage's softmax over non-anchor entries sums to 1 minus the
  // anchor weight at that stage.
  double expected = -static_cast<double>(scores.size());
  for (std::size_t stage = 0; stage < scores.size(); ++stage) {
    double z = 1.0;  // anchor
    for (std::size_t i = stage; i < scores.size(); ++i) z += std::exp(scores[i]);
    expected += 1.0 - 1.0 / z;
  }
  CHECK(grad_sum == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("pl_nll monotone in the top score") {
  std::vector<double> scores{0.5, -0.3, 1.1};
  const double base = pl_nll(scores);
  scores[0] += 0.25;
  CHECK(pl_nll(scores) < base);
}

TEST_CASE("bt_bce values and stability") {
  CHECK(bt_bce(0.0, true) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bt_bce(0.0, false) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bt_bce(std::log(3.0), true) == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
  const double saturated = bt_bce(50.0, true);
  CHECK(saturated < 1e-20);
  CHECK(std::isfinite(saturated));
  CHECK(std::isfinite(bt_bce(-750.0, true)));

  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const double s = rng.uniform(-8.0, 8.0);
    const bool win = rng.bernoulli(0.5);
    const double num = testing::fd([&](double x) { return bt_bce(x, win); }, s);
    CHECK(testing::rel_err(bt_bce_grad(s, win), num) < 1e-6);
  }
}

TEST_CASE("singleton ranking loss equals BT cross-entropy") {
  Rng rng(42);
  for (int rep = 0; rep < 1000; ++rep) {
    const double s = rng.uniform(-10.0, 10.0);
    CHECK(std::abs(pl_nll({s}) - bt_bce(s, true)) < 1e-12);
    CHECK(std::abs(pl_nll_grad({s})[0] - bt_bce_grad(s, true)) < 1e-12);
  }
}

TEST_CASE("hyperbolic link and inverse") {
  CHECK(link(0.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(link(1.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(link(9.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(link(-1.0) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK(link_inverse(5.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(link_inverse(10.0) == doctest::Approx(0.0));
  CHECK(link_inverse(12.0) == 0.0);
  CHECK_THROWS(link_inverse(0.0));
  CHECK_THROWS(link_inverse(-1.0));

  Rng rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const double rt = rng.uniform(1e-3, 10.0);
    CHECK(std::abs(link(link_inverse(rt)) - rt) < 1e-12);
  }
}

TEST_CASE("rt regression target") {
  CHECK(rt_regression_target(true, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rt_regression_target(false, 5.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rt_regression_target(true, 10.0) == 0.0);
  CHECK(rt_regression_target(false, 10.0) == 0.0);
}

TEST_CASE("mse") {
  CHECK(mse(3.0, 3.0) == 0.0);
  CHECK(mse(2.0, 0.0) == 4.0);
  const double num = testing::fd([](double x) { return mse(x, 0.7); }, 1.3);
  CHECK(testing::rel_err(mse_grad(1.3, 0.7), num) < 1e-6);
}
