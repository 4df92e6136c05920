#include "prefrank/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prefrank {

namespace {

// log(sum exp(tail of scores) + exp(0)), where the anchor contributes exp(0).
double log_sum_exp_with_anchor(const std::vector<double>& scores, std::size_t from) {
  double mx = 0.0;  // anchor score
  for (std::size_t i = from; i < scores.size(); ++i) mx = std::max(mx, scores[i]);
  double acc = std::exp(-mx);  // anchor term
  for (std::size_t i = from; i < scores.size(); ++i) acc += std::exp(scores[i] - mx);
  return mx + std::log(acc);
}

}  // namespace

double pl_nll(const std::vector<double>& scores) {
  double nll = 0.0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    nll -= scores[j] - log_sum_exp_with_anchor(scores, j);
  }
  return nll;
}

std::vector<double> pl_nll_grad(const std::vector<double>& scores) {
  const std::size_t k = scores.size();
  std::vector<double> grad(k, -1.0);
  for (std::size_t stage = 0; stage < k; ++stage) {
    const double lse = log_sum_exp_with_anchor(scores, stage);
    for (std::size_t i = stage; i < k; ++i) {
      grad[i] += std::exp(scores[i] - lse);
    }
  }
  return grad;
}

double bt_bce(double score, bool win) {
  const double s = win ? score : -score;
  // -log sigmoid(s) = log(1 + exp(-s)), stable for both signs.
  return s > 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
}

double bt_bce_grad(double score, bool win) {
  const double s = win ? score : -score;
  const double sig = s > 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
  const double d = -(1.0 - sig);  // d/ds of -log sigmoid(s)
  return win ? d : -d;
}

double link(double delta_u, const LinkConfig& cfg) {
  return cfg.rt_min + (cfg.rt_max - cfg.rt_min) / (std::abs(delta_u) + 1.0);
}

double link_inverse(double rt, const LinkConfig& cfg) {
  if (rt <= cfg.rt_min) {
    throw std::invalid_argument("link_inverse: rt at or below rt_min");
  }
  if (rt > cfg.rt_max) return 0.0;
  return (cfg.rt_max - cfg.rt_min) / (rt - cfg.rt_min) - 1.0;
}

double rt_regression_target(bool a_preferred, double rt, const LinkConfig& cfg) {
  const double mag = link_inverse(rt, cfg);
  return a_preferred ? mag : -mag;
}

double mse(double pred, double target) {
  const double d = pred - target;
  return d * d;
}

double mse_grad(double pred, double target) { return 2.0 * (pred - target); }

}  // namespace prefrank
