#pragma once

#include <vector>

namespace prefrank {

struct LinkConfig {
  double rt_min = 0.0;
  double rt_max = 10.0;
};

// Anchored Plackett-Luce negative log-likelihood of an ordered score list
// [s_1, ..., s_k] with an implicit trailing anchor of score 0:
//   -sum_j [ s_j - log(sum_{i>=j} exp(s_i) + exp(0)) ]
// Stabilized with a per-stage running max.
double pl_nll(const std::vector<double>& scores);

// dNLL/ds_j = -1 + sum over stages j' <= j of the softmax weight of s_j.
std::vector<double> pl_nll_grad(const std::vector<double>& scores);

// Bradley-Terry binary cross-entropy: -log sigmoid(s) for a win,
// -log sigmoid(-s) for a loss. Stable at large |s|.
double bt_bce(double score, bool win);
double bt_bce_grad(double score, bool win);

// Hyperbolic link: rt_min + (rt_max - rt_min) / (|du| + 1).
double link(double delta_u, const LinkConfig& cfg = {});

// Inverse link, clamped below at 0 for rt > rt_max. Throws for rt <= rt_min.
double link_inverse(double rt, const LinkConfig& cfg = {});

// Signed regression target: +link_inverse for an A win, - for a B win.
double rt_regression_target(bool a_preferred, double rt, const LinkConfig& cfg = {});

double mse(double pred, double target);
double mse_grad(double pred, double target);

}  // namespace prefrank
