#pragma once

#include <vector>

#include "prefrank/data.hpp"
#include "prefrank/net.hpp"
#include "prefrank/rng.hpp"

namespace prefrank {

// Sample Pearson correlation. Throws when either series has zero variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson Distance Correlation: correlation between true and predicted
// absolute utility differences over item pairs.
double pdc(const std::vector<double>& true_abs, const std::vector<double>& pred_abs);

struct DegradeConfig {
  double f_sign = 0.0;  // fraction of pairs with flipped sign
  double f_mag = 0.0;   // fraction of pairs with shuffled magnitudes
};

// Degrades signed predicted differences in place: flips the sign of a random
// f_sign fraction, then shuffles the magnitudes of a random f_mag fraction
// among themselves (signs stay put).
void degrade(std::vector<double>& pred_signed, const DegradeConfig& cfg, Rng& rng);

// Fraction of test comparisons whose predicted utility-difference sign
// matches the label; exact zeros score 0.5.
double choice_accuracy(const UtilityNet& net, const std::vector<Comparison>& test);

// Mean absolute distance between predicted confidences and true likelihoods.
double tce(const std::vector<double>& pred_conf, const std::vector<double>& true_lik);

// Kendall's tau-b (tie adjusted). Throws when either series is all-tied.
double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace prefrank
