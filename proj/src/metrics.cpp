#include "prefrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace prefrank {

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("pearson: need two equal-length series of size >= 2");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::runtime_error("pearson: zero variance, correlation undefined");
  }
  return sxy / std::sqrt(sxx * syy);
}

double pdc(const std::vector<double>& true_abs, const std::vector<double>& pred_abs) {
  return pearson(true_abs, pred_abs);
}

namespace {

// Picks round(f * n) distinct indices uniformly at random.
std::vector<std::size_t> pick_fraction(std::size_t n, double f, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);
  const auto count = static_cast<std::size_t>(std::lround(f * static_cast<double>(n)));
  idx.resize(std::min(count, n));
  return idx;
}

}  // namespace

void degrade(std::vector<double>& pred_signed, const DegradeConfig& cfg, Rng& rng) {
  for (std::size_t i : pick_fraction(pred_signed.size(), cfg.f_sign, rng)) {
    pred_signed[i] = -pred_signed[i];
  }
  const auto mag_idx = pick_fraction(pred_signed.size(), cfg.f_mag, rng);
  std::vector<double> mags;
  mags.reserve(mag_idx.size());
  for (std::size_t i : mag_idx) mags.push_back(std::abs(pred_signed[i]));
  rng.shuffle(mags);
  for (std::size_t j = 0; j < mag_idx.size(); ++j) {
    const double sign = pred_signed[mag_idx[j]] < 0.0 ? -1.0 : 1.0;
    pred_signed[mag_idx[j]] = sign * mags[j];
  }
}

double choice_accuracy(const UtilityNet& net, const std::vector<Comparison>& test) {
  if (test.empty()) throw std::invalid_argument("choice_accuracy: empty test set");
  double correct = 0.0;
  for (const auto& c : test) {
    const double s = strength_score(net, c.a, c.b);
    if (s == 0.0) {
      correct += 0.5;
    } else if ((s > 0.0) == (c.preference == Preference::A)) {
      correct += 1.0;
    }
  }
  return correct / static_cast<double>(test.size());
}

double tce(const std::vector<double>& pred_conf, const std::vector<double>& true_lik) {
  if (pred_conf.size() != true_lik.size() || pred_conf.empty()) {
    throw std::invalid_argument("tce: need equal-length nonempty series");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred_conf.size(); ++i) {
    acc += std::abs(pred_conf[i] - true_lik[i]);
  }
  return acc / static_cast<double>(pred_conf.size());
}

double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("kendall_tau: need two equal-length series of size >= 2");
  }
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      if (dx == 0.0) ++tied_x;
      if (dy == 0.0) ++tied_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = 0.5 * static_cast<double>(xs.size()) * static_cast<double>(xs.size() - 1);
  const double denom_x = n0 - static_cast<double>(tied_x);
  const double denom_y = n0 - static_cast<double>(tied_y);
  if (denom_x <= 0.0 || denom_y <= 0.0) {
    throw std::runtime_error("kendall_tau: all-tied series, tau undefined");
  }
  return static_cast<double>(concordant - discordant) / std::sqrt(denom_x * denom_y);
}

}  // namespace prefrank
