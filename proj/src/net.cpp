#include "prefrank/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace prefrank {

void NetGrads::zero() {
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

NetGrads make_grads_like(const UtilityNet& net) {
  NetGrads g;
  g.weights.reserve(net.weights.size());
  g.biases.reserve(net.biases.size());
  for (const auto& w : net.weights) g.weights.emplace_back(w.size(), 0.0);
  for (const auto& b : net.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

UtilityNet init_net(const std::vector<std::size_t>& layer_sizes, Rng& rng) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("init_net: need at least input and output layer");
  }
  UtilityNet net;
  net.layer_sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t fan_in = layer_sizes[l];
    const std::size_t fan_out = layer_sizes[l + 1];
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
    std::vector<double> w(fan_out * fan_in);
    for (auto& x : w) x = rng.normal(0.0, sd);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(fan_out, 0.0);
  }
  return net;
}

double utility(const UtilityNet& net, const Item& item, ForwardCache& cache) {
  if (item.size() != net.input_dim()) {
    throw std::invalid_argument("utility: item dimension mismatch");
  }
  cache.activations.assign(1, item);
  std::vector<double> cur = item;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const std::size_t out = net.layer_sizes[l + 1];
    const std::size_t in = net.layer_sizes[l];
    std::vector<double> next(out);
    const double* w = net.weights[l].data();
    for (std::size_t o = 0; o < out; ++o) {
      double acc = net.biases[l][o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * cur[i];
      // ReLU on hidden layers, identity on the output layer.
      next[o] = (l + 1 < net.num_layers()) ? std::max(acc, 0.0) : acc;
    }
    cur = std::move(next);
    if (l + 1 < net.num_layers()) cache.activations.push_back(cur);
  }
  cache.output = cur[0];
  return cache.output;
}

double utility(const UtilityNet& net, const Item& item) {
  ForwardCache cache;
  return utility(net, item, cache);
}

void backward(const UtilityNet& net, const ForwardCache& cache, double upstream,
              NetGrads& grads) {
  // delta starts as d(loss)/d(output).
  std::vector<double> delta(1, upstream);
  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const std::size_t out = net.layer_sizes[l + 1];
    const std::size_t in = net.layer_sizes[l];
    const auto& act = cache.activations[l];
    const double* w = net.weights[l].data();
    std::vector<double> prev_delta(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      grads.biases[l][o] += d;
      double* grow = grads.weights[l].data() + o * in;
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        grow[i] += d * act[i];
        prev_delta[i] += d * row[i];
      }
    }
    if (l > 0) {
      // ReLU gate: post-activation of layer l-1 is zero where the unit was off.
      for (std::size_t i = 0; i < in; ++i) {
        if (cache.activations[l][i] <= 0.0) prev_delta[i] = 0.0;
      }
    }
    delta = std::move(prev_delta);
  }
}

double strength_score(const UtilityNet& net, const Item& winner, const Item& loser) {
  return utility(net, winner) - utility(net, loser);
}

AdamWState make_adamw_state(const UtilityNet& net, const AdamWConfig& cfg) {
  AdamWState s;
  s.cfg = cfg;
  s.m = make_grads_like(net);
  s.v = make_grads_like(net);
  return s;
}

namespace {

void adamw_update(std::vector<double>& param, const std::vector<double>& grad,
                  std::vector<double>& m, std::vector<double>& v,
                  const AdamWConfig& cfg, double bc1, double bc2,
                  const char* what) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) {
      throw std::runtime_error(std::string("adamw_step: non-finite gradient in ") + what);
    }
    param[i] -= cfg.lr * cfg.weight_decay * param[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

}  // namespace

void adamw_step(UtilityNet& net, const NetGrads& grads, AdamWState& state) {
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(state.cfg.beta2, t);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    adamw_update(net.weights[l], grads.weights[l], state.m.weights[l],
                 state.v.weights[l], state.cfg, bc1, bc2, "weights");
    adamw_update(net.biases[l], grads.biases[l], state.m.biases[l],
                 state.v.biases[l], state.cfg, bc1, bc2, "biases");
  }
}

}  // namespace prefrank
