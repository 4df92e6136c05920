#pragma once

#include <cstddef>
#include <vector>

#include "prefrank/data.hpp"
#include "prefrank/rng.hpp"

namespace prefrank {

// Feed-forward scalar-output network, ReLU hidden layers, identity output.
// Weights are row-major (out x in). All arithmetic is in doubles.
struct UtilityNet {
  std::vector<std::size_t> layer_sizes;          // e.g. {20, 64, 1}
  std::vector<std::vector<double>> weights;      // per layer
  std::vector<std::vector<double>> biases;       // per layer

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t num_layers() const { return weights.size(); }
};

// Gradient (or moment) buffers shaped like a net's parameters.
struct NetGrads {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  void zero();
};

NetGrads make_grads_like(const UtilityNet& net);

// Hidden activations cached by a forward pass, consumed by backward().
struct ForwardCache {
  std::vector<std::vector<double>> activations;  // input + post-ReLU per hidden layer
  double output = 0.0;
};

// Weights iid N(0, 2/fan_in), biases 0.
UtilityNet init_net(const std::vector<std::size_t>& layer_sizes, Rng& rng);

double utility(const UtilityNet& net, const Item& item);
double utility(const UtilityNet& net, const Item& item, ForwardCache& cache);

// Accumulates d(out)/d(params) * upstream into grads.
void backward(const UtilityNet& net, const ForwardCache& cache, double upstream,
              NetGrads& grads);

// u(winner) - u(loser).
double strength_score(const UtilityNet& net, const Item& winner, const Item& loser);

struct AdamWConfig {
  double lr = 0.001;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamWState {
  AdamWConfig cfg;
  std::size_t step = 0;
  NetGrads m;
  NetGrads v;
};

AdamWState make_adamw_state(const UtilityNet& net, const AdamWConfig& cfg);

// One decoupled-weight-decay Adam step. Throws on non-finite gradients.
void adamw_step(UtilityNet& net, const NetGrads& grads, AdamWState& state);

}  // namespace prefrank
