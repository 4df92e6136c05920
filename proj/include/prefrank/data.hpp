#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prefrank {

// An item is a fixed-length attribute vector with entries in [0, 1].
using Item = std::vector<double>;

enum class Preference { A, B };

inline const char* to_string(Preference p) {
  return p == Preference::A ? "A" : "B";
}

// One labeled pairwise comparison. `strength` is the strength signal
// (a response time in seconds; lower means stronger preference).
struct Comparison {
  Item a;
  Item b;
  Preference preference = Preference::A;
  double strength = 0.0;
  int stratum_id = 0;
};

enum class LabelerKind { Deterministic, StochasticBT, DDM };

inline const char* to_string(LabelerKind k) {
  switch (k) {
    case LabelerKind::Deterministic: return "deterministic";
    case LabelerKind::StochasticBT: return "stochastic";
    case LabelerKind::DDM: return "ddm";
  }
  return "?";
}

// Parameters of the synthetic choice / response-time models.
struct LabelerConfig {
  LabelerKind kind = LabelerKind::Deterministic;
  double choice_temperature = 0.2;
  double rt_sd = 0.4;  // log-space SD of the log-normal RT model
  double rt_min = 0.0;
  double rt_max = 10.0;
  double ddm_threshold = 1.2;  // boundary separation; boundaries at +-a/2
  double ddm_nondecision = 0.3;
  double ddm_drift_mult = 1.0;
  double ddm_noise_sd = 0.4;
  double ddm_dt = 0.001;
  int num_strata = 5;
  double stratum_rt_sd = 3.0;
};

}  // namespace prefrank
