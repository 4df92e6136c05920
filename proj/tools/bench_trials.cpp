// Benchmark: serial reference trial loop vs the OpenMP work pool, verifying
// that both paths produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "prefrank/harness.hpp"

using namespace prefrank;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_results(const std::vector<TrialResult>& a, const std::vector<TrialResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].cells.size() != b[i].cells.size()) return false;
    for (std::size_t c = 0; c < a[i].cells.size(); ++c) {
      const auto& x = a[i].cells[c];
      const auto& y = b[i].cells[c];
      if (x.pdc_defined != y.pdc_defined || x.accuracy != y.accuracy ||
          (x.pdc_defined && x.pdc != y.pdc)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  cfg.kind = LabelerKind::StochasticBT;
  cfg.trials = argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 16;
  cfg.fractions = {1.0};

  std::printf("trials=%zu learners=%zu fractions=%zu\n", cfg.trials,
              cfg.learners.size(), cfg.fractions.size());

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = run_trials(cfg, 1);
  const double t_serial = seconds_since(t0);
  std::printf("serial:   %.3f s\n", t_serial);

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  t0 = std::chrono::steady_clock::now();
  const auto parallel = run_trials(cfg, hw);
  const double t_parallel = seconds_since(t0);
  std::printf("parallel: %.3f s (%d threads, speedup %.2fx)\n", t_parallel, hw,
              t_serial / t_parallel);

  if (!same_results(serial, parallel)) {
    std::printf("FAIL: serial and parallel results differ\n");
    return 1;
  }
  std::printf("OK: serial and parallel results identical\n");
  return 0;
}
