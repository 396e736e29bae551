#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsk/hyperparameters.hpp"
#include "gsk/rng.hpp"
#include "gsk/types.hpp"

namespace gsk {

// Initialization ranges per parameter role. Amplitudes and inverse scales are
// sampled log-uniformly over [lo, hi]; frequencies uniformly over [lo, hi];
// the noise slot is set to noise_init (not sampled).
struct InitRanges {
  double amplitude_lo = 0.1, amplitude_hi = 1.0;
  double inverse_scale_lo = 0.1, inverse_scale_hi = 2.0;
  double frequency_lo = 0.0, frequency_hi = 3.0;
  double noise_init = 1e-2;
};

struct OptimizerConfig {
  int max_iterations = 2000;
  double gradient_tolerance = 1e-6;  // infinity norm
  int restarts = 1;
  std::uint64_t seed = 0;
  InitRanges init;
  int lbfgs_memory = 10;
};

struct FitReport {
  Vec best_params;
  double best_objective = 0.0;
  int best_restart = -1;
  std::vector<std::vector<double>> traces;  // objective per iteration, per restart
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

// Objective: returns the value at x and fills grad (same size as x).
using ObjectiveFn = std::function<double(const Vec& x, Vec& grad)>;

// Initial point for a restart; rng is the restart's private stream.
using InitSampler = std::function<Vec(int restart, Rng& rng)>;

// L-BFGS with backtracking line search, restarted cfg.restarts times from
// sampled initial points. Restarts run concurrently (per-restart seeded
// streams keep the result deterministic); the best restart wins, ties broken
// by lowest index. A restart whose initial objective is non-finite resamples
// up to 100 times before the whole call fails.
FitReport minimize(const ObjectiveFn& objective, const InitSampler& sample_init,
                   const OptimizerConfig& config);

// Role-based random initial HyperVector for a kernel template.
Vec sample_initial(const KernelTemplate& tmpl, const InitRanges& ranges, Rng& rng);

}  // namespace gsk
