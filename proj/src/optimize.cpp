#include "gsk/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "gsk/parallel.hpp"

namespace gsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RestartResult {
  Vec x;
  double fx = kInf;
  std::vector<double> trace;
};

// One L-BFGS run from x0 with the objective and gradient already evaluated
// there. The line search is backtracking Armijo; pairs that fail the
// curvature condition are skipped so the inverse-Hessian estimate stays
// positive definite.
RestartResult lbfgs_run(const ObjectiveFn& objective, Vec x, double f0,
                        Vec grad, const OptimizerConfig& cfg) {
  RestartResult res;
  const Eigen::Index n = x.size();
  double fx = f0;
  res.trace.push_back(fx);

  std::deque<std::pair<Vec, Vec>> memory;  // (s, y) pairs
  Vec direction(n), x_new(n), grad_new(n);

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (!grad.allFinite()) break;
    if (grad.lpNorm<Eigen::Infinity>() < cfg.gradient_tolerance) break;

    // Two-loop recursion.
    direction = -grad;
    std::vector<double> alphas(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, yv] = memory[i];
      const double rho = 1.0 / yv.dot(s);
      alphas[i] = rho * s.dot(direction);
      direction -= alphas[i] * yv;
    }
    if (!memory.empty()) {
      const auto& [s, yv] = memory.back();
      direction *= s.dot(yv) / yv.squaredNorm();
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, yv] = memory[i];
      const double rho = 1.0 / yv.dot(s);
      const double beta = rho * yv.dot(direction);
      direction += (alphas[i] - beta) * s;
    }

    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {  // not a descent direction; fall back to steepest
      memory.clear();
      direction = -grad;
      slope = grad.dot(direction);
      if (!(slope < 0.0)) break;
    }

    // Backtracking Armijo search.
    constexpr double c1 = 1e-4;
    double step = 1.0;
    double f_new = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * direction;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && f_new <= fx + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no admissible step along this direction

    const Vec s = x_new - x;
    const Vec yv = grad_new - grad;
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      memory.emplace_back(s, yv);
      if (static_cast<int>(memory.size()) > cfg.lbfgs_memory)
        memory.pop_front();
    }
    const double progress = fx - f_new;
    x = x_new;
    fx = f_new;
    grad = grad_new;
    res.trace.push_back(fx);
    if (progress <= 1e-13 * (std::abs(fx) + 1.0)) break;  // stalled
  }

  res.x = std::move(x);
  res.fx = fx;
  return res;
}

}  // namespace

FitReport minimize(const ObjectiveFn& objective, const InitSampler& sample_init,
                   const OptimizerConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("minimize: restarts must be >= 1");
  if (!(config.gradient_tolerance > 0.0))
    throw std::invalid_argument("minimize: gradient tolerance must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));
  std::vector<std::string> failures(static_cast<std::size_t>(config.restarts));

  parallel_for(config.restarts, [&](std::int64_t r) {
    Rng rng(config.seed, static_cast<std::uint64_t>(r));
    Vec x0;
    Vec grad;
    double f0 = kInf;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      x0 = sample_init(static_cast<int>(r), rng);
      grad.resize(x0.size());
      try {
        f0 = objective(x0, grad);
      } catch (const NumericalError&) {
        continue;
      }
      if (std::isfinite(f0)) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      failures[static_cast<std::size_t>(r)] =
          "restart " + std::to_string(r) +
          ": objective non-finite at 100 sampled initializations";
      return;
    }
    results[static_cast<std::size_t>(r)] =
        lbfgs_run(objective, std::move(x0), f0, std::move(grad), config);
  });

  for (const auto& msg : failures)
    if (!msg.empty()) throw NumericalError("minimize: " + msg);

  FitReport report;
  report.seed = config.seed;
  report.traces.reserve(results.size());
  for (std::size_t r = 0; r < results.size(); ++r) {
    report.traces.push_back(results[r].trace);
    if (results[r].fx < report.best_objective || report.best_restart < 0) {
      report.best_objective = results[r].fx;
      report.best_params = results[r].x;
      report.best_restart = static_cast<int>(r);
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

Vec sample_initial(const KernelTemplate& tmpl, const InitRanges& ranges, Rng& rng) {
  const auto roles = tmpl.roles();
  Vec theta(static_cast<Eigen::Index>(roles.size()));
  for (std::size_t i = 0; i < roles.size(); ++i) {
    switch (roles[i]) {
      case ParamRole::Amplitude:
        theta[static_cast<Eigen::Index>(i)] =
            rng.uniform(std::log(ranges.amplitude_lo), std::log(ranges.amplitude_hi));
        break;
      case ParamRole::InverseScale:
        theta[static_cast<Eigen::Index>(i)] = rng.uniform(
            std::log(ranges.inverse_scale_lo), std::log(ranges.inverse_scale_hi));
        break;
      case ParamRole::FrequencyLog:
        theta[static_cast<Eigen::Index>(i)] = std::log(
            std::max(rng.uniform(ranges.frequency_lo, ranges.frequency_hi), 1e-6));
        break;
      case ParamRole::FrequencyRaw:
        theta[static_cast<Eigen::Index>(i)] =
            rng.uniform(ranges.frequency_lo, ranges.frequency_hi);
        break;
      case ParamRole::Noise:
        theta[static_cast<Eigen::Index>(i)] =
            std::log(std::max(ranges.noise_init, kLogFloor));
        break;
    }
  }
  return theta;
}

}  // namespace gsk
