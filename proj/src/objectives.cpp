#include "gsk/objectives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsk {

SSEObjective::SSEObjective(PairTarget target, std::vector<std::pair<Vec, Vec>> grid,
                           KernelTemplate tmpl)
    : target_(std::move(target)), grid_(std::move(grid)), tmpl_(tmpl) {
  if (grid_.empty()) throw std::invalid_argument("SSEObjective: empty grid");
  target_values_.reserve(grid_.size());
  for (const auto& [x, y] : grid_) {
    const double t = target_(x, y);
    if (!std::isfinite(t))
      throw std::invalid_argument("SSEObjective: target non-finite on grid");
    target_values_.push_back(t);
  }
}

namespace {

// The amplitude slots of a packed kernel gradient are the per-component terms
// sigma_k^2 (...), so their sum reproduces the kernel value; one gradient pass
// per pair covers both value and gradient.
double value_from_grad(const KernelTemplate& tmpl, const Vec& pair_grad) {
  switch (tmpl.type) {
    case KernelType::SparseSpectrum:
      return pair_grad[0];
    case KernelType::Stationary: {
      double acc = 0.0;
      const int stride = 1 + 2 * tmpl.dim;
      for (int k = 0; k < tmpl.components; ++k) acc += pair_grad[k * stride];
      return acc;
    }
    case KernelType::Nonstationary: {
      double acc = 0.0;
      const int stride = 1 + 3 * tmpl.dim;
      for (int k = 0; k < tmpl.components; ++k) acc += pair_grad[k * stride];
      return acc;
    }
  }
  return 0.0;
}

}  // namespace

double SSEObjective::value_and_grad(const Vec& theta, Vec& grad) const {
  const auto [kernel, noise] = unpack(theta, tmpl_);
  (void)noise;  // SSE does not involve the noise slot
  const int kp = tmpl_.kernel_param_count();
  grad.setZero(tmpl_.param_count());
  Vec pair_grad(kp);
  double value = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto& [x, y] = grid_[i];
    grad_pair(kernel, x, y, pair_grad);
    const double r = value_from_grad(tmpl_, pair_grad) - target_values_[i];
    value += r * r;
    grad.head(kp) += (2.0 * r) * pair_grad;
  }
  return value;
}

ObjectiveFn SSEObjective::as_objective() const {
  return [this](const Vec& theta, Vec& grad) {
    return value_and_grad(theta, grad);
  };
}

ObjectiveFn negative_mll_objective(const Dataset& data, const KernelTemplate& tmpl) {
  return [&data, tmpl](const Vec& theta, Vec& grad) {
    const auto [kernel, noise] = unpack(theta, tmpl);
    double value;
    try {
      value = -log_marginal_likelihood(data, kernel, noise);
      grad = -mll_gradient(data, kernel, noise);
    } catch (const NumericalError&) {
      grad.setZero(theta.size());
      return std::numeric_limits<double>::infinity();
    }
    return value;
  };
}

FitReport train_gp(const Dataset& data, const KernelTemplate& tmpl,
                   const OptimizerConfig& cfg, const Vec& warm_start) {
  data.validate(tmpl.dim);
  OptimizerConfig local = cfg;
  const double y_mean = data.y.mean();
  const double y_var = (data.y.array() - y_mean).square().sum() /
                       std::max(1, data.size() - 1);
  local.init.noise_init = std::max(0.1 * y_var, 1e-8);

  const ObjectiveFn objective = negative_mll_objective(data, tmpl);
  const InitSampler sampler = [&](int restart, Rng& rng) {
    if (restart == 0 && warm_start.size() > 0) {
      check_dim(warm_start.size(), tmpl.param_count(), "train_gp warm start");
      return warm_start;
    }
    return sample_initial(tmpl, local.init, rng);
  };
  return minimize(objective, sampler, local);
}

}  // namespace gsk
