#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gsk/gp.hpp"
#include "gsk/optimize.hpp"

namespace gsk {

using PairTarget = std::function<double(const Vec& x, const Vec& y)>;

// Sum of squared errors between a candidate kernel (unpacked from a
// HyperVector) and a fixed target on a grid of input pairs.
class SSEObjective {
 public:
  SSEObjective(PairTarget target, std::vector<std::pair<Vec, Vec>> grid,
               KernelTemplate tmpl);

  // value = sum over grid of (k_theta - k_target)^2; grad has the full packed
  // layout (the noise slot does not enter the objective and gets 0).
  double value_and_grad(const Vec& theta, Vec& grad) const;

  ObjectiveFn as_objective() const;

  const KernelTemplate& kernel_template() const { return tmpl_; }
  const std::vector<std::pair<Vec, Vec>>& grid() const { return grid_; }

 private:
  PairTarget target_;
  std::vector<std::pair<Vec, Vec>> grid_;
  std::vector<double> target_values_;
  KernelTemplate tmpl_;
};

// Negative log marginal likelihood of a dataset as a function of the packed
// kernel-plus-noise vector.
ObjectiveFn negative_mll_objective(const Dataset& data, const KernelTemplate& tmpl);

// Maximizes the marginal log likelihood over kernel hyperparameters and noise
// with multi-restart. Every sampled initialization sets the noise slot to
// 0.1 * var(y). warm_start, when non-empty, becomes restart 0's initial
// point. The report's best_objective is the negative MLL.
FitReport train_gp(const Dataset& data, const KernelTemplate& tmpl,
                   const OptimizerConfig& cfg, const Vec& warm_start = Vec());

}  // namespace gsk
