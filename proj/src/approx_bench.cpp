#include "gsk/approx_bench.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

std::string to_string(Family f) {
  switch (f) {
    case Family::S_SE:
      return "s-se";
    case Family::SS:
      return "ss";
    case Family::NS_SE:
      return "ns-se";
    case Family::NS_MA12:
      return "ns-ma12";
    case Family::NS_MA32:
      return "ns-ma32";
    case Family::NS_MA52:
      return "ns-ma52";
  }
  return "s-se";
}

Family family_from_string(const std::string& name) {
  if (name == "s-se") return Family::S_SE;
  if (name == "ss") return Family::SS;
  if (name == "ns-se") return Family::NS_SE;
  if (name == "ns-ma12") return Family::NS_MA12;
  if (name == "ns-ma32") return Family::NS_MA32;
  if (name == "ns-ma52") return Family::NS_MA52;
  throw std::invalid_argument(
      "unknown family '" + name + "' (expected s-se|ss|ns-se|ns-ma12|ns-ma32|ns-ma52)");
}

KernelTemplate family_template(Family f, int components, int dim) {
  if (components < 1)
    throw std::invalid_argument("family_template: components must be >= 1");
  KernelTemplate t;
  t.components = components;
  t.dim = dim;
  switch (f) {
    case Family::S_SE:
      t.type = KernelType::Stationary;
      t.base = BaseKind::SE;
      break;
    case Family::SS:
      t.type = KernelType::SparseSpectrum;
      break;
    case Family::NS_SE:
      t.type = KernelType::Nonstationary;
      t.star = StarVariant::Separable;
      t.base = BaseKind::SE;
      break;
    case Family::NS_MA12:
      t.type = KernelType::Nonstationary;
      t.star = StarVariant::Separable;
      t.base = BaseKind::Matern12;
      break;
    case Family::NS_MA32:
      t.type = KernelType::Nonstationary;
      t.star = StarVariant::Separable;
      t.base = BaseKind::Matern32;
      break;
    case Family::NS_MA52:
      t.type = KernelType::Nonstationary;
      t.star = StarVariant::Separable;
      t.base = BaseKind::Matern52;
      break;
  }
  return t;
}

ApproxResult fit_target(const PairTarget& target, const EvalGrid& grid,
                        Family family, int components, const OptimizerConfig& cfg) {
  const KernelTemplate tmpl = family_template(family, components);
  SSEObjective objective(target, grid.pairs(), tmpl);
  const InitSampler sampler = [&tmpl, &cfg](int, Rng& rng) {
    return sample_initial(tmpl, cfg.init, rng);
  };
  FitReport fit = minimize(objective.as_objective(), sampler, cfg);
  auto [kernel, noise] = unpack(fit.best_params, tmpl);
  const double sse = fit.best_objective;
  return ApproxResult{std::move(fit), std::move(kernel), noise, sse, 0.0};
}

ApproxResult approximate_ifbm(double hurst, Family family, int components,
                              const OptimizerConfig& cfg) {
  const IFBMKernel target{hurst};
  const EvalGrid grid = EvalGrid::ifbm_default();
  const PairTarget target_fn = [target](const Vec& a, const Vec& b) {
    return target(a[0], b[0]);
  };
  ApproxResult res = fit_target(target_fn, grid, family, components, cfg);
  const AnyKernel& fitted = res.kernel;
  res.norm_rmse = normalized_rmse(
      [&fitted](const Vec& a, const Vec& b) { return eval_pair(fitted, a, b); },
      target, grid);
  return res;
}

}  // namespace gsk
