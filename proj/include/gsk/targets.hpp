#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gsk/types.hpp"

namespace gsk {

// Covariance of a time-inverted fractional Brownian motion:
//   k(t, s) = 1/2 (t^{-2h} + s^{-2h} - |1/t - 1/s|^{2h}),  t, s > 0.
// Nonstationary: k(0.5, 0.5 + u) != k(0.5, 0.5 - u).
struct IFBMKernel {
  double hurst = 0.5;  // in (0, 1)

  double operator()(double t, double s) const;
};

// 1-d bench grid: 50 points 0.01 + 0.02 j for j = 0..49, evaluated over all
// 50 x 50 ordered pairs.
struct EvalGrid {
  std::vector<double> points;

  static EvalGrid ifbm_default();
  std::vector<std::pair<Vec, Vec>> pairs() const;
};

// sqrt(mean squared error over grid pairs) / mean of the target over the same
// pairs.
double normalized_rmse(const std::function<double(const Vec&, const Vec&)>& candidate,
                       const IFBMKernel& target, const EvalGrid& grid);

}  // namespace gsk
