#pragma once

#include <string>

#include "gsk/types.hpp"

namespace gsk {

enum class BaseKind { SE, Matern12, Matern32, Matern52 };

std::string to_string(BaseKind kind);
BaseKind base_kind_from_string(const std::string& name);

// Modulating kernel h: even, strictly positive, h(0) = 1.
//   SE:        h(tau) = exp(-2 pi^2 ||tau||^2)
//   Matern nu: closed forms for nu in {1/2, 3/2, 5/2} with r = ||tau||:
//     exp(-r), (1 + sqrt3 r) exp(-sqrt3 r), (1 + sqrt5 r + 5 r^2/3) exp(-sqrt5 r)
struct BaseKernel {
  BaseKind kind = BaseKind::SE;

  // h as a function of r = ||tau||, r >= 0.
  double radial(double r) const;

  // h'(r)/r. Finite limit at r = 0 for SE, Matern 3/2 and 5/2; for Matern 1/2
  // the kink at r = 0 is resolved as 0 (subgradient choice).
  double radial_slope_over_r(double r) const;

  double operator()(const Vec& tau) const { return radial(tau.norm()); }

  // True when a zero-mean GP with covariance h is mean-square differentiable
  // (h twice differentiable at 0). Matern 1/2 is the only kind that is not.
  bool smooth_at_origin() const { return kind != BaseKind::Matern12; }
};

}  // namespace gsk
