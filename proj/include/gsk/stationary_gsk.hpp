#pragma once

#include <vector>

#include "gsk/base_kernel.hpp"
#include "gsk/types.hpp"

namespace gsk {

struct StationaryComponent {
  double sigma2 = 1.0;  // amplitude sigma_k^2, > 0
  Vec gamma;            // inverse input scales, elementwise >= 0
  Vec omega;            // frequencies in cycles per input unit, elementwise >= 0
};

// k(tau) = sum_k sigma_k^2 h(tau .* gamma_k) cos(2 pi omega_k . tau).
// Immutable after construction; evaluation and gradients are pure.
class StationaryGSK {
 public:
  StationaryGSK(BaseKernel base, std::vector<StationaryComponent> components);

  double operator()(const Vec& tau) const;

  // d k(tau) / d theta for the packed kernel layout
  //   per component: [log sigma2][log gamma (d)][log omega (d)].
  // out must have size num_components() * (1 + 2 dim()).
  void gradient(const Vec& tau, Eigen::Ref<Vec> out) const;

  int dim() const { return dim_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  const BaseKernel& base() const { return base_; }
  const std::vector<StationaryComponent>& components() const { return components_; }

  // k(0) = sum of amplitudes.
  double amplitude_sum() const;

 private:
  BaseKernel base_;
  std::vector<StationaryComponent> components_;
  int dim_ = 0;
};

// Sparse spectrum kernel k(tau) = (sigma^2 / K) sum_k cos(2 pi omega_k . tau):
// the gamma -> 0 configuration of StationaryGSK with amplitudes tied to a
// single sigma^2.
class SparseSpectrumKernel {
 public:
  SparseSpectrumKernel(double sigma2, std::vector<Vec> omegas);

  double operator()(const Vec& tau) const;

  // Packed kernel layout: [log sigma2][log omega_0 (d)]...[log omega_{K-1} (d)].
  void gradient(const Vec& tau, Eigen::Ref<Vec> out) const;

  int dim() const { return dim_; }
  int num_components() const { return static_cast<int>(omegas_.size()); }
  double sigma2() const { return sigma2_; }
  const std::vector<Vec>& omegas() const { return omegas_; }

  // Equivalent StationaryGSK with gamma = 0 and sigma_k^2 = sigma^2 / K.
  StationaryGSK as_stationary(BaseKind base = BaseKind::SE) const;

 private:
  double sigma2_ = 1.0;
  std::vector<Vec> omegas_;
  int dim_ = 0;
};

}  // namespace gsk
