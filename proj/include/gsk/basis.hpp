#pragma once

#include "gsk/gp.hpp"
#include "gsk/nonstationary_gsk.hpp"

namespace gsk {

// Finite-basis inference for separable nonstationary kernels. The features
//   phi(x) = [ sigma_k k1(x .* gamma_k) Psi_k(x) ]_{k=1..K}   (2K entries)
// with unit prior weight covariance reproduce the kernel exactly:
// phi(x)'phi(y) = k(x, y). Fitting costs O(n K^2) time and memory.
class BasisModel {
 public:
  // Requires a Separable star and noise_variance > 0; contract error otherwise.
  static BasisModel fit(NonstationaryGSK kernel, double noise_variance,
                        const Dataset& data);
  static BasisModel prior(NonstationaryGSK kernel, double noise_variance);

  void predict(const Mat& Xstar, Vec& mean, Vec& variance,
               bool latent_only = false) const;

  // phi(x).
  Vec features(const Vec& x) const;
  int feature_count() const { return 2 * kernel_.num_components(); }

  const NonstationaryGSK& kernel() const { return kernel_; }
  double noise_variance() const { return noise_; }
  const Vec& weight_mean() const { return weight_mean_; }
  // Lower Cholesky factor of A = I + Phi'Phi / noise; weight covariance A^{-1}.
  const Mat& precision_factor() const { return precision_L_; }

 private:
  BasisModel(NonstationaryGSK kernel, double noise) noexcept;
  NonstationaryGSK kernel_;
  double noise_ = 0.0;
  Vec weight_mean_;
  Mat precision_L_;
};

}  // namespace gsk
