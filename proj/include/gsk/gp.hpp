#pragma once

#include "gsk/hyperparameters.hpp"
#include "gsk/types.hpp"

namespace gsk {

struct Dataset {
  Mat X;  // n x d inputs
  Vec y;  // n targets

  int size() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
  // n >= 1, finite entries, d matching the kernel when given.
  void validate(int expected_dim = -1) const;
};

// Gram matrix, entry (i, j) = k(x_i, x_j) (stationary kernels see x_i - x_j).
// Rows computed in parallel blocks; the same-input overload fills the
// symmetric half.
Mat gram(const AnyKernel& kernel, const Mat& X, const Mat& X2);
Mat gram(const AnyKernel& kernel, const Mat& X);

// Lower Cholesky factor of A, escalating diagonal jitter on failure:
// 1e-10 * mean(diag) up to 1e-4 * mean(diag) in factors of 10, then
// NumericalError. jitter_used receives the jitter that succeeded (0 if none).
Mat jittered_cholesky(const Mat& A, double* jitter_used = nullptr);

// log N(y | 0, K_XX + noise I) = -1/2 y'a - sum_i log L_ii - n/2 log(2 pi).
double log_marginal_likelihood(const Dataset& data, const AnyKernel& kernel,
                               double noise_variance);

// d LML / d theta in the full packed layout (kernel params then log noise),
// via 1/2 tr((aa' - (K + noise I)^{-1}) dK/dtheta).
Vec mll_gradient(const Dataset& data, const AnyKernel& kernel,
                 double noise_variance);

// Exact GP regression state: training inputs, the triangular factor of
// (K_XX + noise I) and the solved coefficients. Immutable once fitted;
// predict is safe to call concurrently.
class GPModel {
 public:
  static GPModel fit(AnyKernel kernel, double noise_variance, const Dataset& data);
  // No-data model: predictions are the prior.
  static GPModel prior(AnyKernel kernel, double noise_variance, int dim);

  // mean = K_*X a; variance = diag(K_**) - ||L^{-1} K_X*||^2 columnwise,
  // plus noise unless latent_only. Variances clamped at 0.
  void predict(const Mat& Xstar, Vec& mean, Vec& variance,
               bool latent_only = false) const;

  double log_marginal_likelihood() const;

  const AnyKernel& kernel() const { return kernel_; }
  double noise_variance() const { return noise_; }
  const Mat& training_inputs() const { return X_; }
  const Vec& training_targets() const { return y_; }
  const Mat& chol_factor() const { return L_; }
  const Vec& coefficients() const { return alpha_; }
  int dim() const { return dim_; }

 private:
  GPModel(AnyKernel kernel, double noise, int dim) noexcept;
  AnyKernel kernel_;
  double noise_ = 0.0;
  int dim_ = 0;
  Mat X_;
  Vec y_;
  Mat L_;
  Vec alpha_;
};

}  // namespace gsk
