#pragma once

#include <cstdint>
#include <vector>

#include "gsk/stationary_gsk.hpp"
#include "gsk/types.hpp"

namespace gsk {

// Random Fourier basis for a stationary generalized spectral kernel. With the
// paired cos/sin construction, phi(x)'phi(x) = sigma2 exactly for every x.
struct RFFBasis {
  Mat frequencies;      // m x d sampled frequencies
  double sigma2 = 0.0;  // total amplitude sum_k sigma_k^2
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(frequencies.rows()); }
  int dim() const { return static_cast<int>(frequencies.cols()); }
};

// Samples m frequencies from the kernel's spectral density: pick component k
// with probability sigma_k^2 / sigma2, a sign s = +-1, and a base draw eps
// from the density proportional to H = F(h); the sample is s*omega_k +
// gamma_k .* eps. For the SE base eps is standard normal; for Matern nu it is
// Student-t with 2 nu degrees of freedom scaled by 1/(2 pi).
RFFBasis sample_frequencies(const StationaryGSK& kernel, int m,
                            std::uint64_t seed);

// phi(x) = sqrt(sigma2 / m) (cos(2 pi w_i.x), sin(2 pi w_i.x))_{i=1..m}.
Vec feature_map(const RFFBasis& basis, const Vec& x);

// Kernel estimates (sigma2/m) sum_i cos(2 pi w_i.tau) on a list of lags;
// identical to phi(x)'phi(y) with tau = x - y up to floating-point rounding.
Vec estimate_kernel(const RFFBasis& basis, const std::vector<Vec>& taus);

}  // namespace gsk
