#include "gsk/rff.hpp"

#include <cmath>
#include <stdexcept>

#include "gsk/rng.hpp"

namespace gsk {

namespace {

// Draw from the density proportional to H = F(h) for a unit-gamma base.
// SE: h(tau) = exp(-2 pi^2 ||tau||^2) has H = standard normal density.
// Matern nu: multivariate Student-t with 2 nu dof, scaled by 1/(2 pi):
//   eps = z sqrt(2 nu / u) / (2 pi), z ~ N(0, I_d), u ~ chi^2_{2 nu}.
void sample_base_frequency(const BaseKernel& base, int d, Rng& rng,
                           Eigen::Ref<Vec> eps) {
  int dof = 0;
  switch (base.kind) {
    case BaseKind::SE:
      for (int j = 0; j < d; ++j) eps[j] = rng.normal();
      return;
    case BaseKind::Matern12:
      dof = 1;
      break;
    case BaseKind::Matern32:
      dof = 3;
      break;
    case BaseKind::Matern52:
      dof = 5;
      break;
  }
  for (int j = 0; j < d; ++j) eps[j] = rng.normal();
  const double u = rng.chi_squared(dof);
  const double scale = std::sqrt(static_cast<double>(dof) / u) / kTwoPi;
  eps *= scale;
}

}  // namespace

RFFBasis sample_frequencies(const StationaryGSK& kernel, int m,
                            std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_frequencies: m must be >= 1");
  const int d = kernel.dim();
  RFFBasis basis;
  basis.sigma2 = kernel.amplitude_sum();
  basis.seed = seed;
  basis.frequencies.resize(m, d);

  std::vector<double> weights;
  weights.reserve(kernel.components().size());
  for (const auto& c : kernel.components()) weights.push_back(c.sigma2);

  Rng rng(seed);
  Vec eps(d);
  for (int i = 0; i < m; ++i) {
    const auto& c = kernel.components()[static_cast<std::size_t>(
        rng.categorical(weights))];
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    sample_base_frequency(kernel.base(), d, rng, eps);
    for (int j = 0; j < d; ++j)
      basis.frequencies(i, j) = sign * c.omega[j] + c.gamma[j] * eps[j];
  }
  return basis;
}

Vec feature_map(const RFFBasis& basis, const Vec& x) {
  check_dim(x.size(), basis.dim(), "feature_map x");
  const int m = basis.count();
  const double scale = std::sqrt(basis.sigma2 / static_cast<double>(m));
  Vec phi(2 * m);
  for (int i = 0; i < m; ++i) {
    const double phase = kTwoPi * basis.frequencies.row(i).dot(x);
    phi[2 * i] = scale * std::cos(phase);
    phi[2 * i + 1] = scale * std::sin(phase);
  }
  return phi;
}

Vec estimate_kernel(const RFFBasis& basis, const std::vector<Vec>& taus) {
  const int m = basis.count();
  const double scale = basis.sigma2 / static_cast<double>(m);
  Vec out(static_cast<Eigen::Index>(taus.size()));
  for (std::size_t t = 0; t < taus.size(); ++t) {
    check_dim(taus[t].size(), basis.dim(), "estimate_kernel tau");
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      acc += std::cos(kTwoPi * basis.frequencies.row(i).dot(taus[t]));
    out[static_cast<Eigen::Index>(t)] = scale * acc;
  }
  return out;
}

}  // namespace gsk
