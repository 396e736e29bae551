#include "gsk/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "gsk/parallel.hpp"

namespace gsk {

BasisModel::BasisModel(NonstationaryGSK kernel, double noise) noexcept
    : kernel_(std::move(kernel)), noise_(noise) {}

namespace {

void require_separable(const NonstationaryGSK& kernel, double noise) {
  if (kernel.star().variant != StarVariant::Separable)
    throw std::invalid_argument(
        "BasisModel: kernel star must be separable for finite-basis inference");
  if (!(noise > 0.0))
    throw std::invalid_argument("BasisModel: noise variance must be > 0");
}

}  // namespace

Vec BasisModel::features(const Vec& x) const {
  check_dim(x.size(), kernel_.dim(), "BasisModel features");
  const int K = kernel_.num_components();
  Vec phi(2 * K);
  for (int k = 0; k < K; ++k) {
    const auto& c = kernel_.components()[static_cast<std::size_t>(k)];
    double r2 = 0.0;
    for (int j = 0; j < kernel_.dim(); ++j) {
      const double u = x[j] * c.gamma[j];
      r2 += u * u;
    }
    const double k1 = kernel_.star().base.radial(std::sqrt(r2));
    const Eigen::Vector2d psi = kernel_.psi(k, x);
    const double amp = std::sqrt(c.sigma2) * k1;
    phi[2 * k] = amp * psi[0];
    phi[2 * k + 1] = amp * psi[1];
  }
  return phi;
}

BasisModel BasisModel::fit(NonstationaryGSK kernel, double noise_variance,
                           const Dataset& data) {
  require_separable(kernel, noise_variance);
  data.validate(kernel.dim());
  BasisModel m(std::move(kernel), noise_variance);
  const int n = data.size();
  const int F = m.feature_count();
  Mat Phi(n, F);
  parallel_for(n, [&](std::int64_t i) {
    Phi.row(i) = m.features(data.X.row(i).transpose()).transpose();
  });
  // Posterior: Sigma_w = (I + Phi'Phi / noise)^{-1}, mu_w = Sigma_w Phi'y / noise.
  Mat A = Mat::Identity(F, F) + Phi.transpose() * Phi / noise_variance;
  m.precision_L_ = jittered_cholesky(A);
  const Vec b = Phi.transpose() * data.y / noise_variance;
  m.weight_mean_ = m.precision_L_.transpose().triangularView<Eigen::Upper>().solve(
      m.precision_L_.triangularView<Eigen::Lower>().solve(b));
  return m;
}

BasisModel BasisModel::prior(NonstationaryGSK kernel, double noise_variance) {
  require_separable(kernel, noise_variance);
  BasisModel m(std::move(kernel), noise_variance);
  const int F = m.feature_count();
  m.precision_L_ = Mat::Identity(F, F);
  m.weight_mean_ = Vec::Zero(F);
  return m;
}

void BasisModel::predict(const Mat& Xstar, Vec& mean, Vec& variance,
                         bool latent_only) const {
  check_dim(Xstar.cols(), kernel_.dim(), "BasisModel predict inputs");
  const Eigen::Index m = Xstar.rows();
  mean.resize(m);
  variance.resize(m);
  parallel_for(m, [&](std::int64_t i) {
    const Vec phi = features(Xstar.row(i).transpose());
    mean[i] = phi.dot(weight_mean_);
    const Vec v = precision_L_.triangularView<Eigen::Lower>().solve(phi);
    variance[i] = v.squaredNorm();
  });
  if (!latent_only) variance.array() += noise_;
  variance = variance.cwiseMax(0.0);
}

}  // namespace gsk
