#include "gsk/stationary_gsk.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

StationaryGSK::StationaryGSK(BaseKernel base,
                             std::vector<StationaryComponent> components)
    : base_(base), components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("StationaryGSK: needs at least one component");
  dim_ = static_cast<int>(components_.front().gamma.size());
  if (dim_ < 1) throw std::invalid_argument("StationaryGSK: dim must be >= 1");
  for (const auto& c : components_) {
    if (!(c.sigma2 > 0.0))
      throw std::invalid_argument("StationaryGSK: sigma2 must be positive");
    check_dim(c.gamma.size(), dim_, "StationaryGSK gamma");
    check_dim(c.omega.size(), dim_, "StationaryGSK omega");
    if ((c.gamma.array() < 0.0).any())
      throw std::invalid_argument("StationaryGSK: gamma must be >= 0");
    if ((c.omega.array() < 0.0).any())
      throw std::invalid_argument("StationaryGSK: omega must be >= 0");
  }
}

double StationaryGSK::operator()(const Vec& tau) const {
  check_dim(tau.size(), dim_, "StationaryGSK tau");
  double acc = 0.0;
  for (const auto& c : components_) {
    double r2 = 0.0;
    double phase = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double u = tau[j] * c.gamma[j];
      r2 += u * u;
      phase += c.omega[j] * tau[j];
    }
    acc += c.sigma2 * base_.radial(std::sqrt(r2)) * std::cos(kTwoPi * phase);
  }
  return acc;
}

void StationaryGSK::gradient(const Vec& tau, Eigen::Ref<Vec> out) const {
  check_dim(tau.size(), dim_, "StationaryGSK tau");
  const int per_comp = 1 + 2 * dim_;
  check_dim(out.size(), static_cast<Eigen::Index>(components_.size()) * per_comp,
            "StationaryGSK gradient");
  int at = 0;
  for (const auto& c : components_) {
    double r2 = 0.0;
    double phase = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double u = tau[j] * c.gamma[j];
      r2 += u * u;
      phase += c.omega[j] * tau[j];
    }
    const double r = std::sqrt(r2);
    const double h = base_.radial(r);
    const double slope = base_.radial_slope_over_r(r);  // h'(r)/r
    const double cosv = std::cos(kTwoPi * phase);
    const double sinv = std::sin(kTwoPi * phase);

    out[at] = c.sigma2 * h * cosv;  // d / d log sigma2
    for (int j = 0; j < dim_; ++j) {
      const double g = c.gamma[j];
      // d / d log gamma_j = sigma2 cos * h'(r)/r * tau_j^2 gamma_j^2
      out[at + 1 + j] = c.sigma2 * cosv * slope * tau[j] * tau[j] * g * g;
      // d / d log omega_j = sigma2 h * (-sin) * 2 pi tau_j * omega_j
      out[at + 1 + dim_ + j] =
          -c.sigma2 * h * sinv * kTwoPi * tau[j] * c.omega[j];
    }
    at += per_comp;
  }
}

double StationaryGSK::amplitude_sum() const {
  double acc = 0.0;
  for (const auto& c : components_) acc += c.sigma2;
  return acc;
}

SparseSpectrumKernel::SparseSpectrumKernel(double sigma2, std::vector<Vec> omegas)
    : sigma2_(sigma2), omegas_(std::move(omegas)) {
  if (!(sigma2_ > 0.0))
    throw std::invalid_argument("SparseSpectrumKernel: sigma2 must be positive");
  if (omegas_.empty())
    throw std::invalid_argument("SparseSpectrumKernel: needs >= 1 frequency");
  dim_ = static_cast<int>(omegas_.front().size());
  if (dim_ < 1)
    throw std::invalid_argument("SparseSpectrumKernel: dim must be >= 1");
  for (const auto& w : omegas_) {
    check_dim(w.size(), dim_, "SparseSpectrumKernel omega");
    if ((w.array() < 0.0).any())
      throw std::invalid_argument("SparseSpectrumKernel: omega must be >= 0");
  }
}

double SparseSpectrumKernel::operator()(const Vec& tau) const {
  check_dim(tau.size(), dim_, "SparseSpectrumKernel tau");
  double acc = 0.0;
  for (const auto& w : omegas_) acc += std::cos(kTwoPi * w.dot(tau));
  return sigma2_ / static_cast<double>(omegas_.size()) * acc;
}

void SparseSpectrumKernel::gradient(const Vec& tau, Eigen::Ref<Vec> out) const {
  check_dim(tau.size(), dim_, "SparseSpectrumKernel tau");
  const int K = num_components();
  check_dim(out.size(), 1 + static_cast<Eigen::Index>(K) * dim_,
            "SparseSpectrumKernel gradient");
  const double scale = sigma2_ / static_cast<double>(K);
  double value = 0.0;
  for (int k = 0; k < K; ++k) {
    const Vec& w = omegas_[static_cast<std::size_t>(k)];
    const double phase = kTwoPi * w.dot(tau);
    value += std::cos(phase);
    const double sinv = std::sin(phase);
    for (int j = 0; j < dim_; ++j)
      out[1 + k * dim_ + j] = -scale * sinv * kTwoPi * tau[j] * w[j];
  }
  out[0] = scale * value;  // d / d log sigma2 equals k(tau)
}

StationaryGSK SparseSpectrumKernel::as_stationary(BaseKind base) const {
  std::vector<StationaryComponent> comps;
  comps.reserve(omegas_.size());
  for (const auto& w : omegas_) {
    StationaryComponent c;
    c.sigma2 = sigma2_ / static_cast<double>(omegas_.size());
    c.gamma = Vec::Zero(dim_);
    c.omega = w;
    comps.push_back(std::move(c));
  }
  return StationaryGSK(BaseKernel{base}, std::move(comps));
}

}  // namespace gsk
