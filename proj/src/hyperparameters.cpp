#include "gsk/hyperparameters.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

namespace {

double log_floored(double v) { return std::log(std::max(v, kLogFloor)); }

// exp with an underflow floor so that any real packed value unpacks to a
// strictly positive parameter.
double exp_positive(double v) { return std::max(std::exp(v), 1e-300); }

}  // namespace

int KernelTemplate::kernel_param_count() const {
  switch (type) {
    case KernelType::Stationary:
      return components * (1 + 2 * dim);
    case KernelType::Nonstationary:
      return components * (1 + 3 * dim);
    case KernelType::SparseSpectrum:
      return 1 + components * dim;
  }
  return 0;
}

std::vector<ParamRole> KernelTemplate::roles() const {
  std::vector<ParamRole> out;
  out.reserve(static_cast<std::size_t>(param_count()));
  switch (type) {
    case KernelType::Stationary:
      for (int k = 0; k < components; ++k) {
        out.push_back(ParamRole::Amplitude);
        for (int j = 0; j < dim; ++j) out.push_back(ParamRole::InverseScale);
        for (int j = 0; j < dim; ++j) out.push_back(ParamRole::FrequencyLog);
      }
      break;
    case KernelType::Nonstationary:
      for (int k = 0; k < components; ++k) {
        out.push_back(ParamRole::Amplitude);
        for (int j = 0; j < dim; ++j) out.push_back(ParamRole::InverseScale);
        for (int j = 0; j < 2 * dim; ++j) out.push_back(ParamRole::FrequencyRaw);
      }
      break;
    case KernelType::SparseSpectrum:
      out.push_back(ParamRole::Amplitude);
      for (int k = 0; k < components * dim; ++k)
        out.push_back(ParamRole::FrequencyLog);
      break;
  }
  out.push_back(ParamRole::Noise);
  return out;
}

Vec pack(const AnyKernel& kernel, double noise_variance) {
  const KernelTemplate tmpl = template_of(kernel);
  Vec theta(tmpl.param_count());
  int at = 0;
  if (const auto* s = std::get_if<StationaryGSK>(&kernel)) {
    for (const auto& c : s->components()) {
      theta[at++] = std::log(c.sigma2);
      for (int j = 0; j < s->dim(); ++j) theta[at++] = log_floored(c.gamma[j]);
      for (int j = 0; j < s->dim(); ++j) theta[at++] = log_floored(c.omega[j]);
    }
  } else if (const auto* n = std::get_if<NonstationaryGSK>(&kernel)) {
    for (const auto& c : n->components()) {
      theta[at++] = std::log(c.sigma2);
      for (int j = 0; j < n->dim(); ++j) theta[at++] = log_floored(c.gamma[j]);
      for (int j = 0; j < n->dim(); ++j) theta[at++] = c.omega1[j];
      for (int j = 0; j < n->dim(); ++j) theta[at++] = c.omega2[j];
    }
  } else {
    const auto& ss = std::get<SparseSpectrumKernel>(kernel);
    theta[at++] = std::log(ss.sigma2());
    for (const auto& w : ss.omegas())
      for (int j = 0; j < ss.dim(); ++j) theta[at++] = log_floored(w[j]);
  }
  theta[at] = log_floored(noise_variance);
  return theta;
}

std::pair<AnyKernel, double> unpack(const Vec& theta, const KernelTemplate& tmpl) {
  check_dim(theta.size(), tmpl.param_count(), "unpack");
  const int d = tmpl.dim;
  int at = 0;
  const double noise = exp_positive(theta[theta.size() - 1]);
  switch (tmpl.type) {
    case KernelType::Stationary: {
      std::vector<StationaryComponent> comps(static_cast<std::size_t>(tmpl.components));
      for (auto& c : comps) {
        c.sigma2 = exp_positive(theta[at++]);
        c.gamma.resize(d);
        c.omega.resize(d);
        for (int j = 0; j < d; ++j) c.gamma[j] = exp_positive(theta[at++]);
        for (int j = 0; j < d; ++j) c.omega[j] = exp_positive(theta[at++]);
      }
      return {StationaryGSK(BaseKernel{tmpl.base}, std::move(comps)), noise};
    }
    case KernelType::Nonstationary: {
      std::vector<NonstationaryComponent> comps(static_cast<std::size_t>(tmpl.components));
      for (auto& c : comps) {
        c.sigma2 = exp_positive(theta[at++]);
        c.gamma.resize(d);
        c.omega1.resize(d);
        c.omega2.resize(d);
        for (int j = 0; j < d; ++j) c.gamma[j] = exp_positive(theta[at++]);
        for (int j = 0; j < d; ++j) c.omega1[j] = theta[at++];
        for (int j = 0; j < d; ++j) c.omega2[j] = theta[at++];
      }
      return {NonstationaryGSK(StarKernel{tmpl.star, BaseKernel{tmpl.base}},
                               std::move(comps)),
              noise};
    }
    case KernelType::SparseSpectrum: {
      const double sigma2 = exp_positive(theta[at++]);
      std::vector<Vec> omegas(static_cast<std::size_t>(tmpl.components));
      for (auto& w : omegas) {
        w.resize(d);
        for (int j = 0; j < d; ++j) w[j] = exp_positive(theta[at++]);
      }
      return {SparseSpectrumKernel(sigma2, std::move(omegas)), noise};
    }
  }
  throw std::invalid_argument("unpack: unknown kernel type");
}

KernelTemplate template_of(const AnyKernel& kernel, double) {
  KernelTemplate t;
  if (const auto* s = std::get_if<StationaryGSK>(&kernel)) {
    t.type = KernelType::Stationary;
    t.base = s->base().kind;
    t.components = s->num_components();
    t.dim = s->dim();
  } else if (const auto* n = std::get_if<NonstationaryGSK>(&kernel)) {
    t.type = KernelType::Nonstationary;
    t.base = n->star().base.kind;
    t.star = n->star().variant;
    t.components = n->num_components();
    t.dim = n->dim();
  } else {
    const auto& ss = std::get<SparseSpectrumKernel>(kernel);
    t.type = KernelType::SparseSpectrum;
    t.components = ss.num_components();
    t.dim = ss.dim();
  }
  return t;
}

double eval_pair(const AnyKernel& kernel, const Vec& x, const Vec& y) {
  if (const auto* s = std::get_if<StationaryGSK>(&kernel)) return (*s)(x - y);
  if (const auto* n = std::get_if<NonstationaryGSK>(&kernel)) return (*n)(x, y);
  return std::get<SparseSpectrumKernel>(kernel)(x - y);
}

void grad_pair(const AnyKernel& kernel, const Vec& x, const Vec& y,
               Eigen::Ref<Vec> out) {
  if (const auto* s = std::get_if<StationaryGSK>(&kernel)) {
    s->gradient(x - y, out);
  } else if (const auto* n = std::get_if<NonstationaryGSK>(&kernel)) {
    n->gradient(x, y, out);
  } else {
    std::get<SparseSpectrumKernel>(kernel).gradient(x - y, out);
  }
}

int kernel_dim(const AnyKernel& kernel) {
  return std::visit([](const auto& k) { return k.dim(); }, kernel);
}

}  // namespace gsk
