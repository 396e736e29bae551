#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "gsk/nonstationary_gsk.hpp"
#include "gsk/stationary_gsk.hpp"
#include "gsk/types.hpp"

namespace gsk {

enum class KernelType { Stationary, Nonstationary, SparseSpectrum };

using AnyKernel = std::variant<StationaryGSK, NonstationaryGSK, SparseSpectrumKernel>;

enum class ParamRole { Amplitude, InverseScale, FrequencyLog, FrequencyRaw, Noise };

// Fixes the structure (family, base, star, K, d) so a flat parameter vector
// can be mapped to a kernel and back.
struct KernelTemplate {
  KernelType type = KernelType::Stationary;
  BaseKind base = BaseKind::SE;
  StarVariant star = StarVariant::Stationary;  // nonstationary only
  int components = 1;
  int dim = 1;

  int kernel_param_count() const;
  // Kernel parameters plus the trailing noise-variance slot.
  int param_count() const { return kernel_param_count() + 1; }
  std::vector<ParamRole> roles() const;
};

// Packed layout (the HyperVector). Positive quantities live in log space with
// a floor of 1e-12 applied at pack time; the trailing slot is log noise
// variance. Per kernel type:
//   stationary:     per component [log s2][log gamma (d)][log omega (d)]
//   nonstationary:  per component [log s2][log gamma (d)][omega1 (d)][omega2 (d)]
//   sparse spectrum:[log s2][log omega_k (d) for k = 0..K-1]
Vec pack(const AnyKernel& kernel, double noise_variance);
std::pair<AnyKernel, double> unpack(const Vec& theta, const KernelTemplate& tmpl);

KernelTemplate template_of(const AnyKernel& kernel, double = 0.0);

// Pairwise evaluation: stationary kernels see tau = x - y.
double eval_pair(const AnyKernel& kernel, const Vec& x, const Vec& y);

// Kernel part of the packed gradient (no noise slot); out must have
// kernel_param_count() entries.
void grad_pair(const AnyKernel& kernel, const Vec& x, const Vec& y,
               Eigen::Ref<Vec> out);

int kernel_dim(const AnyKernel& kernel);

inline constexpr double kLogFloor = 1e-12;

}  // namespace gsk
