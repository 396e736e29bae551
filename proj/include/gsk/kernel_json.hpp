#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gsk/hyperparameters.hpp"

namespace gsk {

// Kernel configuration schema (schema_version 1):
//   type:            "stationary" | "nonstationary"
//   base:            "se" | "matern12" | "matern32" | "matern52"
//   star:            "stationary" | "separable"        (nonstationary only)
//   components:      [{sigma2, gamma: [d], omega: [d]}, ...]            or
//                    [{sigma2, gamma: [d], omega1: [d], omega2: [d]}, ...]
//   noise_variance:  number >= 0
// Sparse spectrum kernels serialize as their stationary gamma = 0 form.
struct KernelConfig {
  AnyKernel kernel;
  double noise_variance = 0.0;
};

nlohmann::json kernel_to_json(const AnyKernel& kernel, double noise_variance);
KernelConfig kernel_from_json(const nlohmann::json& j);

KernelConfig load_kernel_file(const std::string& path);
void save_kernel_file(const std::string& path, const AnyKernel& kernel,
                      double noise_variance);

}  // namespace gsk
