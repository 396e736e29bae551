#include "gsk/base_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

namespace {
constexpr double kSqrt3 = 1.7320508075688772935274463415059;
constexpr double kSqrt5 = 2.2360679774997896964091736687747;
constexpr double kTwoPiSq = 19.739208802178717237668981999752;  // 2 pi^2
}  // namespace

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::SE:
      return "se";
    case BaseKind::Matern12:
      return "matern12";
    case BaseKind::Matern32:
      return "matern32";
    case BaseKind::Matern52:
      return "matern52";
  }
  return "se";
}

BaseKind base_kind_from_string(const std::string& name) {
  if (name == "se") return BaseKind::SE;
  if (name == "matern12") return BaseKind::Matern12;
  if (name == "matern32") return BaseKind::Matern32;
  if (name == "matern52") return BaseKind::Matern52;
  throw std::invalid_argument("unknown base kernel '" + name +
                              "' (expected se|matern12|matern32|matern52)");
}

double BaseKernel::radial(double r) const {
  switch (kind) {
    case BaseKind::SE:
      return std::exp(-kTwoPiSq * r * r);
    case BaseKind::Matern12:
      return std::exp(-r);
    case BaseKind::Matern32:
      return (1.0 + kSqrt3 * r) * std::exp(-kSqrt3 * r);
    case BaseKind::Matern52:
      return (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * std::exp(-kSqrt5 * r);
  }
  return 1.0;
}

double BaseKernel::radial_slope_over_r(double r) const {
  switch (kind) {
    case BaseKind::SE:
      return -2.0 * kTwoPiSq * std::exp(-kTwoPiSq * r * r);
    case BaseKind::Matern12:
      return r == 0.0 ? 0.0 : -std::exp(-r) / r;
    case BaseKind::Matern32:
      return -3.0 * std::exp(-kSqrt3 * r);
    case BaseKind::Matern52:
      return -(5.0 / 3.0) * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
  }
  return 0.0;
}

}  // namespace gsk
