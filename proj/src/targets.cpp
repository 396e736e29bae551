#include "gsk/targets.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

double IFBMKernel::operator()(double t, double s) const {
  if (!(t > 0.0) || !(s > 0.0))
    throw std::domain_error("IFBMKernel: t and s must be positive");
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::domain_error("IFBMKernel: hurst must lie in (0, 1)");
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(t, -h2) + std::pow(s, -h2) -
                std::pow(std::abs(1.0 / t - 1.0 / s), h2));
}

EvalGrid EvalGrid::ifbm_default() {
  EvalGrid g;
  g.points.reserve(50);
  for (int j = 0; j < 50; ++j) g.points.push_back(0.01 + 0.02 * j);
  return g;
}

std::vector<std::pair<Vec, Vec>> EvalGrid::pairs() const {
  std::vector<std::pair<Vec, Vec>> out;
  out.reserve(points.size() * points.size());
  for (double t : points) {
    for (double s : points) {
      Vec a(1), b(1);
      a[0] = t;
      b[0] = s;
      out.emplace_back(std::move(a), std::move(b));
    }
  }
  return out;
}

double normalized_rmse(const std::function<double(const Vec&, const Vec&)>& candidate,
                       const IFBMKernel& target, const EvalGrid& grid) {
  double sq_sum = 0.0;
  double target_sum = 0.0;
  std::size_t count = 0;
  for (const auto& [a, b] : grid.pairs()) {
    const double kt = target(a[0], b[0]);
    const double kc = candidate(a, b);
    sq_sum += (kc - kt) * (kc - kt);
    target_sum += kt;
    ++count;
  }
  const double rmse = std::sqrt(sq_sum / static_cast<double>(count));
  return rmse / (target_sum / static_cast<double>(count));
}

}  // namespace gsk
