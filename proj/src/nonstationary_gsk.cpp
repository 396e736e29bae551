#include "gsk/nonstationary_gsk.hpp"

#include <cmath>
#include <stdexcept>

namespace gsk {

std::string to_string(StarVariant v) {
  return v == StarVariant::Stationary ? "stationary" : "separable";
}

StarVariant star_variant_from_string(const std::string& name) {
  if (name == "stationary") return StarVariant::Stationary;
  if (name == "separable") return StarVariant::Separable;
  throw std::invalid_argument("unknown star variant '" + name +
                              "' (expected stationary|separable)");
}

NonstationaryGSK::NonstationaryGSK(StarKernel star,
                                   std::vector<NonstationaryComponent> components)
    : star_(star), components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("NonstationaryGSK: needs at least one component");
  dim_ = static_cast<int>(components_.front().gamma.size());
  if (dim_ < 1)
    throw std::invalid_argument("NonstationaryGSK: dim must be >= 1");
  for (const auto& c : components_) {
    if (!(c.sigma2 > 0.0))
      throw std::invalid_argument("NonstationaryGSK: sigma2 must be positive");
    check_dim(c.gamma.size(), dim_, "NonstationaryGSK gamma");
    check_dim(c.omega1.size(), dim_, "NonstationaryGSK omega1");
    check_dim(c.omega2.size(), dim_, "NonstationaryGSK omega2");
    if ((c.gamma.array() < 0.0).any())
      throw std::invalid_argument("NonstationaryGSK: gamma must be >= 0");
  }
}

namespace {

struct StarEval {
  double value;    // k*(x.*g, y.*g)
  double rx, ry;   // radial arguments (separable) or the shared r (stationary)
  double hx, hy;   // factors for the separable case
};

StarEval star_parts(const StarKernel& star, const Vec& x, const Vec& y,
                    const Vec& gamma, int d) {
  StarEval e{};
  if (star.variant == StarVariant::Stationary) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u = (x[j] - y[j]) * gamma[j];
      r2 += u * u;
    }
    e.rx = std::sqrt(r2);
    e.value = star.base.radial(e.rx);
  } else {
    double rx2 = 0.0, ry2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double ux = x[j] * gamma[j];
      const double uy = y[j] * gamma[j];
      rx2 += ux * ux;
      ry2 += uy * uy;
    }
    e.rx = std::sqrt(rx2);
    e.ry = std::sqrt(ry2);
    e.hx = star.base.radial(e.rx);
    e.hy = star.base.radial(e.ry);
    e.value = e.hx * e.hy;
  }
  return e;
}

}  // namespace

double NonstationaryGSK::operator()(const Vec& x, const Vec& y) const {
  check_dim(x.size(), dim_, "NonstationaryGSK x");
  check_dim(y.size(), dim_, "NonstationaryGSK y");
  double acc = 0.0;
  for (const auto& c : components_) {
    const StarEval se = star_parts(star_, x, y, c.gamma, dim_);
    const double a1 = kTwoPi * c.omega1.dot(x);
    const double a2 = kTwoPi * c.omega2.dot(x);
    const double b1 = kTwoPi * c.omega1.dot(y);
    const double b2 = kTwoPi * c.omega2.dot(y);
    const double psi = std::cos(a1 - b1) + std::cos(a1 - b2) +
                       std::cos(a2 - b1) + std::cos(a2 - b2);
    acc += c.sigma2 * se.value * psi;
  }
  return acc;
}

double NonstationaryGSK::eval_psi(const Vec& x, const Vec& y) const {
  check_dim(x.size(), dim_, "NonstationaryGSK x");
  check_dim(y.size(), dim_, "NonstationaryGSK y");
  double acc = 0.0;
  for (int k = 0; k < num_components(); ++k) {
    const auto& c = components_[static_cast<std::size_t>(k)];
    const StarEval se = star_parts(star_, x, y, c.gamma, dim_);
    acc += c.sigma2 * se.value * psi(k, x).dot(psi(k, y));
  }
  return acc;
}

Eigen::Vector2d NonstationaryGSK::psi(int k, const Vec& x) const {
  const auto& c = components_.at(static_cast<std::size_t>(k));
  const double a1 = kTwoPi * c.omega1.dot(x);
  const double a2 = kTwoPi * c.omega2.dot(x);
  return {std::cos(a1) + std::cos(a2), std::sin(a1) + std::sin(a2)};
}

void NonstationaryGSK::gradient(const Vec& x, const Vec& y,
                                Eigen::Ref<Vec> out) const {
  check_dim(x.size(), dim_, "NonstationaryGSK x");
  check_dim(y.size(), dim_, "NonstationaryGSK y");
  const int per_comp = 1 + 3 * dim_;
  check_dim(out.size(), static_cast<Eigen::Index>(components_.size()) * per_comp,
            "NonstationaryGSK gradient");
  int at = 0;
  for (const auto& c : components_) {
    const StarEval se = star_parts(star_, x, y, c.gamma, dim_);
    const double a1 = kTwoPi * c.omega1.dot(x);
    const double a2 = kTwoPi * c.omega2.dot(x);
    const double b1 = kTwoPi * c.omega1.dot(y);
    const double b2 = kTwoPi * c.omega2.dot(y);
    const double c11 = std::cos(a1 - b1), s11 = std::sin(a1 - b1);
    const double c12 = std::cos(a1 - b2), s12 = std::sin(a1 - b2);
    const double c21 = std::cos(a2 - b1), s21 = std::sin(a2 - b1);
    const double c22 = std::cos(a2 - b2), s22 = std::sin(a2 - b2);
    const double psi = c11 + c12 + c21 + c22;

    out[at] = c.sigma2 * se.value * psi;  // d / d log sigma2

    for (int j = 0; j < dim_; ++j) {
      const double g = c.gamma[j];
      double dstar;  // d k* / d log gamma_j
      if (star_.variant == StarVariant::Stationary) {
        const double dj = x[j] - y[j];
        dstar = star_.base.radial_slope_over_r(se.rx) * dj * dj * g * g;
      } else {
        dstar = star_.base.radial_slope_over_r(se.rx) * x[j] * x[j] * g * g * se.hy +
                se.hx * star_.base.radial_slope_over_r(se.ry) * y[j] * y[j] * g * g;
      }
      out[at + 1 + j] = c.sigma2 * psi * dstar;

      // d psi / d omega1_j = -2pi [ (x_j - y_j) s11 + x_j s12 - y_j s21 ]
      const double dpsi1 = -kTwoPi * ((x[j] - y[j]) * s11 + x[j] * s12 - y[j] * s21);
      // d psi / d omega2_j = -2pi [ (x_j - y_j) s22 + x_j s21 - y_j s12 ]
      const double dpsi2 = -kTwoPi * ((x[j] - y[j]) * s22 + x[j] * s21 - y[j] * s12);
      out[at + 1 + dim_ + j] = c.sigma2 * se.value * dpsi1;
      out[at + 1 + 2 * dim_ + j] = c.sigma2 * se.value * dpsi2;
    }
    at += per_comp;
  }
}

}  // namespace gsk
