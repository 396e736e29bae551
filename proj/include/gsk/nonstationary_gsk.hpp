#pragma once

#include <string>
#include <vector>

#include "gsk/base_kernel.hpp"
#include "gsk/types.hpp"

namespace gsk {

enum class StarVariant { Stationary, Separable };

std::string to_string(StarVariant v);
StarVariant star_variant_from_string(const std::string& name);

// Bivariate k*(x, y): either h(x - y) or the separable product h(x) h(y).
// k*(0,0) = 1 holds because h(0) = 1; strict positivity and symmetry are
// inherited from h.
struct StarKernel {
  StarVariant variant = StarVariant::Stationary;
  BaseKernel base;

  double operator()(const Vec& x, const Vec& y) const {
    if (variant == StarVariant::Stationary) return base.radial((x - y).norm());
    return base.radial(x.norm()) * base.radial(y.norm());
  }
};

struct NonstationaryComponent {
  double sigma2 = 1.0;  // > 0
  Vec gamma;            // inverse input scales, elementwise >= 0
  Vec omega1;           // frequency pair, unconstrained reals
  Vec omega2;
};

// k(x, y) = sum_k sigma_k^2 k*(x .* gamma_k, y .* gamma_k) Psi_k(x)^T Psi_k(y)
// with Psi_k(x) = (cos(2pi x.w1) + cos(2pi x.w2), sin(2pi x.w1) + sin(2pi x.w2)).
// operator() evaluates through the expanded four-cosine identity
//   Psi_k(x)^T Psi_k(y) = sum_{i,j in {1,2}} cos(2pi (x.w_i - y.w_j));
// eval_psi keeps the explicit feature product for cross-checking.
class NonstationaryGSK {
 public:
  NonstationaryGSK(StarKernel star, std::vector<NonstationaryComponent> components);

  double operator()(const Vec& x, const Vec& y) const;
  double eval_psi(const Vec& x, const Vec& y) const;

  // Psi_k(x) for component k.
  Eigen::Vector2d psi(int k, const Vec& x) const;

  // d k(x,y) / d theta for the packed kernel layout
  //   per component: [log sigma2][log gamma (d)][omega1 (d)][omega2 (d)].
  void gradient(const Vec& x, const Vec& y, Eigen::Ref<Vec> out) const;

  int dim() const { return dim_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  const StarKernel& star() const { return star_; }
  const std::vector<NonstationaryComponent>& components() const {
    return components_;
  }

 private:
  StarKernel star_;
  std::vector<NonstationaryComponent> components_;
  int dim_ = 0;
};

}  // namespace gsk
