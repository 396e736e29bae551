#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gsk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when a linear-algebra step cannot be completed, e.g. a Cholesky
// factorization that still fails after the full jitter ladder.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void check_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(want) + ", got " +
                                std::to_string(got));
  }
}

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace gsk
