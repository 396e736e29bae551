#include "gsk/gp.hpp"

#include <cmath>
#include <stdexcept>

#include "gsk/parallel.hpp"

namespace gsk {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

void Dataset::validate(int expected_dim) const {
  if (X.rows() < 1) throw std::invalid_argument("dataset: needs n >= 1 rows");
  if (X.rows() != y.size())
    throw std::invalid_argument("dataset: X rows and y length differ");
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("dataset: non-finite entries");
  if (expected_dim >= 0 && X.cols() != expected_dim)
    check_dim(X.cols(), expected_dim, "dataset inputs");
}

Mat gram(const AnyKernel& kernel, const Mat& X, const Mat& X2) {
  check_dim(X.cols(), kernel_dim(kernel), "gram X");
  check_dim(X2.cols(), kernel_dim(kernel), "gram X2");
  Mat K(X.rows(), X2.rows());
  parallel_for(X.rows(), [&](std::int64_t i) {
    const Vec xi = X.row(i).transpose();
    for (Eigen::Index j = 0; j < X2.rows(); ++j)
      K(i, j) = eval_pair(kernel, xi, X2.row(j).transpose());
  });
  return K;
}

Mat gram(const AnyKernel& kernel, const Mat& X) {
  check_dim(X.cols(), kernel_dim(kernel), "gram X");
  const Eigen::Index n = X.rows();
  Mat K(n, n);
  parallel_for(n, [&](std::int64_t i) {
    const Vec xi = X.row(i).transpose();
    for (Eigen::Index j = i; j < n; ++j)
      K(i, j) = eval_pair(kernel, xi, X.row(j).transpose());
  });
  K.triangularView<Eigen::StrictlyLower>() = K.transpose();
  return K;
}

Mat jittered_cholesky(const Mat& A, double* jitter_used) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("jittered_cholesky: matrix must be square");
  double mean_diag = A.rows() == 0 ? 0.0 : std::abs(A.diagonal().mean());
  if (mean_diag == 0.0) mean_diag = 1.0;
  static constexpr double kLadder[] = {0.0,  1e-10, 1e-9, 1e-8,
                                       1e-7, 1e-6,  1e-5, 1e-4};
  for (double scale : kLadder) {
    Mat work = A;
    const double jitter = scale * mean_diag;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Mat> llt(work);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = jitter;
      return llt.matrixL();
    }
  }
  throw NumericalError(
      "Cholesky factorization failed after jitter ladder up to 1e-4 * mean "
      "diagonal (matrix size " +
      std::to_string(A.rows()) + ", mean diagonal " + std::to_string(mean_diag) +
      ")");
}

double log_marginal_likelihood(const Dataset& data, const AnyKernel& kernel,
                               double noise_variance) {
  data.validate(kernel_dim(kernel));
  const Eigen::Index n = data.X.rows();
  Mat K = gram(kernel, data.X);
  K.diagonal().array() += noise_variance;
  const Mat L = jittered_cholesky(K);
  const Vec alpha = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(data.y));
  return -0.5 * data.y.dot(alpha) - L.diagonal().array().log().sum() -
         0.5 * static_cast<double>(n) * kLogTwoPi;
}

Vec mll_gradient(const Dataset& data, const AnyKernel& kernel,
                 double noise_variance) {
  data.validate(kernel_dim(kernel));
  const Eigen::Index n = data.X.rows();
  Mat K = gram(kernel, data.X);
  K.diagonal().array() += noise_variance;
  const Mat L = jittered_cholesky(K);
  const Vec alpha = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(data.y));
  // (K + noise I)^{-1} from the factor.
  Mat Kinv = Mat::Identity(n, n);
  L.triangularView<Eigen::Lower>().solveInPlace(Kinv);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(Kinv);
  const Mat W = alpha * alpha.transpose() - Kinv;

  const KernelTemplate tmpl = template_of(kernel);
  const int kp = tmpl.kernel_param_count();
  Vec grad = Vec::Zero(kp + 1);
  Vec pair_grad(kp);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec xi = data.X.row(i).transpose();
    for (Eigen::Index j = i; j < n; ++j) {
      grad_pair(kernel, xi, data.X.row(j).transpose(), pair_grad);
      const double w = (i == j) ? 0.5 * W(i, j) : W(i, j);
      grad.head(kp) += w * pair_grad;
    }
  }
  // d K / d log noise = noise * I.
  grad[kp] = 0.5 * noise_variance * W.trace();
  return grad;
}

GPModel::GPModel(AnyKernel kernel, double noise, int dim) noexcept
    : kernel_(std::move(kernel)), noise_(noise), dim_(dim) {}

GPModel GPModel::fit(AnyKernel kernel, double noise_variance,
                     const Dataset& data) {
  data.validate(kernel_dim(kernel));
  GPModel m(std::move(kernel), noise_variance, data.dim());
  m.X_ = data.X;
  m.y_ = data.y;
  Mat K = gram(m.kernel_, m.X_);
  K.diagonal().array() += noise_variance;
  m.L_ = jittered_cholesky(K);
  m.alpha_ = m.L_.transpose().triangularView<Eigen::Upper>().solve(
      m.L_.triangularView<Eigen::Lower>().solve(m.y_));
  return m;
}

GPModel GPModel::prior(AnyKernel kernel, double noise_variance, int dim) {
  check_dim(dim, kernel_dim(kernel), "GPModel prior dim");
  GPModel m(std::move(kernel), noise_variance, dim);
  m.X_ = Mat(0, dim);
  m.y_ = Vec(0);
  m.L_ = Mat(0, 0);
  m.alpha_ = Vec(0);
  return m;
}

void GPModel::predict(const Mat& Xstar, Vec& mean, Vec& variance,
                      bool latent_only) const {
  check_dim(Xstar.cols(), dim_, "predict inputs");
  const Eigen::Index m = Xstar.rows();
  mean.resize(m);
  variance.resize(m);
  if (X_.rows() == 0) {
    mean.setZero();
    parallel_for(m, [&](std::int64_t i) {
      const Vec xs = Xstar.row(i).transpose();
      variance[i] = eval_pair(kernel_, xs, xs);
    });
  } else {
    const Mat Kxs = gram(kernel_, X_, Xstar);  // n x m
    const Mat V = L_.triangularView<Eigen::Lower>().solve(Kxs);
    mean = Kxs.transpose() * alpha_;
    parallel_for(m, [&](std::int64_t i) {
      const Vec xs = Xstar.row(i).transpose();
      variance[i] = eval_pair(kernel_, xs, xs) - V.col(i).squaredNorm();
    });
  }
  if (!latent_only) variance.array() += noise_;
  variance = variance.cwiseMax(0.0);
}

double GPModel::log_marginal_likelihood() const {
  if (X_.rows() == 0)
    throw std::invalid_argument("log_marginal_likelihood: model has no data");
  return -0.5 * y_.dot(alpha_) - L_.diagonal().array().log().sum() -
         0.5 * static_cast<double>(X_.rows()) * kLogTwoPi;
}

}  // namespace gsk
