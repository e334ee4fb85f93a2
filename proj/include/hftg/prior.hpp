#pragma once

#include "hftg/frac_ops.hpp"
#include "hftg/random.hpp"

#include <Eigen/Dense>

namespace hftg {

/// Gaussian reference measure N(0, C0) with the squared-exponential covariance
///   c0(x1, x2) = gamma * exp(-0.5 * ((x1 - x2) / d)^2)
/// evaluated at the physical nodes.  The Cholesky factor carries a recorded diagonal jitter.
class GaussianPrior {
 public:
  GaussianPrior(const LogGrid& grid, double gamma, double length);

  double gamma() const noexcept { return gamma_; }
  double length() const noexcept { return length_; }
  const LogGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }
  const Eigen::MatrixXd& factor() const noexcept { return chol_; }
  double jitter() const noexcept { return jitter_; }

  // chol * z for a caller-supplied standard-normal vector.
  Field apply_factor(const Eigen::VectorXd& z) const;
  Field sample(Rng& rng) const;

 private:
  LogGrid grid_;
  double gamma_;
  double length_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

GaussianPrior build_prior(const LogGrid& grid, double gamma, double length);
Field sample_prior(const GaussianPrior& prior, Rng& rng);

/// R(u) = lambda * int_a^b |D^alpha u| dx with the Riesz GL operator and the trapezoid rule in x.
class HFTVFunctional {
 public:
  HFTVFunctional(const LogGrid& grid, double alpha, double lambda);

  double lambda() const noexcept { return lambda_; }
  double alpha() const noexcept { return op_.alpha(); }
  const FracOperator& op() const noexcept { return op_; }
  const Eigen::VectorXd& quad_weights() const noexcept { return weights_; }

  double operator()(const Field& u) const;

  // Lipschitz constant w.r.t. the Euclidean norm: lambda * || |op|^T w ||_2 is an upper bound.
  double lipschitz_bound() const;

 private:
  double lambda_;
  FracOperator op_;
  Eigen::VectorXd weights_;
};

double hftv(const HFTVFunctional& fun, const Field& u);

}  // namespace hftg
