#include "hftg/prior.hpp"

#include "hftg/errors.hpp"

#include <cmath>
#include <sstream>

namespace hftg {

GaussianPrior::GaussianPrior(const LogGrid& grid, double gamma, double length)
    : grid_(grid), gamma_(gamma), length_(length) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("prior: gamma must be positive");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("prior: d must be positive");

  const int n = grid.size();
  const auto& x = grid.nodes();
  cov_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    cov_(i, i) = gamma;
    for (int j = 0; j < i; ++j) {
      const double r = (x[i] - x[j]) / length;
      cov_(i, j) = cov_(j, i) = gamma * std::exp(-0.5 * r * r);
    }
  }

  // Jitter escalation: 1e-12 gamma, x10 per attempt, give up beyond 1e-6 gamma.
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (double eps = 1e-12 * gamma; eps <= 1e-6 * gamma * (1.0 + 1e-9); eps *= 10.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov_ + eps * eye);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = eps;
      return;
    }
  }
  std::ostringstream msg;
  msg << "prior: Cholesky failed with jitter up to 1e-6*gamma (gamma=" << gamma << ", d=" << length
      << ", N=" << grid.intervals() << ")";
  throw FactorizationError(msg.str());
}

Field GaussianPrior::apply_factor(const Eigen::VectorXd& z) const {
  if (z.size() != chol_.rows()) throw DomainError("prior: draw has wrong length");
  return chol_.triangularView<Eigen::Lower>() * z;
}

Field GaussianPrior::sample(Rng& rng) const {
  Eigen::VectorXd z(chol_.rows());
  rng.fill_normal({z.data(), static_cast<std::size_t>(z.size())});
  return apply_factor(z);
}

GaussianPrior build_prior(const LogGrid& grid, double gamma, double length) {
  return GaussianPrior(grid, gamma, length);
}

Field sample_prior(const GaussianPrior& prior, Rng& rng) { return prior.sample(rng); }

HFTVFunctional::HFTVFunctional(const LogGrid& grid, double alpha, double lambda)
    : lambda_(lambda), op_(grid, alpha, Direction::Riesz), weights_(trapezoid_weights(grid)) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("hftv: lambda must be >= 0");
}

double HFTVFunctional::operator()(const Field& u) const {
  if (lambda_ == 0.0) return 0.0;
  return lambda_ * weights_.dot(op_.apply(u).cwiseAbs());
}

double HFTVFunctional::lipschitz_bound() const {
  return lambda_ * (op_.matrix().cwiseAbs().transpose() * weights_).norm();
}

double hftv(const HFTVFunctional& fun, const Field& u) { return fun(u); }

}  // namespace hftg
