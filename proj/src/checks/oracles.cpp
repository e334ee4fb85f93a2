#include "hftg/checks/oracles.hpp"

#include <cmath>

namespace hftg::checks {

namespace {

// Sign of Gamma(z) for non-integer z.
double gamma_sign(double z) {
  if (z > 0.0) return 1.0;
  const double k = std::ceil(-z);
  return std::fmod(k, 2.0) == 0.0 ? 1.0 : -1.0;
}

bool is_nonpositive_integer(double z) { return z <= 0.0 && z == std::floor(z); }

}  // namespace

double gl_weight_closed_form(double alpha, int j) {
  const double lower = alpha - j + 1.0;
  // 1 / Gamma at a pole is zero: binom(alpha, j) = 0 for integer alpha < j.
  if (is_nonpositive_integer(lower)) return 0.0;
  const double log_mag = std::lgamma(alpha + 1.0) - std::lgamma(j + 1.0) - std::lgamma(lower);
  const double sign = gamma_sign(alpha + 1.0) * gamma_sign(lower) * (j % 2 == 0 ? 1.0 : -1.0);
  return sign * std::exp(log_mag);
}

Eigen::MatrixXd central_difference_matrix(const LogGrid& grid) {
  const int n = grid.intervals();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const double inv = 1.0 / (2.0 * grid.step());
  for (int l = 1; l < n; ++l) {
    m(l, l + 1) = inv;
    m(l, l - 1) = -inv;
  }
  return m;
}

LogSmoothFunction log_bump(double center, double rho) {
  const double sc = std::log(center);
  auto parts = [sc, rho](double x, double& value, double& d1, double& d2) {
    const double t = (std::log(x) - sc) / rho;
    if (std::abs(t) >= 1.0) {
      value = d1 = d2 = 0.0;
      return;
    }
    const double q = 1.0 - t * t;
    const double p1 = -2.0 * t / (q * q);
    const double p2 = -2.0 * (1.0 + 3.0 * t * t) / (q * q * q);
    value = std::exp(-1.0 / q);
    d1 = value * p1 / rho;
    d2 = value * (p1 * p1 + p2) / (rho * rho);
  };
  LogSmoothFunction f;
  f.value = [parts](double x) { double v, a, b; parts(x, v, a, b); return v; };
  f.dh1 = [parts](double x) { double v, a, b; parts(x, v, a, b); return a; };
  f.dh2 = [parts](double x) { double v, a, b; parts(x, v, a, b); return b; };
  return f;
}

LogSmoothFunction log_power(double a, double p) {
  LogSmoothFunction f;
  f.value = [a, p](double x) { return std::pow(std::log(x / a), p); };
  f.dh1 = [a, p](double x) { return p * std::pow(std::log(x / a), p - 1.0); };
  f.dh2 = [a, p](double x) { return p * (p - 1.0) * std::pow(std::log(x / a), p - 2.0); };
  return f;
}

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples) {
  const Eigen::VectorXd mean = samples.rowwise().mean();
  const Eigen::MatrixXd centered = samples.colwise() - mean;
  return centered * centered.transpose() / static_cast<double>(samples.cols());
}

double richardson_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& medium,
                        const Eigen::VectorXd& fine) {
  return std::log2((coarse - medium).norm() / (medium - fine).norm());
}

}  // namespace hftg::checks
