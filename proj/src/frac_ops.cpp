#include "hftg/frac_ops.hpp"

#include "hftg/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hftg {

LogGrid::LogGrid(double a, double b, int intervals) : a_(a), b_(b), intervals_(intervals) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("LogGrid: a must be positive");
  if (!(b > a) || !std::isfinite(b)) throw DomainError("LogGrid: b must exceed a");
  if (intervals < 2) throw DomainError("LogGrid: need at least 2 subintervals");
  log_a_ = std::log(a);
  step_ = (std::log(b) - log_a_) / intervals;
  nodes_.resize(intervals + 1);
  for (int j = 0; j <= intervals; ++j) nodes_[j] = std::exp(log_a_ + j * step_);
  // exp(ln b) can miss b by an ulp; keep the end points exact.
  nodes_[0] = a;
  nodes_[intervals] = b;
}

Field LogGrid::sample(const std::function<double(double)>& f) const {
  Field out(size());
  for (int j = 0; j < size(); ++j) out[j] = f(nodes_[j]);
  return out;
}

LogGrid make_log_grid(double a, double b, int intervals) { return LogGrid(a, b, intervals); }

Eigen::VectorXd trapezoid_weights(const LogGrid& grid) {
  const auto& x = grid.nodes();
  const int n = grid.intervals();
  Eigen::VectorXd w(n + 1);
  w[0] = 0.5 * (x[1] - x[0]);
  w[n] = 0.5 * (x[n] - x[n - 1]);
  for (int j = 1; j < n; ++j) w[j] = 0.5 * (x[j + 1] - x[j - 1]);
  return w;
}

void check_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("fractional order must lie in (0,1] or (1,2), got " + std::to_string(alpha));
  }
}

int regime_of(double alpha) {
  check_order(alpha);
  return alpha <= 1.0 ? 1 : 2;
}

GLWeights::GLWeights(double alpha, int last_index) : alpha_(alpha) {
  check_order(alpha);
  if (last_index < 0) throw DomainError("GLWeights: last index must be non-negative");
  omega_.resize(static_cast<std::size_t>(last_index) + 1);
  omega_[0] = 1.0;
  for (int j = 1; j <= last_index; ++j) {
    omega_[j] = (1.0 - (1.0 + alpha) / j) * omega_[j - 1];
  }
}

GLWeights gl_weights(double alpha, int last_index) { return GLWeights(alpha, last_index); }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Riesz: return "riesz";
  }
  return "unknown";
}

FracOperator::FracOperator(const LogGrid& grid, double alpha, Direction direction)
    : grid_(grid), alpha_(alpha), direction_(direction), regime_(regime_of(alpha)) {
  const int n = grid.intervals();
  const GLWeights w(alpha, n + 1);
  const double scale = std::pow(grid.step(), -alpha);

  Eigen::MatrixXd left = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd right = Eigen::MatrixXd::Zero(n + 1, n + 1);
  // Shift of one node for the n = 2 scheme.
  const int shift = regime_ == 2 ? 1 : 0;
  for (int l = 1; l < n; ++l) {
    for (int j = 0; j <= l + shift; ++j) left(l, l - j + shift) += w[j];
    for (int j = 0; j <= n - l + shift; ++j) right(l, l + j - shift) += w[j];
  }

  switch (direction) {
    case Direction::Left: matrix_ = scale * left; break;
    case Direction::Right: matrix_ = scale * right; break;
    case Direction::Riesz:
      if (regime_ == 1) matrix_ = (0.5 * scale) * (left - right);
      else matrix_ = (0.5 * scale) * (left + right);
      break;
  }
}

Field FracOperator::apply(const Field& f) const {
  if (f.size() != grid_.size()) throw DomainError("FracOperator: field size does not match grid");
  return matrix_ * f;
}

FracOperator build_operator(const LogGrid& grid, double alpha, Direction direction) {
  return FracOperator(grid, alpha, direction);
}

namespace {

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F>
double composite_gauss(const F& g, double upper, int panels) {
  const double width = upper / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    double panel = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      panel += kGaussWeights[k] * g(mid + 0.5 * width * kGaussNodes[k]);
    }
    sum += 0.5 * width * panel;
  }
  return sum;
}

// One-sided Caputo–Hadamard derivative after the tau substitution.
double one_sided(const LogSmoothFunction& f, double a, double b, double alpha, bool left, double x,
                 double tol) {
  const int n = alpha < 1.0 ? 1 : 2;
  const double power = n - alpha;
  const auto& dhn = n == 1 ? f.dh1 : f.dh2;
  // (-D_H)^n on the right side.
  const double sign = (!left && n == 1) ? -1.0 : 1.0;
  const double log_span = left ? std::log(x / a) : std::log(b / x);
  const double upper = std::pow(log_span, power);
  auto integrand = [&](double tau) {
    const double sigma = std::pow(tau, 1.0 / power);
    return dhn(left ? x * std::exp(-sigma) : x * std::exp(sigma));
  };

  int panels = 4;
  double previous = composite_gauss(integrand, upper, panels);
  for (int level = 0; level < 16; ++level) {
    panels *= 2;
    const double current = composite_gauss(integrand, upper, panels);
    if (std::abs(current - previous) <= tol) return sign * current / std::tgamma(n + 1.0 - alpha);
    previous = current;
  }
  throw ConvergenceError("quadrature_hadamard: refinement did not reach tolerance at x = " +
                         std::to_string(x));
}

}  // namespace

double quadrature_hadamard(const LogSmoothFunction& f, double a, double b, double alpha,
                           Direction direction, double x, double tol) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
    throw DomainError("quadrature_hadamard: order must lie in (0,1) or (1,2)");
  }
  if (!(a > 0.0 && a < x && x < b)) throw DomainError("quadrature_hadamard: need 0 < a < x < b");
  if (!(tol > 0.0)) throw DomainError("quadrature_hadamard: tolerance must be positive");

  switch (direction) {
    case Direction::Left: return one_sided(f, a, b, alpha, true, x, tol);
    case Direction::Right: return one_sided(f, a, b, alpha, false, x, tol);
    case Direction::Riesz: {
      const double sign = alpha < 1.0 ? -1.0 : 1.0;
      return 0.5 * (one_sided(f, a, b, alpha, true, x, tol) +
                    sign * one_sided(f, a, b, alpha, false, x, tol));
    }
  }
  return 0.0;
}

double ibp_residual(const Field& f, const Field& g, double alpha, const LogGrid& grid) {
  const FracOperator op(grid, alpha, Direction::Riesz);
  const Eigen::VectorXd w = trapezoid_weights(grid).cwiseQuotient(grid.nodes());
  const double lhs = w.dot(f.cwiseProduct(op.apply(g)));
  const double rhs = w.dot(op.apply(f).cwiseProduct(g));
  const double sign = op.regime() == 1 ? -1.0 : 1.0;
  return std::abs(lhs - sign * rhs);
}

}  // namespace hftg
