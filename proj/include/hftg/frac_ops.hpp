#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace hftg {

// Grid function sampled at the N+1 nodes of a LogGrid.
using Field = Eigen::VectorXd;

/// Nodes equispaced in s = ln(x) on [a, b]:  x_j = exp(ln a + j h),  h = (ln b - ln a) / N.
class LogGrid {
 public:
  LogGrid(double a, double b, int intervals);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int intervals() const noexcept { return intervals_; }
  int size() const noexcept { return intervals_ + 1; }
  double step() const noexcept { return step_; }

  double node(int j) const { return nodes_[j]; }
  double log_node(int j) const { return log_a_ + j * step_; }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }

  // Zero field on this grid.
  Field zeros() const { return Field::Zero(size()); }
  Field sample(const std::function<double(double)>& f) const;

 private:
  double a_;
  double b_;
  int intervals_;
  double log_a_;
  double step_;
  Eigen::VectorXd nodes_;
};

LogGrid make_log_grid(double a, double b, int intervals);

// Trapezoid weights for the integral over [a, b] in the physical variable x.
Eigen::VectorXd trapezoid_weights(const LogGrid& grid);

/// Grünwald–Letnikov coefficients w_j = (-1)^j binom(alpha, j), generated by
/// w_0 = 1, w_j = (1 - (1 + alpha) / j) w_{j-1}.
class GLWeights {
 public:
  GLWeights(double alpha, int last_index);

  double alpha() const noexcept { return alpha_; }
  int size() const noexcept { return static_cast<int>(omega_.size()); }
  double operator[](int j) const { return omega_[j]; }
  std::span<const double> values() const noexcept { return omega_; }

 private:
  double alpha_;
  std::vector<double> omega_;
};

GLWeights gl_weights(double alpha, int last_index);

enum class Direction { Left, Right, Riesz };

std::string_view to_string(Direction d);

// Rejects alpha outside (0, 1] U (1, 2).  alpha == 1 is admitted (central-difference limit).
void check_order(double alpha);

// n with alpha in (n-1, n); alpha == 1 uses the n = 1 scheme.
int regime_of(double alpha);

/// Dense GL discretization of the left / right / Riesz Hadamard derivative on a LogGrid.
///
/// Interior rows l = 1..N-1 carry the one-sided sums
///   n = 1:  left  h^-a sum_{j=0}^{l}     w_j f_{l-j},     right h^-a sum_{j=0}^{N-l}   w_j f_{l+j}
///   n = 2:  left  h^-a sum_{j=0}^{l+1}   w_j f_{l-j+1},   right h^-a sum_{j=0}^{N-l+1} w_j f_{l+j-1}
/// and Riesz = (left - right) / 2 for n = 1, (left + right) / 2 for n = 2.
/// Rows 0 and N are identically zero.
class FracOperator {
 public:
  FracOperator(const LogGrid& grid, double alpha, Direction direction);

  double alpha() const noexcept { return alpha_; }
  Direction direction() const noexcept { return direction_; }
  int regime() const noexcept { return regime_; }
  const LogGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  Field apply(const Field& f) const;

 private:
  LogGrid grid_;
  double alpha_;
  Direction direction_;
  int regime_;
  Eigen::MatrixXd matrix_;
};

FracOperator build_operator(const LogGrid& grid, double alpha, Direction direction);

/// A function on [a, b] together with its Hadamard derivatives D_H f = x f'(x) and D_H^2 f.
/// The quadrature oracle evaluates the Caputo form, so it needs D_H^n f rather than f itself.
struct LogSmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> dh1;
  std::function<double(double)> dh2;
};

/// Hadamard derivative at a < x < b by direct quadrature of the singular-kernel integral.
///
/// Uses the Caputo form (equal to the Hadamard form when D_H^k f vanishes at the relevant
/// endpoints).  The substitution tau = (ln(x/t))^(n-alpha) turns the weakly singular kernel into
///   1 / Gamma(n + 1 - alpha) * int_0^{L^(n-alpha)} (D_H^n f)(x exp(-tau^(1/(n-alpha)))) dtau,
/// which is integrated with composite 8-point Gauss–Legendre, doubling panels until two
/// successive estimates differ by at most tol.  Throws ConvergenceError otherwise.
double quadrature_hadamard(const LogSmoothFunction& f, double a, double b, double alpha,
                           Direction direction, double x, double tol);

// |int x^-1 f D g dx - (-1)^n int x^-1 (D f) g dx| with the Riesz operator and trapezoid rule.
double ibp_residual(const Field& f, const Field& g, double alpha, const LogGrid& grid);

}  // namespace hftg
