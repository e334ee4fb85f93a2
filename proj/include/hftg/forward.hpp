#pragma once

#include "hftg/frac_ops.hpp"
#include "hftg/random.hpp"

#include <Eigen/Dense>

#include <span>

namespace hftg {

struct Observation {
  Eigen::VectorXd values;
  double sigma = 0.0;
};

/// Left-rectangle discretization of the Gaussian blur on a log grid:
///   K_ij = h C exp(-(x_i - x_j)^2 / (2 r^2)),  C = 1 / (r sqrt(2 pi)),
/// with h the step in s = ln x.
class ConvolutionModel {
 public:
  ConvolutionModel(const LogGrid& grid, double width);

  const LogGrid& grid() const noexcept { return grid_; }
  double width() const noexcept { return width_; }
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }

 private:
  LogGrid grid_;
  double width_;
  Eigen::MatrixXd kernel_;
};

Eigen::VectorXd convolve(const ConvolutionModel& model, const Field& f);

struct HeatSettings {
  double final_time = 1.0;
  int time_steps = 120;
  double theta_diffusion = 0.5;   // theta_0
  double theta_convection = 0.5;  // theta_1
};

/// u_t = e^{-2s} (u_ss - u_s) + f(x) on a log grid, homogeneous Dirichlet ends,
/// u(x, 0) = sin(pi x), theta-scheme in time with central differences in s.
///
/// The final state at the interior nodes is affine in f: u(T) = A f_int + c.
/// A and c are assembled once at construction.
class HeatModel {
 public:
  HeatModel(const LogGrid& grid, HeatSettings settings = {});

  const LogGrid& grid() const noexcept { return grid_; }
  const HeatSettings& settings() const noexcept { return settings_; }
  const Eigen::MatrixXd& response() const noexcept { return response_; }
  const Eigen::VectorXd& offset() const noexcept { return offset_; }
  // sin(pi x) at interior nodes.
  const Eigen::VectorXd& initial_state() const noexcept { return initial_; }

  // Explicit time stepping of the full scheme; reference for the affine decomposition.
  Eigen::VectorXd step_through(const Field& f) const;

 private:
  Eigen::VectorXd explicit_apply(const Eigen::VectorXd& u) const;
  void implicit_solve(Eigen::Ref<Eigen::VectorXd> rhs) const;

  LogGrid grid_;
  HeatSettings settings_;
  double dt_;
  // Tridiagonal coefficients of the explicit and implicit halves, interior rows only.
  Eigen::VectorXd exp_lower_, exp_diag_, exp_upper_;
  Eigen::VectorXd imp_lower_, imp_pivot_, imp_ratio_;
  Eigen::VectorXd initial_;
  Eigen::MatrixXd response_;
  Eigen::VectorXd offset_;
};

Eigen::VectorXd heat_forward(const HeatModel& model, const Field& f);

enum class CoefficientCheck {
  NonNegative,  // reject q with a negative entry
  Signed,       // accept any q; only a singular discrete operator fails
};

/// -u'' + q u = f on [a, b], u(a) = u(b) = 0, solved in s = ln x:
///   -e^{-2s} (u_ss - u_s) + q u = f,
/// observed through u'(x) = e^{-s} u_s at the interior nodes.
///
/// The source is fixed at construction from a source coefficient q_src:
///   f(x) = q_src(x) (x - a) (x - b) - 2,
/// so that u = (x - a)(x - b) solves the problem for q = q_src.
class EllipticModel {
 public:
  EllipticModel(const LogGrid& grid, const Field& source_coefficient,
                CoefficientCheck check = CoefficientCheck::NonNegative);

  const LogGrid& grid() const noexcept { return grid_; }
  const Field& source() const noexcept { return source_; }
  CoefficientCheck check() const noexcept { return check_; }

  // Full nodal solution u, zero at both ends.
  Field solve_state(const Field& q) const;

  // max_l |(-e^{-2s}(u_ss - u_s) + q u - f)_l| over interior rows.
  double residual(const Field& q, const Field& u) const;

 private:
  LogGrid grid_;
  Field source_;
  CoefficientCheck check_;
  Eigen::VectorXd lower_, diag_, upper_;
};

Eigen::VectorXd elliptic_forward(const EllipticModel& model, const Field& q);

// y = clean + sigma * z with z drawn from rng.
Observation add_noise(std::span<const double> clean, double sigma, Rng& rng);
// Same with a caller-supplied standard-normal vector (length must match).
Observation add_noise(std::span<const double> clean, double sigma,
                      std::span<const double> standard_normals);

}  // namespace hftg
