#pragma once

// Independent reference computations used by the unit tests, the acceptance suite and the
// `selftest` CLI command.  Nothing here calls into the code paths it is used to check.

#include "hftg/frac_ops.hpp"

#include <Eigen/Dense>

namespace hftg::checks {

// (-1)^j binom(alpha, j) from log-Gamma values with explicit sign tracking.
double gl_weight_closed_form(double alpha, int j);

// (f_{l+1} - f_{l-1}) / (2h) on interior rows, zero boundary rows.
Eigen::MatrixXd central_difference_matrix(const LogGrid& grid);

/// Smooth bump exp(-1 / (1 - t^2)), t = (ln x - ln c) / rho, with its exact D_H derivatives.
/// Vanishes with all derivatives outside |ln x - ln c| < rho.
LogSmoothFunction log_bump(double center, double rho);

// (ln(x/a))^p with exact D_H derivatives.
LogSmoothFunction log_power(double a, double p);

// Empirical covariance (divide by count) of column samples.
Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples_by_column);

// log2(|u1 - u2| / |u2 - u4|): observed order of three solutions on nested refinements.
double richardson_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& medium,
                        const Eigen::VectorXd& fine);

}  // namespace hftg::checks
