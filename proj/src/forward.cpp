#include "hftg/forward.hpp"

#include "hftg/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace hftg {

namespace {

void check_field(const LogGrid& grid, const Field& f, const char* who) {
  if (f.size() != grid.size()) {
    throw DomainError(std::string(who) + ": field length " + std::to_string(f.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  }
  if (!f.allFinite()) throw DomainError(std::string(who) + ": field has non-finite entries");
}

}  // namespace

ConvolutionModel::ConvolutionModel(const LogGrid& grid, double width) : grid_(grid), width_(width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("convolution: r must be positive");
  const int n = grid.size();
  const auto& x = grid.nodes();
  const double c = 1.0 / (width * std::sqrt(2.0 * std::numbers::pi));
  const double hc = grid.step() * c;
  kernel_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    kernel_(i, i) = hc;
    for (int j = 0; j < i; ++j) {
      const double dx = x[i] - x[j];
      kernel_(i, j) = kernel_(j, i) = hc * std::exp(-dx * dx / (2.0 * width * width));
    }
  }
}

Eigen::VectorXd convolve(const ConvolutionModel& model, const Field& f) {
  check_field(model.grid(), f, "convolve");
  return model.kernel() * f;
}

HeatModel::HeatModel(const LogGrid& grid, HeatSettings settings)
    : grid_(grid), settings_(settings) {
  if (!(settings.final_time > 0.0)) throw DomainError("heat: final time must be positive");
  if (settings.time_steps < 1) throw DomainError("heat: need at least one time step");
  for (double th : {settings.theta_diffusion, settings.theta_convection}) {
    if (!(th >= 0.0 && th <= 1.0)) throw DomainError("heat: theta must lie in [0, 1]");
  }

  dt_ = settings.final_time / settings.time_steps;
  const int n = grid.intervals() - 1;
  const double h = grid.step();
  const double t0 = settings.theta_diffusion;
  const double t1 = settings.theta_convection;

  exp_lower_.resize(n);
  exp_diag_.resize(n);
  exp_upper_.resize(n);
  imp_lower_.resize(n);
  Eigen::VectorXd imp_diag(n), imp_upper(n);
  for (int i = 0; i < n; ++i) {
    const double e = std::exp(-2.0 * grid.log_node(i + 1));
    // e * (theta0 * Laplacian - theta1 * first difference), split by neighbour.
    auto lower = [&](double a, double b) { return e * (a / (h * h) + b / (2.0 * h)); };
    auto diag = [&](double a) { return -2.0 * e * a / (h * h); };
    auto upper = [&](double a, double b) { return e * (a / (h * h) - b / (2.0 * h)); };
    imp_lower_[i] = -dt_ * lower(t0, t1);
    imp_diag[i] = 1.0 - dt_ * diag(t0);
    imp_upper[i] = -dt_ * upper(t0, t1);
    exp_lower_[i] = dt_ * lower(1.0 - t0, 1.0 - t1);
    exp_diag_[i] = 1.0 + dt_ * diag(1.0 - t0);
    exp_upper_[i] = dt_ * upper(1.0 - t0, 1.0 - t1);
  }

  imp_pivot_.resize(n);
  imp_ratio_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double m = imp_diag[i] - (i > 0 ? imp_lower_[i] * imp_ratio_[i - 1] : 0.0);
    if (std::abs(m) <= 1e-14 * std::abs(imp_diag[i])) throw SolveError("heat: singular step matrix");
    imp_pivot_[i] = m;
    imp_ratio_[i] = imp_upper[i] / m;
  }

  initial_.resize(n);
  for (int i = 0; i < n; ++i) initial_[i] = std::sin(std::numbers::pi * grid.node(i + 1));

  offset_ = initial_;
  response_ = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd column(n);
  for (int k = 0; k < settings.time_steps; ++k) {
    offset_ = explicit_apply(offset_);
    implicit_solve(offset_);
    for (int j = 0; j < n; ++j) {
      column = explicit_apply(response_.col(j));
      column[j] += dt_;
      implicit_solve(column);
      response_.col(j) = column;
    }
  }
}

Eigen::VectorXd HeatModel::explicit_apply(const Eigen::VectorXd& u) const {
  const Eigen::Index n = u.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = exp_diag_[i] * u[i];
    if (i > 0) v += exp_lower_[i] * u[i - 1];
    if (i + 1 < n) v += exp_upper_[i] * u[i + 1];
    out[i] = v;
  }
  return out;
}

void HeatModel::implicit_solve(Eigen::Ref<Eigen::VectorXd> rhs) const {
  const Eigen::Index n = rhs.size();
  rhs[0] /= imp_pivot_[0];
  for (Eigen::Index i = 1; i < n; ++i) rhs[i] = (rhs[i] - imp_lower_[i] * rhs[i - 1]) / imp_pivot_[i];
  for (Eigen::Index i = n - 2; i >= 0; --i) rhs[i] -= imp_ratio_[i] * rhs[i + 1];
}

Eigen::VectorXd HeatModel::step_through(const Field& f) const {
  check_field(grid_, f, "heat");
  const Eigen::VectorXd source = dt_ * f.segment(1, grid_.intervals() - 1);
  Eigen::VectorXd u = initial_;
  for (int k = 0; k < settings_.time_steps; ++k) {
    u = explicit_apply(u) + source;
    implicit_solve(u);
  }
  return u;
}

Eigen::VectorXd heat_forward(const HeatModel& model, const Field& f) {
  check_field(model.grid(), f, "heat_forward");
  return model.response() * f.segment(1, model.grid().intervals() - 1) + model.offset();
}

EllipticModel::EllipticModel(const LogGrid& grid, const Field& source_coefficient,
                             CoefficientCheck check)
    : grid_(grid), check_(check) {
  check_field(grid, source_coefficient, "elliptic source coefficient");
  const double a = grid.a();
  const double b = grid.b();
  source_.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    source_[j] = source_coefficient[j] * (x - a) * (x - b) - 2.0;
  }

  const int n = grid.intervals() - 1;
  const double h = grid.step();
  lower_.resize(n);
  diag_.resize(n);
  upper_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double e = std::exp(-2.0 * grid.log_node(i + 1));
    lower_[i] = -e * (1.0 / (h * h) + 1.0 / (2.0 * h));
    diag_[i] = 2.0 * e / (h * h);
    upper_[i] = -e * (1.0 / (h * h) - 1.0 / (2.0 * h));
  }
}

Field EllipticModel::solve_state(const Field& q) const {
  check_field(grid_, q, "elliptic_forward");
  if (check_ == CoefficientCheck::NonNegative && q.minCoeff() < 0.0) {
    throw PreconditionError("elliptic_forward: coefficient q must be non-negative");
  }
  const int n = grid_.intervals() - 1;
  Eigen::VectorXd ratio(n);
  Field u = Field::Zero(grid_.size());
  double prev_ratio = 0.0;
  double prev_value = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = diag_[i] + q[i + 1];
    const double m = d - (i > 0 ? lower_[i] * prev_ratio : 0.0);
    if (!(std::abs(m) > 1e-13 * diag_[i])) {
      throw SolveError("elliptic_forward: singular discrete operator at row " + std::to_string(i + 1));
    }
    prev_ratio = ratio[i] = upper_[i] / m;
    prev_value = u[i + 1] = (source_[i + 1] - (i > 0 ? lower_[i] * prev_value : 0.0)) / m;
  }
  for (int i = n - 2; i >= 0; --i) u[i + 1] -= ratio[i] * u[i + 2];
  if (!u.allFinite()) throw SolveError("elliptic_forward: non-finite solution");
  return u;
}

double EllipticModel::residual(const Field& q, const Field& u) const {
  double worst = 0.0;
  for (int i = 0; i + 1 < grid_.intervals(); ++i) {
    const double r = lower_[i] * u[i] + (diag_[i] + q[i + 1]) * u[i + 1] + upper_[i] * u[i + 2] -
                     source_[i + 1];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

Eigen::VectorXd elliptic_forward(const EllipticModel& model, const Field& q) {
  const Field u = model.solve_state(q);
  const LogGrid& grid = model.grid();
  const int n = grid.intervals() - 1;
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    g[i] = (u[i + 2] - u[i]) / (2.0 * grid.step()) / grid.node(i + 1);
  }
  return g;
}

Observation add_noise(std::span<const double> clean, double sigma,
                      std::span<const double> standard_normals) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("add_noise: sigma must be positive");
  if (standard_normals.size() != clean.size()) throw DomainError("add_noise: length mismatch");
  Observation obs;
  obs.sigma = sigma;
  obs.values.resize(static_cast<Eigen::Index>(clean.size()));
  for (std::size_t i = 0; i < clean.size(); ++i) {
    obs.values[static_cast<Eigen::Index>(i)] = clean[i] + sigma * standard_normals[i];
  }
  return obs;
}

Observation add_noise(std::span<const double> clean, double sigma, Rng& rng) {
  std::vector<double> z(clean.size());
  rng.fill_normal(z);
  return add_noise(clean, sigma, z);
}

}  // namespace hftg
