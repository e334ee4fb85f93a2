#pragma once

#include "hftg/frac_ops.hpp"
#include "hftg/prior.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hftg {

using ForwardMap = std::function<Eigen::VectorXd(const Field&)>;

/// Data misfit Phi(u) = ||G(u) - y||^2 / (2 sigma^2).
class Potential {
 public:
  Potential(ForwardMap forward, Eigen::VectorXd data, double sigma);

  // Phi identically zero, for m observations.
  static Potential null(Eigen::Index observations = 1);

  const Eigen::VectorXd& data() const noexcept { return data_; }
  double sigma() const noexcept { return sigma_; }

  // Evaluates G(u).
  Eigen::VectorXd predict(const Field& u) const { return forward_(u); }

 private:
  ForwardMap forward_;
  Eigen::VectorXd data_;
  double sigma_;
};

double phi(const Potential& potential, const Field& u);

struct PCNConfig {
  double beta = 0.03;
  std::int64_t n_samples = 1000;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  std::uint64_t seed = 1;
  bool keep_samples = false;       // store every kept state (batch mode)
  bool record_acceptance = false;  // store a(u, v) for every iteration

  void validate() const;
};

// v = sqrt(1 - beta^2) u + beta w.
Field pcn_propose(const Field& u, double beta, const Field& w);

// min{1, exp(Phi(u) + R(u) - Phi(v) - R(v))}.
double acceptance(double phi_u, double r_u, double phi_v, double r_v);

struct Chain {
  std::vector<Field> samples;  // only when keep_samples
  std::vector<double> acceptance_log;
  // Welford accumulators over the kept states.
  Field running_mean;
  Field running_m2;
  std::int64_t kept = 0;
  std::int64_t accepted = 0;
  std::int64_t total = 0;
  std::int64_t energy_evaluations = 0;
  Field final_state;
};

/// pCN Metropolis–Hastings targeting dmu/dmu0 ∝ exp(-Phi(u) - R(u)).
///
/// Each iteration draws w ~ N(0, C0) through the prior factor, then theta ~ U[0, 1), and
/// accepts when theta <= a(u, v).  The energy of the current state is cached, so a run costs
/// n_samples + 1 energy evaluations.  A proposal whose energy is +inf is rejected; a NaN energy
/// aborts with NumericalError.  Kept states: iteration i >= burn_in with (i - burn_in) % thin == 0.
Chain run_pcn(const PCNConfig& cfg, const GaussianPrior& prior, const HFTVFunctional& hftv,
              const Potential& potential, const Field& u0);

struct PosteriorSummary {
  Field mean;
  Field pointwise_std;
  double acceptance_rate = 0.0;
};

// Batch moments of chain.samples when present, the streaming accumulators otherwise.
PosteriorSummary summarize(const Chain& chain);

}  // namespace hftg
